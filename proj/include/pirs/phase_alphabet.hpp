#pragma once

#include <vector>

#include "pirs/linalg.hpp"

namespace pirs {

/// Uniform discrete phase set {0, dw, ..., (K-1) dw} with K = 2^bits and
/// dw = 2*pi/K. Phases are addressed by integer index; complex values are
/// materialized on demand so repeated products never drift.
class PhaseAlphabet {
 public:
  static constexpr int kMaxBits = 16;

  explicit PhaseAlphabet(int bits);

  int bits() const { return bits_; }
  int levels() const { return levels_; }
  double step() const { return 2.0 * kPi / levels_; }

  double phase(int index) const { return step() * wrap(index); }
  cplx value(int index) const;
  std::vector<double> phases() const;

  int wrap(int index) const {
    int r = index % levels_;
    return r < 0 ? r + levels_ : r;
  }

  bool operator==(const PhaseAlphabet& o) const { return bits_ == o.bits_; }
  bool operator!=(const PhaseAlphabet& o) const { return bits_ != o.bits_; }

 private:
  int bits_;
  int levels_;
};

/// Unit-modulus coefficient e^{j*omega}, omega a member of an alphabet.
class UnitComplex {
 public:
  UnitComplex(PhaseAlphabet alphabet, int index)
      : alphabet_(alphabet), index_(alphabet.wrap(index)) {}

  int index() const { return index_; }
  const PhaseAlphabet& alphabet() const { return alphabet_; }
  double phase() const { return alphabet_.phase(index_); }
  cplx value() const { return alphabet_.value(index_); }

  bool operator==(const UnitComplex& o) const {
    return alphabet_ == o.alphabet_ && index_ == o.index_;
  }

 private:
  PhaseAlphabet alphabet_;
  int index_;
};

/// Nearest alphabet phase to theta in chordal distance. Exact ties (within
/// round-off) resolve to the smaller phase in [0, 2*pi).
UnitComplex quantize_phase(double theta, const PhaseAlphabet& alphabet);

/// Quantize the phase value of a complex number; z == 0 maps to phase 0.
UnitComplex quantize_value(cplx z, const PhaseAlphabet& alphabet);

/// Exact quantization of the phase 2*pi*num/den using integer arithmetic.
/// Same tie rule as quantize_phase.
int quantize_rational(long long num, long long den, const PhaseAlphabet& alphabet);

/// Phase addition modulo 2*pi; both operands must share an alphabet.
UnitComplex product(const UnitComplex& a, const UnitComplex& b);

}  // namespace pirs
