#include "pirs/phase_alphabet.hpp"

#include <cmath>
#include <string>

#include "pirs/errors.hpp"

namespace pirs {

namespace {
// Half-step offsets closer than this (in units of one step) count as ties.
constexpr double kTieSlack = 1e-9;
}  // namespace

PhaseAlphabet::PhaseAlphabet(int bits) : bits_(bits), levels_(0) {
  if (bits < 1 || bits > kMaxBits)
    throw InvalidArgument("phase resolution must be 1.." + std::to_string(kMaxBits) +
                          " bits, got " + std::to_string(bits));
  levels_ = 1 << bits;
}

cplx PhaseAlphabet::value(int index) const {
  const int k = wrap(index);
  // Quarter turns are exact so that b = 1, 2 alphabets stay exactly {+-1, +-j}.
  if ((4 * k) % levels_ == 0) {
    switch ((4 * k) / levels_) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }
  return std::polar(1.0, phase(k));
}

std::vector<double> PhaseAlphabet::phases() const {
  std::vector<double> out(levels_);
  for (int k = 0; k < levels_; ++k) out[k] = phase(k);
  return out;
}

UnitComplex quantize_phase(double theta, const PhaseAlphabet& alphabet) {
  if (!std::isfinite(theta)) throw InvalidArgument("quantize_phase: non-finite phase");
  const int levels = alphabet.levels();
  double x = std::fmod(theta / alphabet.step(), static_cast<double>(levels));
  if (x < 0) x += levels;
  const double lo = std::floor(x);
  const double frac = x - lo;
  const int lo_idx = alphabet.wrap(static_cast<int>(lo));
  const int hi_idx = alphabet.wrap(static_cast<int>(lo) + 1);
  int idx;
  if (std::abs(frac - 0.5) <= kTieSlack)
    idx = std::min(lo_idx, hi_idx);
  else
    idx = frac < 0.5 ? lo_idx : hi_idx;
  return UnitComplex(alphabet, idx);
}

UnitComplex quantize_value(cplx z, const PhaseAlphabet& alphabet) {
  if (z == cplx(0.0, 0.0)) return UnitComplex(alphabet, 0);
  return quantize_phase(std::arg(z), alphabet);
}

int quantize_rational(long long num, long long den, const PhaseAlphabet& alphabet) {
  if (den <= 0) throw InvalidArgument("quantize_rational: denominator must be positive");
  const long long levels = alphabet.levels();
  // Target position in steps is t = num*K/den, reduced into [0, K).
  long long scaled = (num * levels) % (levels * den);
  if (scaled < 0) scaled += levels * den;
  const long long lo = scaled / den;
  const long long rem = scaled - lo * den;
  const int lo_idx = alphabet.wrap(static_cast<int>(lo));
  const int hi_idx = alphabet.wrap(static_cast<int>(lo + 1));
  if (2 * rem == den) return std::min(lo_idx, hi_idx);
  return 2 * rem < den ? lo_idx : hi_idx;
}

UnitComplex product(const UnitComplex& a, const UnitComplex& b) {
  if (a.alphabet() != b.alphabet())
    throw InvalidArgument("product: operands use different alphabets");
  return UnitComplex(a.alphabet(), a.index() + b.index());
}

}  // namespace pirs
