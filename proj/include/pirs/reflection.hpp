#pragma once

#include <Eigen/Dense>

#include "pirs/phase_alphabet.hpp"

namespace pirs {

using IMat = Eigen::MatrixXi;
using IVec = Eigen::VectorXi;

/// Matrix of unit-modulus coefficients sharing one alphabet, stored as
/// phase indices. Houses basis training matrices, subgroup training
/// matrices and reflection vectors alike.
class ReflectionMatrix {
 public:
  ReflectionMatrix(PhaseAlphabet alphabet, IMat index);

  // Build from a +-1 sign matrix (any alphabet contains both signs).
  static ReflectionMatrix from_signs(const IMat& signs, PhaseAlphabet alphabet = PhaseAlphabet(1));

  const PhaseAlphabet& alphabet() const { return alphabet_; }
  const IMat& index() const { return index_; }
  Eigen::Index rows() const { return index_.rows(); }
  Eigen::Index cols() const { return index_.cols(); }

  UnitComplex at(Eigen::Index r, Eigen::Index c) const {
    return UnitComplex(alphabet_, index_(r, c));
  }
  CMat values() const;

  // Entries as +-1 integers; throws InvalidArgument if any entry is not real.
  IMat signs() const;

  bool operator==(const ReflectionMatrix& o) const {
    return alphabet_ == o.alphabet_ && index_ == o.index_;
  }

 private:
  PhaseAlphabet alphabet_;
  IMat index_;
};

}  // namespace pirs
