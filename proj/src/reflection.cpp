#include "pirs/reflection.hpp"

#include "pirs/errors.hpp"

namespace pirs {

ReflectionMatrix::ReflectionMatrix(PhaseAlphabet alphabet, IMat index)
    : alphabet_(alphabet), index_(std::move(index)) {
  for (Eigen::Index r = 0; r < index_.rows(); ++r)
    for (Eigen::Index c = 0; c < index_.cols(); ++c) index_(r, c) = alphabet_.wrap(index_(r, c));
}

ReflectionMatrix ReflectionMatrix::from_signs(const IMat& signs, PhaseAlphabet alphabet) {
  IMat idx(signs.rows(), signs.cols());
  const int half = alphabet.levels() / 2;
  for (Eigen::Index r = 0; r < signs.rows(); ++r)
    for (Eigen::Index c = 0; c < signs.cols(); ++c) {
      if (signs(r, c) == 1)
        idx(r, c) = 0;
      else if (signs(r, c) == -1)
        idx(r, c) = half;
      else
        throw InvalidArgument("from_signs: entries must be +1 or -1");
    }
  return ReflectionMatrix(alphabet, std::move(idx));
}

CMat ReflectionMatrix::values() const {
  CMat out(rows(), cols());
  for (Eigen::Index r = 0; r < rows(); ++r)
    for (Eigen::Index c = 0; c < cols(); ++c) out(r, c) = alphabet_.value(index_(r, c));
  return out;
}

IMat ReflectionMatrix::signs() const {
  IMat out(rows(), cols());
  const int half = alphabet_.levels() / 2;
  for (Eigen::Index r = 0; r < rows(); ++r)
    for (Eigen::Index c = 0; c < cols(); ++c) {
      if (index_(r, c) == 0)
        out(r, c) = 1;
      else if (index_(r, c) == half)
        out(r, c) = -1;
      else
        throw InvalidArgument("signs: matrix has non-real entries");
    }
  return out;
}

}  // namespace pirs
