#include "pirs/linalg.hpp"

#include "pirs/errors.hpp"

namespace pirs {

bool is_full_rank(const CMat& a) {
  if (a.rows() != a.cols() || a.rows() == 0) return false;
  Eigen::JacobiSVD<CMat> svd(a);
  const RVec& s = svd.singularValues();
  return s(s.size() - 1) > kRankTolerance * s(0);
}

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CMat checked_inverse(const CMat& a) {
  if (!is_full_rank(a)) throw SingularMatrix("matrix is singular or not square");
  return a.partialPivLu().inverse();
}

CMat gram_inverse(const CMat& a) {
  if (!is_full_rank(a)) throw SingularMatrix("training matrix is rank deficient");
  CMat inv = a.partialPivLu().inverse();
  return hermitian_part(inv * inv.adjoint());
}

double min_eigenvalue(const CMat& a) {
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(a), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

}  // namespace pirs
