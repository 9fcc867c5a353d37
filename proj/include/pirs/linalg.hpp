#pragma once

#include <Eigen/Dense>
#include <complex>

namespace pirs {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846;

// Relative threshold on sigma_min / sigma_max below which a matrix is
// treated as rank deficient.
inline constexpr double kRankTolerance = 1e-9;

// True iff the matrix is square and sigma_min > kRankTolerance * sigma_max.
bool is_full_rank(const CMat& a);

// Kronecker product a (x) b.
CMat kron(const CMat& a, const CMat& b);

// Inverse of a square matrix; throws SingularMatrix when rank deficient.
CMat checked_inverse(const CMat& a);

// (A^H A)^{-1}; throws SingularMatrix when A is rank deficient.
CMat gram_inverse(const CMat& a);

inline CMat hermitian_part(const CMat& a) { return (a + a.adjoint()) * 0.5; }

// Smallest eigenvalue of the Hermitian part of a.
double min_eigenvalue(const CMat& a);

}  // namespace pirs
