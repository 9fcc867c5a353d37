#include "pirs/training_design.hpp"

#include <cmath>
#include <limits>

#include "pirs/errors.hpp"

namespace pirs {

namespace {
// exp(-j 2 pi e / M), exact at quarter turns.
cplx dft_entry(long long e, int M) {
  if ((4 * e) % M == 0) {
    switch ((4 * e / M) % 4) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, -1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, 1.0};
    }
  }
  return std::polar(1.0, -2.0 * kPi * static_cast<double>(e) / M);
}

void require_positive(int M, const char* who) {
  if (M < 1) throw InvalidArgument(std::string(who) + ": dimension must be >= 1");
}
}  // namespace

CMat dft_matrix(int M) {
  require_positive(M, "dft_matrix");
  CMat d(M, M);
  for (int r = 0; r < M; ++r)
    for (int c = 0; c < M; ++c) {
      const long long e = (static_cast<long long>(r) * c) % M;
      d(r, c) = dft_entry(e, M);
    }
  return d;
}

ReflectionMatrix quantized_dft(int M, const PhaseAlphabet& alphabet) {
  require_positive(M, "quantized_dft");
  IMat idx(M, M);
  for (int r = 0; r < M; ++r)
    for (int c = 0; c < M; ++c) {
      const long long e = (static_cast<long long>(r) * c) % M;
      idx(r, c) = quantize_rational(-e, M, alphabet);
    }
  return ReflectionMatrix(alphabet, std::move(idx));
}

ReflectionMatrix truncated_hadamard(int M, const PhaseAlphabet& alphabet) {
  require_positive(M, "truncated_hadamard");
  const int ell = smallest_hadamard_order(M);
  if (!ell)
    throw UnsupportedOrder("no constructible Hadamard order in [" + std::to_string(M) + ", " +
                               std::to_string(4 * M) + "]",
                           0);
  const IMat h = hadamard_matrix(ell);
  return ReflectionMatrix::from_signs(h.topLeftCorner(M, M), alphabet);
}

ReflectionMatrix naive_matrix(int M, const PhaseAlphabet& alphabet) {
  require_positive(M, "naive_matrix");
  IMat s = IMat::Ones(M, M);
  s.diagonal().setConstant(-1);
  return ReflectionMatrix::from_signs(s, alphabet);
}

double normalized_training_mse(const CMat& theta) {
  if (theta.rows() != theta.cols())
    throw SingularMatrix("normalized_training_mse: matrix is not square");
  return gram_inverse(theta).trace().real();
}

double normalized_training_mse(const ReflectionMatrix& theta) {
  return normalized_training_mse(theta.values());
}

TrainingDesignReport make_report(ReflectionMatrix matrix, std::string method) {
  const CMat v = matrix.values();
  const bool ok = is_full_rank(v);
  const double mse = ok ? normalized_training_mse(v) : std::numeric_limits<double>::quiet_NaN();
  return TrainingDesignReport{std::move(matrix), ok, mse, std::move(method)};
}

TrainingDesignReport design_basis_matrix(int M, const PhaseAlphabet& alphabet) {
  if (alphabet.bits() >= 2) return make_report(quantized_dft(M, alphabet), "quantized-dft");
  return make_report(truncated_hadamard(M, alphabet), "truncated-hadamard");
}

TrainingDesignReport exhaustive_optimal_basis(int M, const PhaseAlphabet& alphabet) {
  require_positive(M, "exhaustive_optimal_basis");
  const int cells = M * M;
  if (alphabet.bits() * cells > 16)
    throw SizeLimit("exhaustive_optimal_basis: b*M^2 = " + std::to_string(alphabet.bits() * cells) +
                    " exceeds 16");
  const int K = alphabet.levels();
  std::vector<int> digit(cells, 0);
  IMat best_idx;
  double best = std::numeric_limits<double>::infinity();
  IMat idx(M, M);
  CMat vals(M, M);
  for (;;) {
    // Row-major, first cell most significant: enumeration is lexicographic.
    for (int c = 0; c < cells; ++c) {
      idx(c / M, c % M) = digit[c];
      vals(c / M, c % M) = alphabet.value(digit[c]);
    }
    if (is_full_rank(vals)) {
      const double mse = normalized_training_mse(vals);
      if (mse < best - 1e-12) {
        best = mse;
        best_idx = idx;
      }
    }
    int pos = cells - 1;
    while (pos >= 0 && ++digit[pos] == K) digit[pos--] = 0;
    if (pos < 0) break;
  }
  if (best_idx.size() == 0) throw SingularMatrix("exhaustive_optimal_basis: no full-rank candidate");
  return make_report(ReflectionMatrix(alphabet, best_idx), "exhaustive");
}

}  // namespace pirs
