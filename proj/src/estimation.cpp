#include "pirs/estimation.hpp"

#include <cmath>

#include "pirs/errors.hpp"

namespace pirs {

namespace {
CMat to_complex(const IMat& m) { return m.cast<double>().cast<cplx>(); }

void require_square(const CMat& a, const char* who) {
  if (a.rows() != a.cols()) throw InvalidArgument(std::string(who) + ": matrix must be square");
}
}  // namespace

CVec simulate_training_rx(const CMat& theta, const CVec& h_eff, double P, double sigma2, Rng& rng) {
  if (theta.cols() != h_eff.size())
    throw InvalidArgument("simulate_training_rx: dimension mismatch");
  CVec y = std::sqrt(P) * (theta * h_eff);
  if (sigma2 > 0.0) y += complex_normal_vector(rng, y.size(), sigma2);
  return y;
}

CVec ls_per_group(const CVec& y, const CMat& theta, double P) {
  require_square(theta, "ls_per_group");
  if (theta.rows() != y.size()) throw InvalidArgument("ls_per_group: dimension mismatch");
  return checked_inverse(theta) * y / std::sqrt(P);
}

CVec resolve_subgroups(const CVec& eta_hat, const IMat& psi) {
  if (psi.rows() != psi.cols() || psi.rows() != eta_hat.size())
    throw InvalidArgument("resolve_subgroups: dimension mismatch");
  return checked_inverse(to_complex(psi)) * eta_hat;
}

CMat error_covariance(const CMat& theta, const IMat& psi, double sigma2, double P) {
  require_square(theta, "error_covariance");
  return hermitian_part((sigma2 / P) * kron(gram_inverse(theta), gram_inverse(to_complex(psi))));
}

double subgroup_trace_factor(const IMat& psi) { return gram_inverse(to_complex(psi)).trace().real(); }

double closed_form_intra_mse(const CMat& theta, const IMat& psi, double sigma2, double P) {
  require_square(theta, "closed_form_intra_mse");
  return (sigma2 / P) * gram_inverse(theta).trace().real() * subgroup_trace_factor(psi);
}

CVec effective_channels(const CVec& h, const PartitionState& state, int M) {
  const int L = state.group_size;
  if (static_cast<Eigen::Index>(M) * L != h.size())
    throw InvalidArgument("effective_channels: channel length does not match groups x group size");
  const auto refl = state.element_reflection();
  CVec out = CVec::Zero(M);
  for (int m = 0; m < M; ++m)
    for (int e = 0; e < L; ++e) out(m) += static_cast<double>(refl[e]) * h(m * L + e);
  return out;
}

ProgressiveEstimator::ProgressiveEstimator(const CMat& theta, int L, PartitionScheme scheme, double P,
                                           double sigma2)
    : theta_(theta), M_(static_cast<int>(theta.rows())), L_(L), P_(P), sigma2_(sigma2) {
  require_square(theta, "ProgressiveEstimator");
  if (L < 1) throw InvalidArgument("ProgressiveEstimator: group size must be >= 1");
  if (!(P > 0.0)) throw InvalidArgument("ProgressiveEstimator: power must be positive");
  theta_inv_ = checked_inverse(theta);
  const CMat c = gram_inverse(theta);
  states_ = partition_sequence(L, scheme);
  for (const auto& s : states_) {
    const CMat psi = to_complex(s.psi);
    psi_inv_.push_back(checked_inverse(psi));
    cov_.push_back(hermitian_part(kron(c, gram_inverse(psi))));
  }
  eta_.resize(M_, 0);
}

BlockEstimate ProgressiveEstimator::next_block(const CVec& h, Rng& noise) {
  const int i = block() + 1;
  if (i > L_) throw CannotRefine("ProgressiveEstimator: all blocks already trained");
  const PartitionState& st = states_[i - 1];
  const CVec h_eff = effective_channels(h, st, M_);
  CVec y = std::sqrt(P_) * (theta_ * h_eff);
  if (sigma2_ > 0.0) y += complex_normal_vector(noise, M_, sigma2_);

  BlockEstimate out;
  out.block = i;
  out.per_group_effective = theta_inv_ * y / std::sqrt(P_);
  eta_.conservativeResize(M_, i);
  eta_.col(i - 1) = out.per_group_effective;
  out.stacked_effective = eta_;
  out.subgroup_channels.resize(static_cast<Eigen::Index>(i) * M_);
  for (int m = 0; m < M_; ++m)
    out.subgroup_channels.segment(static_cast<Eigen::Index>(m) * i, i) =
        psi_inv_[i - 1] * eta_.row(m).transpose();
  out.error_covariance = (sigma2_ / P_) * cov_[i - 1];
  return out;
}

}  // namespace pirs
