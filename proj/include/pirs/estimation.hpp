#pragma once

#include <vector>

#include "pirs/channel_model.hpp"
#include "pirs/reflection.hpp"
#include "pirs/subgroup_partition.hpp"

namespace pirs {

struct BlockEstimate {
  int block = 0;
  CVec per_group_effective;  // h_hat^(i), one entry per group
  CMat stacked_effective;    // M x i, row m holds eta_hat_m
  CVec subgroup_channels;    // g_hat^(i), group-major, length i*M
  CMat error_covariance;     // i*M x i*M, includes sigma2 / P
};

// y = sqrt(P) * Theta * h_eff + z, z ~ CN(0, sigma2 I).
CVec simulate_training_rx(const CMat& theta, const CVec& h_eff, double P, double sigma2, Rng& rng);

// h_hat = Theta^{-1} y / sqrt(P). Throws SingularMatrix on a rank-deficient basis.
CVec ls_per_group(const CVec& y, const CMat& theta, double P);

// g_hat_m = Psi^{-1} eta_hat_m.
CVec resolve_subgroups(const CVec& eta_hat, const IMat& psi);

// (sigma2/P) * (Theta^H Theta)^{-1} (x) (Psi^H Psi)^{-1}, group-major.
CMat error_covariance(const CMat& theta, const IMat& psi, double sigma2, double P);

// (sigma2/P) * tr((Theta^H Theta)^{-1}) * tr((Psi^H Psi)^{-1}).
double closed_form_intra_mse(const CMat& theta, const IMat& psi, double sigma2, double P);

// tr((Psi^H Psi)^{-1}).
double subgroup_trace_factor(const IMat& psi);

// Per-group effective channels under the block's element reflection.
CVec effective_channels(const CVec& h_cascaded, const PartitionState& state, int M);

/// Runs the block-by-block training and LS resolution for one frame.
/// Inverses are precomputed so Monte-Carlo loops stay cheap.
class ProgressiveEstimator {
 public:
  ProgressiveEstimator(const CMat& theta, int L, PartitionScheme scheme, double P, double sigma2);

  int groups() const { return M_; }
  int group_size() const { return L_; }
  int block() const { return static_cast<int>(eta_.cols()); }
  const PartitionState& partition(int block) const { return states_.at(block - 1); }
  const std::vector<PartitionState>& partitions() const { return states_; }

  // Train block (block() + 1) against the true cascaded channel.
  BlockEstimate next_block(const CVec& h_cascaded, Rng& noise);

  void reset() { eta_.resize(M_, 0); }

  // Unitless covariance (P/sigma2) R for a block; independent of sigma2.
  const CMat& normalized_covariance(int block) const { return cov_.at(block - 1); }

 private:
  CMat theta_;
  CMat theta_inv_;
  int M_, L_;
  double P_, sigma2_;
  std::vector<PartitionState> states_;
  std::vector<CMat> psi_inv_;
  std::vector<CMat> cov_;
  CMat eta_;
};

}  // namespace pirs
