#pragma once

#include <memory>
#include <string>
#include <vector>

#include "pirs/beamforming.hpp"
#include "pirs/channel_model.hpp"
#include "pirs/estimation.hpp"
#include "pirs/training_design.hpp"

namespace pirs {

enum class InitPolicy { SdrEveryBlock, Replication, GainMax };
enum class BasisKind { DftHadamard, Naive };

std::string to_string(InitPolicy p);
std::string to_string(BasisKind b);
InitPolicy parse_init_policy(const std::string& s);
BasisKind parse_basis_kind(const std::string& s);

/// All quantities linear (watts, ratios). bits == 0 selects continuous
/// phases: exact DFT training and unquantized beamforming.
struct FrameConfig {
  int N = 80;
  int M = 4;
  int I0 = 0;  // 0 means L
  int M0 = 30;
  double P = 0.1;          // 20 dBm
  double sigma2 = 1.2589254117941673e-12;  // -89 dBm
  double gamma = 7.943282347242816;        // 9 dB
  int bits = 1;
  PartitionScheme scheme = PartitionScheme::Symmetric;
  BasisKind basis = BasisKind::DftHadamard;
  InitPolicy init = InitPolicy::Replication;
  double epsilon = 1e-4;
  int draws = 1000;
  Geometry geometry;
  LinkParams link;
  std::uint64_t seed = 1;

  int L() const { return M > 0 ? N / M : 0; }
  int blocks() const { return std::min(I0 > 0 ? I0 : L(), L()); }
  int frame_blocks() const { return I0 > 0 ? I0 : L(); }
  bool continuous() const { return bits == 0; }

  // Every violated invariant, empty when valid.
  std::vector<std::string> violations() const;
  void validate() const;  // throws InvalidArgument listing all violations
};

struct BlockResult {
  int block = 0;
  double design_sinr = 0.0;    // from the estimate and error covariance
  double realized_snr = 0.0;   // P |phi^H g_true|^2 / sigma2
  double rate = 0.0;           // prelog * log2(1 + design_sinr / Gamma)
  double realized_rate = 0.0;  // prelog * log2(1 + realized_snr / Gamma)
  double mse = 0.0;            // ||g_hat - g||^2
  double nmse_empirical = 0.0; // mse / (sigma2 / P)
  double nmse_closed = 0.0;    // tr((T^H T)^{-1}) tr((Psi^H Psi)^{-1})
  std::string init;
  int sweeps = 0;
};

/// Per-configuration state shared across trials (basis matrix, partitions,
/// precomputed inverses). Not thread-safe; use one runner per worker.
class FrameRunner {
 public:
  explicit FrameRunner(FrameConfig config);

  const FrameConfig& config() const { return cfg_; }
  const CMat& basis() const { return theta_; }
  const std::string& basis_method() const { return basis_method_; }

  std::vector<BlockResult> run(const ChannelRealization& channel, TrialRngs& rngs);

 private:
  FrameConfig cfg_;
  CMat theta_;
  std::string basis_method_;
  double theta_trace_ = 0.0;
  std::unique_ptr<ProgressiveEstimator> est_;
};

std::vector<BlockResult> run_frame(const FrameConfig& config, const ChannelRealization& channel,
                                   TrialRngs& rngs);
// Draws the channel from rngs.channel first.
std::vector<BlockResult> run_frame(const FrameConfig& config, TrialRngs& rngs);

// Basis matrix for M groups under a configuration's alphabet and basis kind.
// Throws SingularMatrix when the choice is rank deficient.
CMat frame_basis(const FrameConfig& config, int M, std::string* method = nullptr);

// M random element-wise reflections per block, cumulative best on the true channel.
std::vector<BlockResult> run_random_selection_benchmark(const FrameConfig& config,
                                                        const ChannelRealization& channel, TrialRngs& rngs);

struct AllAtOnceResult {
  BlockResult result;          // realized_rate uses own_prelog
  double own_prelog = 0.0;     // (M0-N)/M0 if M0 > N, else (I0*M0 - N)/(I0*M0)
  double matched_prelog = 0.0; // (M0-M)/M0 of the progressive configuration
  double own_rate = 0.0;
  double matched_rate = 0.0;
};

// N pilots, one block, beamforming over all N elements.
AllAtOnceResult run_all_at_once_benchmark(const FrameConfig& config, const ChannelRealization& channel,
                                          TrialRngs& rngs);

}  // namespace pirs
