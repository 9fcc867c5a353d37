#include "pirs/protocol.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "pirs/errors.hpp"

namespace pirs {

std::string to_string(InitPolicy p) {
  switch (p) {
    case InitPolicy::SdrEveryBlock: return "sdr-every-block";
    case InitPolicy::Replication: return "replication";
    default: return "gain-max";
  }
}

std::string to_string(BasisKind b) { return b == BasisKind::Naive ? "naive" : "dft-hadamard"; }

InitPolicy parse_init_policy(const std::string& s) {
  if (s == "sdr-every-block") return InitPolicy::SdrEveryBlock;
  if (s == "replication") return InitPolicy::Replication;
  if (s == "gain-max") return InitPolicy::GainMax;
  throw InvalidArgument("unknown initializer policy '" + s + "' (sdr-every-block|replication|gain-max)");
}

BasisKind parse_basis_kind(const std::string& s) {
  if (s == "dft-hadamard") return BasisKind::DftHadamard;
  if (s == "naive") return BasisKind::Naive;
  throw InvalidArgument("unknown basis '" + s + "' (dft-hadamard|naive)");
}

std::vector<std::string> FrameConfig::violations() const {
  std::vector<std::string> v;
  if (N < 1) v.push_back("frame.N must be >= 1");
  if (M < 1) v.push_back("frame.M must be >= 1");
  if (N >= 1 && M >= 1 && N % M != 0)
    v.push_back("frame.N (" + std::to_string(N) + ") is not divisible by frame.M (" + std::to_string(M) + ")");
  if (M0 < 1) v.push_back("frame.M0 must be >= 1");
  if (M >= M0) v.push_back("frame.M (" + std::to_string(M) + ") must be < frame.M0 (" + std::to_string(M0) + "): no data symbols");
  if (I0 < 0) v.push_back("frame.I0 must be >= 1");
  if (!(P > 0) || !std::isfinite(P)) v.push_back("power.P must be positive");
  if (!(sigma2 >= 0) || !std::isfinite(sigma2)) v.push_back("power.sigma2 must be >= 0");
  if (!(gamma >= 1.0) || !std::isfinite(gamma)) v.push_back("rate.gamma must be >= 0 dB");
  if (bits < 0 || bits > PhaseAlphabet::kMaxBits) v.push_back("phase.bits must be in 0..16 (0 = continuous)");
  if (!(epsilon >= 0)) v.push_back("beamforming.epsilon must be >= 0");
  if (draws < 0) v.push_back("beamforming.draws must be >= 0");
  if (geometry.rows < 1 || geometry.cols < 1) v.push_back("geometry.rows and geometry.cols must be >= 1");
  if (geometry.rows * geometry.cols != N)
    v.push_back("geometry.rows * geometry.cols (" + std::to_string(geometry.rows * geometry.cols) +
                ") must equal frame.N (" + std::to_string(N) + ")");
  for (const Point3* p : {&geometry.user, &geometry.ap, &geometry.irs_center})
    for (double c : *p)
      if (!std::isfinite(c)) {
        v.push_back("geometry positions must be finite");
        break;
      }
  if (geometry.user == geometry.irs_center || geometry.ap == geometry.irs_center)
    v.push_back("terminals must not coincide with the IRS center");
  if (!(link.beta0 > 0)) v.push_back("link.beta0 must be positive");
  if (link.alpha_ui < 0 || link.alpha_ia < 0) v.push_back("path-loss exponents must be >= 0");
  if (link.k_ui < 0 || link.k_ia < 0) v.push_back("Rician factors must be >= 0 (linear)");
  return v;
}

void FrameConfig::validate() const {
  const auto v = violations();
  if (v.empty()) return;
  std::ostringstream os;
  os << "invalid frame configuration:";
  for (const auto& s : v) os << "\n  - " << s;
  throw InvalidArgument(os.str());
}

CMat frame_basis(const FrameConfig& cfg, int M, std::string* method) {
  CMat theta;
  std::string how;
  if (cfg.basis == BasisKind::Naive) {
    theta = naive_matrix(M).values();
    how = "naive";
  } else if (cfg.continuous()) {
    theta = dft_matrix(M);
    how = "dft";
  } else {
    auto rep = design_basis_matrix(M, PhaseAlphabet(cfg.bits));
    theta = rep.matrix.values();
    how = rep.method;
  }
  if (!is_full_rank(theta)) throw SingularMatrix("basis training matrix (" + how + ", M=" + std::to_string(M) + ") is rank deficient");
  if (method) *method = how;
  return theta;
}

namespace {

template <typename Vec>
Vec replicate(const Vec& prev, int groups, int parent) {
  const int width = static_cast<int>(prev.size() / groups);
  Vec out(static_cast<Eigen::Index>(groups) * (width + 1));
  for (int m = 0; m < groups; ++m) {
    const int src = m * width, dst = m * (width + 1);
    out.segment(dst, parent + 1) = prev.segment(src, parent + 1);
    out(dst + parent + 1) = prev(src + parent);
    out.segment(dst + parent + 2, width - parent - 1) = prev.segment(src + parent + 1, width - parent - 1);
  }
  return out;
}

CVec continuous_gain_max(const CVec& g) {
  Eigen::Index best = 0;
  for (Eigen::Index l = 1; l < g.size(); ++l)
    if (std::abs(g(l)) > std::abs(g(best))) best = l;
  CVec phi(g.size());
  for (Eigen::Index l = 0; l < g.size(); ++l) phi(l) = std::polar(1.0, std::arg(g(l)) - std::arg(g(best)));
  return phi;
}

struct Beam {
  CVec phi;
  IVec phases;  // empty in continuous mode
  std::string init;
  int sweeps = 0;
};

// One block of beamforming under the configured policy. `prev_*` hold the
// previous block's design (empty at block 1); `parent` is this block's split.
Beam beamform_block(const FrameConfig& cfg, const BeamformingProblem& prob, int groups, const Beam* prev,
                    int parent, Rng& rng) {
  const SdrOptions sdr{cfg.draws, {}};
  const bool use_sdr = cfg.init == InitPolicy::SdrEveryBlock || (cfg.init == InitPolicy::Replication && !prev);
  Beam out;
  if (cfg.continuous()) {
    if (use_sdr) {
      std::vector<CVec> warm;
      if (prev) warm.push_back(replicate(prev->phi, groups, parent));
      try {
        out.phi = continuous_upper_bound(prob, rng, sdr, warm).phi;
        out.init = "sdr";
      } catch (const SolverFailure&) {
        out.phi = continuous_refinement(continuous_gain_max(prob.g_hat), prob);
        out.init = "gain-max(sdr-fallback)";
      }
    } else if (cfg.init == InitPolicy::GainMax || !prev) {
      out.phi = continuous_refinement(continuous_gain_max(prob.g_hat), prob);
      out.init = "gain-max";
    } else {
      out.phi = continuous_refinement(replicate(prev->phi, groups, parent), prob);
      out.init = "replication";
    }
    return out;
  }
  IVec start;
  if (use_sdr) {
    start = init_sdr(prob, rng, sdr, &out.init);
  } else if (cfg.init == InitPolicy::GainMax || !prev) {
    try {
      start = init_gain_max(prob);
      out.init = "gain-max";
    } catch (const DegenerateInput&) {
      start = IVec::Zero(prob.size());
      out.init = "gain-max(degenerate)";
    }
  } else {
    start = init_replication(prev->phases, groups, parent);
    out.init = "replication";
  }
  const auto sol = successive_refinement(start, prob, cfg.epsilon);
  out.phases = sol.phases;
  out.phi = sol.phi;
  out.sweeps = sol.sweeps;
  return out;
}

double realized_snr(const CVec& phi, const CVec& g_true, double P, double sigma2) {
  const double num = P * std::norm(phi.dot(g_true));
  if (sigma2 <= 0) return num > 0 ? std::numeric_limits<double>::infinity() : 0.0;
  return num / sigma2;
}

double prelog_rate(double prelog, double snr, double gamma) { return prelog * std::log2(1.0 + snr / gamma); }

PhaseAlphabet alphabet_of(const FrameConfig& cfg) { return PhaseAlphabet(cfg.continuous() ? 1 : cfg.bits); }

}  // namespace

FrameRunner::FrameRunner(FrameConfig config) : cfg_(std::move(config)) {
  cfg_.validate();
  theta_ = frame_basis(cfg_, cfg_.M, &basis_method_);
  theta_trace_ = gram_inverse(theta_).trace().real();
  est_ = std::make_unique<ProgressiveEstimator>(theta_, cfg_.L(), cfg_.scheme, cfg_.P, cfg_.sigma2);
}

std::vector<BlockResult> FrameRunner::run(const ChannelRealization& ch, TrialRngs& rngs) {
  if (ch.h_cascaded.size() != cfg_.N) throw InvalidArgument("run_frame: channel length differs from N");
  est_->reset();
  const double prelog = static_cast<double>(cfg_.M0 - cfg_.M) / cfg_.M0;
  const PhaseAlphabet alphabet = alphabet_of(cfg_);
  std::vector<BlockResult> out;
  Beam prev;
  for (int i = 1; i <= cfg_.blocks(); ++i) {
    const BlockEstimate e = est_->next_block(ch.h_cascaded, rngs.noise);
    const PartitionState& part = est_->partition(i);
    const CVec g_true = aggregate(ch.h_cascaded, part, cfg_.M);
    const BeamformingProblem prob{e.subgroup_channels, e.error_covariance, cfg_.P, cfg_.sigma2, alphabet};
    const int parent = i > 1 ? part.lineage.back().parent : 0;
    Beam beam = beamform_block(cfg_, prob, cfg_.M, i > 1 ? &prev : nullptr, parent, rngs.algo);

    BlockResult r;
    r.block = i;
    r.design_sinr = sinr(beam.phi, prob);
    r.realized_snr = realized_snr(beam.phi, g_true, cfg_.P, cfg_.sigma2);
    r.rate = prelog_rate(prelog, r.design_sinr, cfg_.gamma);
    r.realized_rate = prelog_rate(prelog, r.realized_snr, cfg_.gamma);
    r.mse = (e.subgroup_channels - g_true).squaredNorm();
    r.nmse_empirical = cfg_.sigma2 > 0 ? r.mse / (cfg_.sigma2 / cfg_.P) : 0.0;
    r.nmse_closed = theta_trace_ * subgroup_trace_factor(part.psi);
    r.init = beam.init;
    r.sweeps = beam.sweeps;
    out.push_back(r);
    prev = std::move(beam);
  }
  return out;
}

std::vector<BlockResult> run_frame(const FrameConfig& config, const ChannelRealization& channel, TrialRngs& rngs) {
  FrameRunner runner(config);
  return runner.run(channel, rngs);
}

std::vector<BlockResult> run_frame(const FrameConfig& config, TrialRngs& rngs) {
  config.validate();
  const ChannelRealization ch = sample_channels(config.geometry, config.link, rngs.channel);
  return run_frame(config, ch, rngs);
}

std::vector<BlockResult> run_random_selection_benchmark(const FrameConfig& cfg, const ChannelRealization& ch,
                                                        TrialRngs& rngs) {
  cfg.validate();
  const double prelog = static_cast<double>(cfg.M0 - cfg.M) / cfg.M0;
  const int K = cfg.continuous() ? 0 : (1 << cfg.bits);
  const PhaseAlphabet alphabet = alphabet_of(cfg);
  std::uniform_real_distribution<double> uphase(0.0, 2.0 * kPi);
  std::vector<BlockResult> out;
  double best = 0.0;
  CVec theta(cfg.N);
  for (int i = 1; i <= cfg.blocks(); ++i) {
    for (int t = 0; t < cfg.M; ++t) {
      for (int n = 0; n < cfg.N; ++n)
        theta(n) = K ? alphabet.value(static_cast<int>(rngs.algo() % static_cast<std::uint64_t>(K)))
                     : std::polar(1.0, uphase(rngs.algo));
      best = std::max(best, realized_snr(theta, ch.h_cascaded, cfg.P, cfg.sigma2));
    }
    BlockResult r;
    r.block = i;
    r.realized_snr = r.design_sinr = best;
    r.realized_rate = r.rate = prelog_rate(prelog, best, cfg.gamma);
    r.init = "random-selection";
    out.push_back(r);
  }
  return out;
}

AllAtOnceResult run_all_at_once_benchmark(const FrameConfig& cfg, const ChannelRealization& ch, TrialRngs& rngs) {
  cfg.validate();
  const int N = cfg.N;
  std::string method;
  const CMat theta = frame_basis(cfg, N, &method);
  ProgressiveEstimator est(theta, 1, cfg.scheme, cfg.P, cfg.sigma2);
  const BlockEstimate e = est.next_block(ch.h_cascaded, rngs.noise);
  const PhaseAlphabet alphabet = alphabet_of(cfg);
  const BeamformingProblem prob{e.subgroup_channels, e.error_covariance, cfg.P, cfg.sigma2, alphabet};
  const Beam beam = beamform_block(cfg, prob, N, nullptr, 0, rngs.algo);

  AllAtOnceResult out;
  const int frame = cfg.frame_blocks() * cfg.M0;
  out.own_prelog = cfg.M0 > N ? static_cast<double>(cfg.M0 - N) / cfg.M0
                              : std::max(0.0, static_cast<double>(frame - N) / frame);
  out.matched_prelog = static_cast<double>(cfg.M0 - cfg.M) / cfg.M0;
  BlockResult& r = out.result;
  r.block = 1;
  r.design_sinr = sinr(beam.phi, prob);
  r.realized_snr = realized_snr(beam.phi, ch.h_cascaded, cfg.P, cfg.sigma2);
  out.own_rate = prelog_rate(out.own_prelog, r.realized_snr, cfg.gamma);
  out.matched_rate = prelog_rate(out.matched_prelog, r.realized_snr, cfg.gamma);
  r.rate = prelog_rate(out.own_prelog, r.design_sinr, cfg.gamma);
  r.realized_rate = out.own_rate;
  r.mse = (e.subgroup_channels - ch.h_cascaded).squaredNorm();
  r.nmse_empirical = cfg.sigma2 > 0 ? r.mse / (cfg.sigma2 / cfg.P) : 0.0;
  r.nmse_closed = gram_inverse(theta).trace().real();
  r.init = beam.init;
  r.sweeps = beam.sweeps;
  return out;
}

}  // namespace pirs
