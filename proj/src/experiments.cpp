#include "pirs/experiments.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <thread>

#include "pirs/errors.hpp"
#include "pirs/estimation.hpp"
#include "pirs/protocol.hpp"

namespace pirs {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const std::map<std::string, std::string>& summaries() {
  static const std::map<std::string, std::string> s = {
      {"mse-vs-M", "normalized per-group training MSE vs group count M and resolution (proposed, quantized DFT, naive)"},
      {"rate-vs-M", "final-block realized rate vs group count M (proposed vs naive training basis)"},
      {"intra-mse-vs-blocks", "normalized subgroup MSE per block, closed form vs simulation, both partition schemes"},
      {"rate-vs-blocks", "realized rate per block for both schemes, random selection, and all-at-once training"},
      {"init-comparison", "realized rate per block for the three initializer policies"},
      {"resolution-sweep", "realized rate per block vs phase resolution (bits=0 is continuous)"},
  };
  return s;
}

std::string grid_label(const std::vector<std::pair<std::string, std::string>>& kv) {
  std::string out;
  for (const auto& [k, v] : kv) {
    if (!out.empty()) out += ';';
    out += k + "=" + v;
  }
  return out;
}

FrameConfig with_groups(FrameConfig f, int M) {
  f.M = M;
  return f;
}

void check_point(const FrameConfig& f, const std::string& grid) {
  const auto v = f.violations();
  if (v.empty()) return;
  std::string msg = "invalid grid point " + grid + ":";
  for (const auto& s : v) msg += " " + s + ";";
  throw InvalidArgument(msg);
}

std::vector<int> default_divisors(const FrameConfig& f) {
  std::vector<int> out;
  for (int M = 2; M < f.M0 && M <= f.N; ++M)
    if (f.N % M == 0) out.push_back(M);
  return out;
}

// M for experiments whose reference setup uses 8 groups.
std::vector<int> groups_or_eight(const ExperimentConfig& c) {
  if (!c.sweep_M.empty()) return c.sweep_M;
  return {8};
}

// Training matrix at a resolution (0 = continuous); empty when singular.
CMat basis_or_empty(const ReflectionMatrix& r) {
  const CMat t = r.values();
  return is_full_rank(t) ? t : CMat();
}

double nmse_or_nan(const CMat& t) { return t.size() ? normalized_training_mse(t) : kNaN; }

struct Point {
  std::string grid;
  TrialFn fn;
};

std::vector<Point> plan_mse_vs_M(const ExperimentConfig& c) {
  std::vector<int> Ms = c.sweep_M;
  if (Ms.empty())
    for (int M = 2; M <= 20; M += 2) Ms.push_back(M);
  const std::vector<int> bits = c.sweep_bits.empty() ? std::vector<int>{1, 2, 3} : c.sweep_bits;
  std::vector<Point> out;
  for (int b : bits)
    for (int M : Ms) {
      const std::string grid = grid_label({{"M", std::to_string(M)}, {"bits", std::to_string(b)}});
      if (M < 1 || b < 0 || b > PhaseAlphabet::kMaxBits) throw InvalidArgument("invalid grid point " + grid);
      CMat proposed, qdft;
      if (b == 0) {
        proposed = qdft = dft_matrix(M);
      } else {
        const PhaseAlphabet a(b);
        proposed = basis_or_empty(design_basis_matrix(M, a).matrix);
        qdft = basis_or_empty(quantized_dft(M, a));
      }
      const double nmse_prop = nmse_or_nan(proposed), nmse_qdft = nmse_or_nan(qdft),
                   nmse_naive = nmse_or_nan(basis_or_empty(naive_matrix(M)));
      out.push_back({grid, [=](std::uint64_t seed) {
                       TrialRngs rngs(seed);
                       double emp = kNaN;
                       if (proposed.size()) {
                         // Unit SNR so the error is already normalized by sigma2 / P.
                         const CVec h = complex_normal_vector(rngs.channel, M);
                         const CVec y = simulate_training_rx(proposed, h, 1.0, 1.0, rngs.noise);
                         emp = (ls_per_group(y, proposed, 1.0) - h).squaredNorm();
                       }
                       return std::vector<Sample>{{0, "proposed_nmse", nmse_prop},
                                                  {0, "proposed_nmse_empirical", emp},
                                                  {0, "quantized_dft_nmse", nmse_qdft},
                                                  {0, "naive_nmse", nmse_naive},
                                                  {0, "lower_bound", 1.0}};
                     }});
    }
  return out;
}

std::vector<Point> plan_rate_vs_M(const ExperimentConfig& c) {
  const std::vector<int> Ms = c.sweep_M.empty() ? default_divisors(c.frame) : c.sweep_M;
  std::vector<Point> out;
  for (int M : Ms) {
    const std::string grid = grid_label({{"M", std::to_string(M)}});
    FrameConfig f = with_groups(c.frame, M);
    f.basis = BasisKind::DftHadamard;
    check_point(f, grid);
    FrameConfig fn = f;
    fn.basis = BasisKind::Naive;
    const bool naive_ok = is_full_rank(naive_matrix(M).values());
    out.push_back({grid, [=](std::uint64_t seed) {
                     TrialRngs rngs(seed);
                     const auto ch = sample_channels(f.geometry, f.link, rngs.channel);
                     const auto prop = run_frame(f, ch, rngs);
                     double naive = kNaN;
                     if (naive_ok) {
                       TrialRngs r2(seed);  // same noise and algorithm streams
                       naive = run_frame(fn, ch, r2).back().realized_rate;
                     }
                     const int last = prop.back().block;
                     return std::vector<Sample>{{last, "proposed_rate", prop.back().realized_rate},
                                                {last, "naive_rate", naive}};
                   }});
  }
  return out;
}

std::vector<Point> plan_intra_mse(const ExperimentConfig& c) {
  std::vector<Point> out;
  for (int M : groups_or_eight(c))
    for (auto scheme : {PartitionScheme::Symmetric, PartitionScheme::Asymmetric}) {
      const std::string grid = grid_label({{"M", std::to_string(M)}, {"scheme", to_string(scheme)}});
      FrameConfig f = with_groups(c.frame, M);
      f.scheme = scheme;
      check_point(f, grid);
      const CMat theta = frame_basis(f, M);
      const ProgressiveEstimator proto(theta, f.L(), f.scheme, f.P, f.sigma2);
      out.push_back({grid, [=](std::uint64_t seed) {
                       TrialRngs rngs(seed);
                       const auto ch = sample_channels(f.geometry, f.link, rngs.channel);
                       ProgressiveEstimator est = proto;
                       const double scale = f.sigma2 > 0 ? f.P / f.sigma2 : 0.0;
                       const double tr_theta = gram_inverse(theta).trace().real();
                       std::vector<Sample> s;
                       for (int i = 1; i <= f.blocks(); ++i) {
                         const auto e = est.next_block(ch.h_cascaded, rngs.noise);
                         const auto& part = est.partition(i);
                         const CVec g = aggregate(ch.h_cascaded, part, M);
                         s.push_back({i, "nmse_empirical", (e.subgroup_channels - g).squaredNorm() * scale});
                         s.push_back({i, "nmse_closed", tr_theta * subgroup_trace_factor(part.psi)});
                       }
                       return s;
                     }});
    }
  return out;
}

std::vector<Sample> per_block(const std::vector<BlockResult>& res, const std::string& prefix, bool design) {
  std::vector<Sample> s;
  for (const auto& r : res) {
    s.push_back({r.block, prefix + "_rate", r.realized_rate});
    if (design) s.push_back({r.block, prefix + "_design_rate", r.rate});
  }
  return s;
}

std::vector<Point> plan_rate_vs_blocks(const ExperimentConfig& c) {
  std::vector<Point> out;
  for (auto scheme : {PartitionScheme::Symmetric, PartitionScheme::Asymmetric}) {
    const std::string grid = grid_label({{"method", "proposed"}, {"scheme", to_string(scheme)}});
    FrameConfig f = c.frame;
    f.scheme = scheme;
    check_point(f, grid);
    out.push_back({grid, [=](std::uint64_t seed) {
                     TrialRngs rngs(seed);
                     const auto ch = sample_channels(f.geometry, f.link, rngs.channel);
                     return per_block(run_frame(f, ch, rngs), "proposed", true);
                   }});
  }
  const FrameConfig f = c.frame;
  check_point(f, "method=random-selection");
  out.push_back({"method=random-selection", [=](std::uint64_t seed) {
                   TrialRngs rngs(seed);
                   const auto ch = sample_channels(f.geometry, f.link, rngs.channel);
                   return per_block(run_random_selection_benchmark(f, ch, rngs), "random_selection", false);
                 }});
  out.push_back({"method=all-at-once", [=](std::uint64_t seed) {
                   TrialRngs rngs(seed);
                   const auto ch = sample_channels(f.geometry, f.link, rngs.channel);
                   const auto a = run_all_at_once_benchmark(f, ch, rngs);
                   return std::vector<Sample>{{0, "all_at_once_rate_own_prelog", a.own_rate},
                                              {0, "all_at_once_rate_matched_prelog", a.matched_rate},
                                              {0, "all_at_once_snr", a.result.realized_snr}};
                 }});
  return out;
}

std::vector<Point> plan_init_comparison(const ExperimentConfig& c) {
  std::vector<Point> out;
  for (auto init : {InitPolicy::SdrEveryBlock, InitPolicy::Replication, InitPolicy::GainMax}) {
    const std::string grid = grid_label({{"init", to_string(init)}});
    FrameConfig f = c.frame;
    f.init = init;
    check_point(f, grid);
    out.push_back({grid, [=](std::uint64_t seed) {
                     TrialRngs rngs(seed);
                     const auto ch = sample_channels(f.geometry, f.link, rngs.channel);
                     return per_block(run_frame(f, ch, rngs), "proposed", false);
                   }});
  }
  return out;
}

std::vector<Point> plan_resolution(const ExperimentConfig& c) {
  const std::vector<int> bits = c.sweep_bits.empty() ? std::vector<int>{1, 2, 3, 0} : c.sweep_bits;
  std::vector<Point> out;
  for (int M : groups_or_eight(c))
    for (int b : bits) {
      const std::string grid = grid_label({{"M", std::to_string(M)}, {"bits", std::to_string(b)}});
      FrameConfig f = with_groups(c.frame, M);
      f.bits = b;
      check_point(f, grid);
      out.push_back({grid, [=](std::uint64_t seed) {
                       TrialRngs rngs(seed);
                       const auto ch = sample_channels(f.geometry, f.link, rngs.channel);
                       return per_block(run_frame(f, ch, rngs), "proposed", true);
                     }});
    }
  return out;
}

std::vector<Point> plan(const std::string& name, const ExperimentConfig& c) {
  if (name == "mse-vs-M") return plan_mse_vs_M(c);
  if (name == "rate-vs-M") return plan_rate_vs_M(c);
  if (name == "intra-mse-vs-blocks") return plan_intra_mse(c);
  if (name == "rate-vs-blocks") return plan_rate_vs_blocks(c);
  if (name == "init-comparison") return plan_init_comparison(c);
  if (name == "resolution-sweep") return plan_resolution(c);
  std::string known;
  for (const auto& n : experiment_names()) known += (known.empty() ? "" : ", ") + n;
  throw InvalidArgument("unknown experiment '" + name + "' (known: " + known + ")");
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {"mse-vs-M",       "rate-vs-M",       "intra-mse-vs-blocks",
                                                 "rate-vs-blocks", "init-comparison", "resolution-sweep"};
  return names;
}

std::string experiment_summary(const std::string& name) {
  const auto it = summaries().find(name);
  if (it == summaries().end()) throw InvalidArgument("unknown experiment '" + name + "'");
  return it->second;
}

std::vector<std::vector<Sample>> run_trials(int n, std::uint64_t base_seed, int threads, const TrialFn& fn) {
  if (n < 1) throw InvalidArgument("trials must be >= 1");
  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min(threads, n);

  std::vector<std::vector<Sample>> out(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (int t; !failed && (t = next++) < n;) {
      try {
        out[t] = fn(trial_seed(base_seed, static_cast<std::uint64_t>(t)));
      } catch (...) {
        errors[t] = std::current_exception();
        failed = true;
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

std::vector<CsvRow> reduce_trials(const std::vector<std::vector<Sample>>& per_trial) {
  std::vector<CsvRow> rows;
  if (per_trial.empty()) return rows;
  const size_t slots = per_trial[0].size();
  const int n = static_cast<int>(per_trial.size());
  for (size_t k = 0; k < slots; ++k) {
    double sum = 0.0;
    bool constant = true;
    for (const auto& t : per_trial) {
      if (t.size() != slots || t[k].block != per_trial[0][k].block || t[k].metric != per_trial[0][k].metric)
        throw std::logic_error("reduce_trials: trials produced different sample layouts");
      sum += t[k].value;
      constant = constant && (t[k].value == per_trial[0][k].value);
    }
    // Deterministic quantities keep their exact value and zero spread.
    const double mean = constant ? per_trial[0][k].value : sum / n;
    double se = 0.0;
    if (n > 1 && !constant) {
      double ss = 0.0;
      for (const auto& t : per_trial) ss += (t[k].value - mean) * (t[k].value - mean);
      se = std::sqrt(ss / (n - 1) / n);
    }
    CsvRow r;
    r.block = per_trial[0][k].block;
    r.metric = per_trial[0][k].metric;
    r.mean = mean;
    r.stderr_ = se;
    r.trials = n;
    rows.push_back(r);
  }
  return rows;
}

std::vector<CsvRow> run_experiment(const ExperimentSpec& spec) {
  if (spec.trials < 1) throw InvalidArgument("trials must be >= 1");
  std::vector<CsvRow> rows;
  for (const auto& p : plan(spec.name, spec.config)) {
    for (auto& r : reduce_trials(run_trials(spec.trials, spec.seed, spec.threads, p.fn))) {
      r.experiment = spec.name;
      r.grid = p.grid;
      r.seed = spec.seed;
      rows.push_back(std::move(r));
    }
  }
  return rows;
}

std::string csv_header() { return "experiment,grid,block,metric,mean,stderr,trials,seed"; }

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

void write_csv(std::ostream& out, const std::vector<CsvRow>& rows) {
  out << csv_header() << '\n';
  for (const auto& r : rows)
    out << r.experiment << ',' << r.grid << ',' << r.block << ',' << r.metric << ',' << format_number(r.mean) << ','
        << format_number(r.stderr_) << ',' << r.trials << ',' << r.seed << '\n';
}

}  // namespace pirs
