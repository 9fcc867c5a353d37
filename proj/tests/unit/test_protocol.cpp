#include <gtest/gtest.h>

#include <cmath>

#include "pirs/errors.hpp"
#include "pirs/protocol.hpp"

using namespace pirs;

namespace {
FrameConfig small(int N = 16, int M = 4) {
  FrameConfig c;
  c.N = N;
  c.M = M;
  c.geometry.rows = 4;
  c.geometry.cols = N / 4;
  c.draws = 50;
  return c;
}

bool contains(const std::vector<std::string>& v, const std::string& needle) {
  for (const auto& s : v)
    if (s.find(needle) != std::string::npos) return true;
  return false;
}
}  // namespace

TEST(FrameConfig, DefaultsAreValid) {
  FrameConfig c;
  EXPECT_TRUE(c.violations().empty());
  EXPECT_EQ(c.L(), 20);
  EXPECT_EQ(c.blocks(), 20);
  c.I0 = 5;
  EXPECT_EQ(c.blocks(), 5);
  c.I0 = 50;
  EXPECT_EQ(c.blocks(), 20);
  EXPECT_EQ(c.frame_blocks(), 50);
}

TEST(FrameConfig, CollectsEveryViolation) {
  FrameConfig c;
  c.M = 7;
  c.M0 = 5;
  c.sigma2 = -1;
  c.bits = 17;
  const auto v = c.violations();
  EXPECT_TRUE(contains(v, "not divisible"));
  EXPECT_TRUE(contains(v, "must be < frame.M0"));
  EXPECT_TRUE(contains(v, "sigma2"));
  EXPECT_TRUE(contains(v, "phase.bits"));
  EXPECT_THROW(c.validate(), InvalidArgument);

  FrameConfig g;
  g.geometry.rows = 9;
  EXPECT_TRUE(contains(g.violations(), "geometry.rows * geometry.cols"));
}

TEST(FrameConfig, ParsersRoundTrip) {
  for (auto p : {InitPolicy::SdrEveryBlock, InitPolicy::Replication, InitPolicy::GainMax})
    EXPECT_EQ(parse_init_policy(to_string(p)), p);
  for (auto b : {BasisKind::DftHadamard, BasisKind::Naive}) EXPECT_EQ(parse_basis_kind(to_string(b)), b);
  EXPECT_THROW(parse_init_policy("sdp"), InvalidArgument);
  EXPECT_THROW(parse_basis_kind("dft"), InvalidArgument);
}

TEST(FrameBasis, SelectsByResolution) {
  std::string how;
  FrameConfig c = small();
  frame_basis(c, 4, &how);
  EXPECT_EQ(how, "truncated-hadamard");
  c.bits = 2;
  frame_basis(c, 4, &how);
  EXPECT_EQ(how, "quantized-dft");
  c.bits = 0;
  const CMat d = frame_basis(c, 3, &how);
  EXPECT_EQ(how, "dft");
  EXPECT_NEAR((d.adjoint() * d - 3.0 * CMat::Identity(3, 3)).norm(), 0.0, 1e-12);
  c.basis = BasisKind::Naive;
  EXPECT_THROW(frame_basis(c, 2, &how), SingularMatrix);  // J - 2I is singular at M = 2
  frame_basis(c, 4, &how);
  EXPECT_EQ(how, "naive");
}

TEST(FrameRunner, BlockSequenceAndClosedForm) {
  FrameConfig c = small();
  TrialRngs rngs(trial_seed(7, 0));
  FrameRunner runner(c);
  const auto res = run_frame(c, rngs);
  ASSERT_EQ(res.size(), 4u);
  const double tr_theta = gram_inverse(runner.basis()).trace().real();
  const auto seq = partition_sequence(4, c.scheme);
  const double prelog = 26.0 / 30.0;
  for (int i = 1; i <= 4; ++i) {
    const auto& r = res[i - 1];
    EXPECT_EQ(r.block, i);
    EXPECT_EQ(r.init, i == 1 ? "sdr" : "replication");
    EXPECT_NEAR(r.nmse_closed, tr_theta * subgroup_trace_factor(seq[i - 1].psi), 1e-9);
    EXPECT_NEAR(r.rate, prelog * std::log2(1.0 + r.design_sinr / c.gamma), 1e-12);
    EXPECT_NEAR(r.realized_rate, prelog * std::log2(1.0 + r.realized_snr / c.gamma), 1e-12);
    EXPECT_GT(r.design_sinr, 0.0);
    EXPECT_NEAR(r.nmse_empirical, r.mse / (c.sigma2 / c.P), 1e-9 * r.nmse_empirical);
  }
}

TEST(FrameRunner, DeterministicForSeed) {
  FrameConfig c = small();
  TrialRngs a(trial_seed(3, 5)), b(trial_seed(3, 5));
  const auto ra = run_frame(c, a), rb = run_frame(c, b);
  for (size_t i = 0; i < ra.size(); ++i) {
    EXPECT_EQ(ra[i].design_sinr, rb[i].design_sinr);
    EXPECT_EQ(ra[i].realized_snr, rb[i].realized_snr);
  }
}

TEST(FrameRunner, RunnerReusableAcrossTrials) {
  FrameConfig c = small();
  FrameRunner runner(c);
  TrialRngs a(11), b(11);
  const auto ch1 = sample_channels(c.geometry, c.link, a.channel);
  const auto ch2 = sample_channels(c.geometry, c.link, b.channel);
  const auto r1 = runner.run(ch1, a);
  const auto r2 = runner.run(ch2, b);
  for (size_t i = 0; i < r1.size(); ++i) EXPECT_EQ(r1[i].realized_snr, r2[i].realized_snr);
}

TEST(FrameRunner, PoliciesAndContinuousMode) {
  for (auto init : {InitPolicy::SdrEveryBlock, InitPolicy::GainMax}) {
    FrameConfig c = small();
    c.init = init;
    TrialRngs r(5);
    const auto res = run_frame(c, r);
    for (const auto& b : res) {
      if (init == InitPolicy::SdrEveryBlock) EXPECT_EQ(b.init, "sdr");
      else EXPECT_EQ(b.init.rfind("gain-max", 0), 0u);
    }
  }
  FrameConfig c = small();
  c.bits = 0;
  TrialRngs r(5);
  const auto res = run_frame(c, r);
  for (const auto& b : res) {
    EXPECT_EQ(b.sweeps, 0);
    EXPECT_TRUE(std::isfinite(b.design_sinr));
  }
}

TEST(FrameRunner, NoiselessIsInfinite) {
  FrameConfig c = small();
  c.sigma2 = 0;
  TrialRngs r(2);
  const auto res = run_frame(c, r);
  for (const auto& b : res) {
    EXPECT_TRUE(std::isinf(b.realized_snr));
    EXPECT_LT(b.mse, 1e-30);  // channel power is ~1e-12
  }
}

TEST(Benchmarks, RandomSelectionIsCumulative) {
  FrameConfig c = small();
  TrialRngs r(9);
  const auto ch = sample_channels(c.geometry, c.link, r.channel);
  const auto res = run_random_selection_benchmark(c, ch, r);
  ASSERT_EQ(res.size(), 4u);
  for (size_t i = 1; i < res.size(); ++i) EXPECT_GE(res[i].realized_snr, res[i - 1].realized_snr);
}

TEST(Benchmarks, AllAtOncePrelogs) {
  FrameConfig c = small();
  TrialRngs r(9);
  const auto ch = sample_channels(c.geometry, c.link, r.channel);
  const auto a = run_all_at_once_benchmark(c, ch, r);
  EXPECT_NEAR(a.own_prelog, 14.0 / 30.0, 1e-15);  // M0 > N: pilots fit in one block
  EXPECT_NEAR(a.matched_prelog, 26.0 / 30.0, 1e-15);
  EXPECT_NEAR(a.matched_rate, a.matched_prelog * std::log2(1 + a.result.realized_snr / c.gamma), 1e-12);

  FrameConfig d;  // N = 80 > M0 = 30: pilots span the frame of L blocks
  d.draws = 20;
  TrialRngs r2(4);
  const auto ch2 = sample_channels(d.geometry, d.link, r2.channel);
  const auto b = run_all_at_once_benchmark(d, ch2, r2);
  EXPECT_NEAR(b.own_prelog, (600.0 - 80.0) / 600.0, 1e-15);
}
