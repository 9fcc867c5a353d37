#include <gtest/gtest.h>

#include <cmath>

#include "pirs/beamforming.hpp"
#include "pirs/errors.hpp"

using namespace pirs;

namespace {
BeamformingProblem problem(const CVec& g, double P = 1.0, double s2 = 1.0, int bits = 1) {
  BeamformingProblem p;
  p.g_hat = g;
  p.R = CMat::Zero(g.size(), g.size());
  p.P = P;
  p.sigma2 = s2;
  p.alphabet = PhaseAlphabet(bits);
  return p;
}

CMat random_cov(Rng& rng, int n, double scale) {
  CMat F(n, n);
  for (int c = 0; c < n; ++c) F.col(c) = complex_normal_vector(rng, n);
  return scale * F * F.adjoint() / double(n);
}

BeamformingProblem random_problem(Rng& rng, int n, int bits) {
  BeamformingProblem p = problem(complex_normal_vector(rng, n), 1.0, 0.5, bits);
  p.R = random_cov(rng, n, 0.3);
  return p;
}

// Independent oracle: direct formula over every phase-index vector.
double brute_force_sinr(const BeamformingProblem& p) {
  const int K = p.alphabet.levels(), n = static_cast<int>(p.g_hat.size());
  long long total = 1;
  for (int i = 0; i < n; ++i) total *= K;
  double best = 0;
  for (long long code = 0; code < total; ++code) {
    CVec phi(n);
    long long c = code;
    for (int i = 0; i < n; ++i, c /= K) phi(i) = std::polar(1.0, 2 * M_PI * double(c % K) / K);
    cplx s = 0;
    for (int i = 0; i < n; ++i) s += std::conj(phi(i)) * p.g_hat(i);
    cplx q = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) q += std::conj(phi(i)) * p.R(i, j) * phi(j);
    best = std::max(best, p.P * std::norm(s) / (p.P * q.real() + p.sigma2));
  }
  return best;
}
}  // namespace

TEST(Sinr, Examples) {
  CVec g(1);
  g << cplx(0.5, -2);
  EXPECT_NEAR(sinr(CVec(CVec::Ones(1)), problem(g, 3.0, 0.5)), 3.0 * std::norm(g(0)) / 0.5, 1e-12);
  CVec g2(2);
  g2 << 1, -1;
  CVec phi(2);
  phi << 1, -1;
  EXPECT_NEAR(sinr(phi, problem(g2, 2.0, 0.5)), 4 * 2.0 / 0.5, 1e-12);
  // coherent continuous maximum
  Rng rng(1);
  CVec g3 = complex_normal_vector(rng, 5);
  CVec al(5);
  for (int l = 0; l < 5; ++l) al(l) = std::polar(1.0, std::arg(g3(l)));
  EXPECT_NEAR(sinr(al, problem(g3, 1.0, 1.0)), std::pow(g3.cwiseAbs().sum(), 2), 1e-12);
  EXPECT_THROW(sinr(CVec(CVec::Constant(1, 2.0)), problem(g, 1, 1)), InvalidArgument);
}

TEST(Sinr, InterferenceBookkeepingOneDimensional) {
  // R carries sigma2/P: SINR = P|g|^2 / (P r + sigma2) = (P/sigma2)|g|^2 / ((P/sigma2) r + 1).
  CVec g(1);
  g << cplx(2, 0);
  BeamformingProblem p = problem(g, 4.0, 0.5);
  p.R(0, 0) = 0.25;
  const double expect = 4.0 * 4.0 / (4.0 * 0.25 + 0.5);
  EXPECT_NEAR(sinr(CVec(CVec::Ones(1)), p), expect, 1e-12);
  const double k = p.P / p.sigma2;
  EXPECT_NEAR(expect, k * 4.0 / (k * 0.25 + 1.0), 1e-12);
}

TEST(Rate, Examples) {
  EXPECT_EQ(rate_from_sinr(0.0, 4, 30, 1.0), 0.0);
  EXPECT_NEAR(rate_from_sinr(3.0, 15, 30, 1.0), 1.0, 1e-15);
  const double gamma = std::pow(10.0, 0.9);
  EXPECT_NEAR(rate_from_sinr(gamma * 3.0, 15, 30, gamma), 1.0, 1e-12);
  EXPECT_THROW(rate_from_sinr(1.0, 30, 30, 1.0), InvalidArgument);
  EXPECT_THROW(rate_from_sinr(1.0, 1, 30, 0.5), InvalidArgument);
}

TEST(GainMax, Examples) {
  CVec g(3);
  g << 1.0, 2.0, 0.5;
  EXPECT_EQ(init_gain_max(problem(g)), IVec::Zero(3));
  CVec g2(2);
  g2 << 1.0, cplx(0, 1);
  IVec e2(2);
  e2 << 0, 0;
  EXPECT_EQ(init_gain_max(problem(g2)), e2);
  CVec g3(2);
  g3 << 1.0, -1.0;
  IVec e3(2);
  e3 << 0, 1;
  EXPECT_EQ(init_gain_max(problem(g3)), e3);
  EXPECT_NEAR(std::abs(phases_to_vector(e3, PhaseAlphabet(1)).dot(g3)), 2.0, 1e-15);
  EXPECT_THROW(init_gain_max(problem(CVec::Zero(3))), DegenerateInput);
}

TEST(Replication, Examples) {
  IVec a(1);
  a << 3;
  IVec aa(2);
  aa << 3, 3;
  EXPECT_EQ(init_replication(a, 1, 0), aa);
  IVec two(2);
  two << 1, 2;  // groups of width 1
  IVec four(4);
  four << 1, 1, 2, 2;
  EXPECT_EQ(init_replication(two, 2, 0), four);
  IVec w3(6);
  w3 << 0, 1, 2, 3, 4, 5;
  IVec w4(8);
  w4 << 0, 1, 1, 2, 3, 4, 4, 5;
  EXPECT_EQ(init_replication(w3, 2, 1), w4);
  EXPECT_THROW(init_replication(w3, 4, 0), InvalidArgument);
  EXPECT_THROW(init_replication(w3, 2, 3), InvalidArgument);
}

TEST(Refinement, FixedPointUnchanged) {
  CVec g(2);
  g << 1, -1;
  IVec phi(2);
  phi << 0, 1;
  auto s = successive_refinement(phi, problem(g));
  EXPECT_EQ(s.phases, phi);
  EXPECT_EQ(s.sweeps, 1);
}

TEST(Refinement, AscentAndLocalOptimality) {
  Rng rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const int bits = 1 + trial % 3;
    auto p = random_problem(rng, 3 + trial % 10, bits);
    IVec start(p.size());
    for (Eigen::Index l = 0; l < start.size(); ++l) start(l) = static_cast<int>(rng() % p.alphabet.levels());
    auto s = successive_refinement(start, p, 0.0);
    EXPECT_GE(s.sinr, sinr(start, p) * (1 - 1e-12));
    for (size_t k = 1; k < s.history.size(); ++k) EXPECT_GE(s.history[k], s.history[k - 1] * (1 - 1e-12));
    // certificate: no single-coordinate substitution helps
    for (Eigen::Index l = 0; l < start.size(); ++l)
      for (int k = 0; k < p.alphabet.levels(); ++k) {
        IVec alt = s.phases;
        alt(l) = k;
        EXPECT_LE(sinr(alt, p), s.sinr * (1 + 1e-9));
      }
  }
}

TEST(Exhaustive, Examples) {
  CVec g(1);
  g << cplx(1, 1);
  BeamformingProblem p = problem(g, 2.0, 0.5);
  p.R(0, 0) = 0.1;
  EXPECT_NEAR(exhaustive_optimum(p).sinr, 2.0 * 2.0 / (0.5 * (2.0 / 0.5 * 0.1 + 1)), 1e-12);
  CVec g2(2);
  g2 << 1, -1;
  auto s = exhaustive_optimum(problem(g2));
  EXPECT_NEAR(s.sinr, 4.0, 1e-12);
  IVec e(2);
  e << 0, 1;
  EXPECT_EQ(s.phases, e);
  EXPECT_THROW(exhaustive_optimum(problem(CVec::Ones(21))), SizeLimit);
  EXPECT_THROW(exhaustive_optimum(problem(CVec::Ones(11), 1, 1, 2)), SizeLimit);
}

TEST(Exhaustive, MatchesBruteForceAndDominates) {
  Rng rng(3);
  for (int trial = 0; trial < 60; ++trial) {
    const int bits = 1 + trial % 2;
    auto p = random_problem(rng, 2 + trial % 4, bits);
    auto ex = exhaustive_optimum(p);
    EXPECT_NEAR(ex.sinr, brute_force_sinr(p), 1e-9 * ex.sinr);
    auto gm = successive_refinement(init_gain_max(p), p);
    std::string tag;
    auto sd = successive_refinement(init_sdr(p, rng, {200, {}}, &tag), p);
    EXPECT_EQ(tag, "sdr");
    EXPECT_LE(gm.sinr, ex.sinr * (1 + 1e-9));
    EXPECT_LE(sd.sinr, ex.sinr * (1 + 1e-9));
    EXPECT_LE(ex.sinr, sinr_upper_bound(p) * (1 + 1e-9));
  }
}

TEST(UpperBound, Examples) {
  CVec g(1);
  g << cplx(3, 4);
  EXPECT_NEAR(sinr_upper_bound(problem(g)), 25.0, 1e-12);
  Rng rng(4);
  CVec g5 = complex_normal_vector(rng, 5);
  EXPECT_NEAR(sinr_upper_bound(problem(g5)), 5 * g5.squaredNorm(), 1e-10);
  EXPECT_GE(sinr_upper_bound(problem(g5)), std::pow(g5.cwiseAbs().sum(), 2));
}

TEST(Sdr, ScalarAndAligned) {
  Rng rng(5);
  CVec g(1);
  g << cplx(0, 2);
  auto p = problem(g);
  IVec one = init_sdr(p, rng);
  EXPECT_NEAR(sinr(one, p), 4.0, 1e-12);
  // Aligned channel, fine alphabet: within the quantization loss of coherent combining.
  CVec g8(8);
  for (int l = 0; l < 8; ++l) g8(l) = std::polar(1.0 + 0.1 * l, 0.37 * l);
  auto p8 = problem(g8, 1.0, 1.0, 5);
  const double coherent = std::pow(g8.cwiseAbs().sum(), 2);
  const double loss = std::pow(std::cos(M_PI / 32), 2);
  EXPECT_GE(sinr(init_sdr(p8, rng), p8), coherent * loss * (1 - 1e-9));
}

TEST(Continuous, BoundsDiscreteAndScalar) {
  Rng rng(6);
  CVec g(1);
  g << cplx(1, -1);
  BeamformingProblem p1 = problem(g, 2.0, 1.0);
  p1.R(0, 0) = 0.3;
  auto c1 = continuous_upper_bound(p1, rng);
  EXPECT_NEAR(c1.sinr, 2.0 * 2.0 / (1.0 * (2.0 * 0.3 + 1.0)), 1e-9);
  for (int trial = 0; trial < 20; ++trial) {
    auto p = random_problem(rng, 5, 1 + trial % 3);
    auto cont = continuous_upper_bound(p, rng, {300, {}});
    auto ex = exhaustive_optimum(p);
    EXPECT_GE(cont.sinr, ex.sinr * (1 - 1e-6));
    EXPECT_LE(cont.sinr, cont.relaxation_bound * (1 + 1e-5));
  }
}

TEST(Continuous, CoordinateStepIsExact) {
  Rng rng(7);
  auto p = random_problem(rng, 6, 1);
  CVec start = CVec::Ones(6);
  CVec out = continuous_refinement(start, p);
  const double v = sinr(out, p);
  // Perturbing any single phase must not help.
  for (int l = 0; l < 6; ++l)
    for (double d : {-0.01, 0.01, 0.5, 2.0}) {
      CVec alt = out;
      alt(l) *= std::polar(1.0, d);
      EXPECT_LE(sinr(alt, p), v * (1 + 1e-7));
    }
}

TEST(Refinement, NoiselessProblem) {
  Rng rng(8);
  CVec g = complex_normal_vector(rng, 6);
  auto p = problem(g, 1.0, 0.0, 2);
  auto s = successive_refinement(init_gain_max(p), p);
  EXPECT_TRUE(std::isinf(s.sinr));
}
