#pragma once

#include <cstdint>
#include <random>

#include "pirs/linalg.hpp"

namespace pirs {

using Rng = std::mt19937_64;

// Zero-mean circularly-symmetric complex Gaussian with E|z|^2 = variance.
inline cplx complex_normal(Rng& rng, double variance = 1.0) {
  std::normal_distribution<double> n(0.0, std::sqrt(variance / 2.0));
  const double re = n(rng);
  const double im = n(rng);
  return {re, im};
}

inline CVec complex_normal_vector(Rng& rng, Eigen::Index n, double variance = 1.0) {
  CVec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = complex_normal(rng, variance);
  return v;
}

// splitmix64 finalizer, used to decorrelate derived seeds.
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent streams for one Monte-Carlo trial.
struct TrialRngs {
  Rng channel;
  Rng noise;
  Rng algo;

  explicit TrialRngs(std::uint64_t trial_seed)
      : channel(mix_seed(trial_seed * 3 + 0)),
        noise(mix_seed(trial_seed * 3 + 1)),
        algo(mix_seed(trial_seed * 3 + 2)) {}
};

inline std::uint64_t trial_seed(std::uint64_t base_seed, std::uint64_t trial) {
  return base_seed ^ trial;
}

}  // namespace pirs
