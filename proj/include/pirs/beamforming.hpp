#pragma once

#include <string>
#include <vector>

#include "pirs/reflection.hpp"
#include "pirs/sdp_solver.hpp"

namespace pirs {

/// SINR maximization over per-subgroup phases. `R` is the estimation error
/// covariance (already scaled by sigma2 / P); P and sigma2 in watts.
struct BeamformingProblem {
  CVec g_hat;
  CMat R;
  double P = 1.0;
  double sigma2 = 1.0;
  PhaseAlphabet alphabet{1};

  Eigen::Index size() const { return g_hat.size(); }
};

struct BeamformingSolution {
  IVec phases;  // alphabet indices
  CVec phi;
  double sinr = 0.0;
  std::string init;
  int sweeps = 0;
  std::vector<double> history;  // SINR after initialization and after each sweep
};

struct SdrOptions {
  int draws = 1000;
  SdpOptions sdp;
};

// Materialize phase indices as unit-modulus coefficients.
CVec phases_to_vector(const IVec& phases, const PhaseAlphabet& alphabet);

// P |phi^H g|^2 / (P phi^H R phi + sigma2). Infinite when the denominator vanishes.
double sinr(const CVec& phi, const BeamformingProblem& problem);
double sinr(const IVec& phases, const BeamformingProblem& problem);

// ((M0 - M) / M0) log2(1 + sinr / Gamma).
double rate_from_sinr(double sinr_value, int M, int M0, double gamma);
double rate(const CVec& phi, const BeamformingProblem& problem, int M, int M0, double gamma);

// Strongest subgroup fixed at phase 0, the rest quantized toward its phase.
IVec init_gain_max(const BeamformingProblem& problem);

// Relaxation, randomization with per-draw quantization. Falls back to
// gain-max when the solver fails; `tag` then records the fallback.
IVec init_sdr(const BeamformingProblem& problem, Rng& rng, const SdrOptions& options = {},
              std::string* tag = nullptr);

// Copy entry `parent` of every group's block into a new entry right after it.
IVec init_replication(const IVec& prev, int groups, int parent);

// Cyclic coordinate ascent over the alphabet; stops when a sweep changes
// nothing or improves the SINR by a relative factor below epsilon.
BeamformingSolution successive_refinement(const IVec& phi0, const BeamformingProblem& problem,
                                          double epsilon = 1e-4, int max_sweeps = 1000);

// Global optimum by enumeration; requires b * n <= 20.
BeamformingSolution exhaustive_optimum(const BeamformingProblem& problem);

// lambda_max((Rn + I/n)^{-1} Gn) in SINR units, Rn and Gn the noise-normalized data.
double sinr_upper_bound(const BeamformingProblem& problem);

struct ContinuousResult {
  CVec phi;
  double sinr = 0.0;
  double relaxation_bound = 0.0;  // dual bound of the relaxation, SINR units
};

// Best unquantized unit-modulus vector found by relaxation plus randomization,
// polished by continuous coordinate ascent. Optional warm starts are polished
// too. Throws SolverFailure when the relaxation fails.
ContinuousResult continuous_upper_bound(const BeamformingProblem& problem, Rng& rng,
                                        const SdrOptions& options = {},
                                        const std::vector<CVec>& warm_starts = {});

// Continuous coordinate ascent from phi0 (each coordinate set to its exact maximizer).
CVec continuous_refinement(const CVec& phi0, const BeamformingProblem& problem, double epsilon = 1e-9,
                           int max_sweeps = 500);

}  // namespace pirs
