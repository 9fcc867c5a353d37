#pragma once

#include <optional>
#include <stdexcept>

#include "pirs/phase_alphabet.hpp"
#include "pirs/random.hpp"

namespace pirs {

/// maximize tr(G A)  s.t.  tr(R A) + xi = 1,  A_ll = xi,  A >= 0,  xi >= 0.
/// G and R Hermitian PSD, n x n.
struct SdpProblem {
  CMat G;
  CMat R;
  Eigen::Index dimension() const { return G.rows(); }
};

struct SdpOptions {
  double tol = 1e-6;
  int max_iterations = 100;
};

struct SdpSolution {
  CMat A;
  double xi = 0.0;
  double objective = 0.0;     // tr(G A)
  double dual_bound = 0.0;    // certified upper bound on the optimum
  double primal_residual = 0.0;  // max(|tr(RA)+xi-1|, max_l |A_ll - xi|)
  double dual_residual = 0.0;
  double min_eigenvalue = 0.0;  // of A
  int iterations = 0;
  bool converged = false;
  bool xi_at_boundary = false;  // xi <= tol

  // Charnes-Cooper recovery Phi = A / xi.
  CMat phi_matrix() const { return A / xi; }
};

struct SolverFailure : std::runtime_error {
  SolverFailure(const std::string& what, SdpSolution best_iterate)
      : std::runtime_error(what), best(std::move(best_iterate)) {}
  SdpSolution best;
};

// Interior-point solve. Throws InvalidArgument on malformed data and
// SolverFailure when the budget runs out before all residuals reach tol.
SdpSolution solve_relaxation(const SdpProblem& problem, const SdpOptions& options = {});

// phi^H G phi / (phi^H R phi + 1).
double fractional_objective(const CVec& phi, const CMat& G, const CMat& R);

/// Draw r ~ CN(0, Phi) (negative eigenvalues clipped), map to exp(j arg r)
/// and keep the candidate maximizing the fractional objective. The phase of
/// the principal eigenvector is always tried as well. With an alphabet,
/// each candidate is quantized before it is scored.
CVec gaussian_randomization(const CMat& Phi, const CMat& G, const CMat& R, int n_draws, Rng& rng,
                            const PhaseAlphabet* alphabet = nullptr);

}  // namespace pirs
