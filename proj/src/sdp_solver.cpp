#include "pirs/sdp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pirs/errors.hpp"

namespace pirs {

namespace {

// Primal X = diag(Xa, x), dual S = diag(Sa, s), multipliers y = (y0, y_1..y_n).
// Minimization form:  min <C, X>,  C = diag(-G, 0)
//   <diag(R, 1), X> = 1,   <diag(E_ll, -1), X> = 0.
struct Iterate {
  CMat Xa;
  double x = 0;
  RVec y;
  CMat Sa;
  double s = 0;
};

constexpr double kStepFraction = 0.98;

// A(Z) for a block (Za, z); only the Hermitian part of Za contributes.
RVec apply_constraints(const CMat& R, const CMat& Za, double z) {
  const Eigen::Index n = Za.rows();
  RVec out(n + 1);
  out(0) = (R.cwiseProduct(Za.transpose())).sum().real() + z;
  out.tail(n) = Za.diagonal().real().array() - z;
  return out;
}

// sum_i y_i A_i, matrix block and scalar block.
CMat adjoint_matrix(const CMat& R, const RVec& y) {
  CMat out = y(0) * R;
  out.diagonal() += y.tail(y.size() - 1).cast<cplx>();
  return out;
}
double adjoint_scalar(const RVec& y) { return y(0) - y.tail(y.size() - 1).sum(); }

// Largest alpha with P + alpha D >= 0 (infinity when unbounded).
double max_step(const CMat& P, const CMat& D) {
  Eigen::LLT<CMat> llt(P);
  if (llt.info() != Eigen::Success) return 0.0;
  CMat Y = llt.matrixL().solve(D);
  Y = llt.matrixL().solve(Y.adjoint()).adjoint();
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(Y), Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues()(0);
  return lmin >= 0 ? std::numeric_limits<double>::infinity() : -1.0 / lmin;
}

double max_step_scalar(double p, double d) {
  return d >= 0 ? std::numeric_limits<double>::infinity() : -p / d;
}

double primal_residual(const CMat& R, const CMat& A, double xi) {
  double r = std::abs((R.cwiseProduct(A.transpose())).sum().real() + xi - 1.0);
  for (Eigen::Index l = 0; l < A.rows(); ++l) r = std::max(r, std::abs(A(l, l).real() - xi));
  return r;
}

void validate(const SdpProblem& p, const SdpOptions& o) {
  const Eigen::Index n = p.G.rows();
  if (n < 1 || p.G.cols() != n || p.R.rows() != n || p.R.cols() != n)
    throw InvalidArgument("solve_relaxation: G and R must be square with the same dimension >= 1");
  if (!p.G.allFinite() || !p.R.allFinite()) throw InvalidArgument("solve_relaxation: non-finite data");
  const double scale = 1.0 + p.G.norm() + p.R.norm();
  if ((p.G - p.G.adjoint()).norm() > 1e-9 * scale || (p.R - p.R.adjoint()).norm() > 1e-9 * scale)
    throw InvalidArgument("solve_relaxation: G and R must be Hermitian");
  if (!(o.tol > 0)) throw InvalidArgument("solve_relaxation: tolerance must be positive");
}

}  // namespace

SdpSolution solve_relaxation(const SdpProblem& problem, const SdpOptions& options) {
  validate(problem, options);
  const Eigen::Index n = problem.G.rows();
  const CMat R = hermitian_part(problem.R);
  double gscale = problem.G.trace().real();
  if (!(gscale > 0)) gscale = std::max(problem.G.cwiseAbs().maxCoeff(), 1.0);
  const CMat G = hermitian_part(problem.G) / gscale;
  const double nn = static_cast<double>(n + 1);

  // Strictly feasible start on both sides.
  Iterate it;
  const double x0 = 1.0 / (R.trace().real() + 1.0);
  it.Xa = x0 * CMat::Identity(n, n);
  it.x = x0;
  const double t = std::max(G.trace().real(), 0.0) + 1.0;
  it.y = RVec::Constant(n + 1, -t);
  it.y(0) = -static_cast<double>(n) * t - 1.0;
  it.Sa = -G - adjoint_matrix(R, it.y);
  it.s = -adjoint_scalar(it.y);

  RVec b = RVec::Zero(n + 1);
  b(0) = 1.0;

  SdpSolution best;
  double best_merit = std::numeric_limits<double>::infinity();

  auto snapshot = [&](const Iterate& cur, int iter, double dres) {
    SdpSolution sol;
    sol.A = hermitian_part(cur.Xa);
    sol.xi = cur.x;
    sol.objective = (problem.G.cwiseProduct(sol.A.transpose())).sum().real();
    sol.dual_bound = -cur.y(0) * gscale;
    sol.primal_residual = primal_residual(R, sol.A, sol.xi);
    sol.dual_residual = dres;
    sol.min_eigenvalue = min_eigenvalue(sol.A);
    sol.iterations = iter;
    sol.xi_at_boundary = sol.xi <= options.tol;
    return sol;
  };

  for (int iter = 0; iter <= options.max_iterations; ++iter) {
    const double mu = ((it.Xa.cwiseProduct(it.Sa.transpose())).sum().real() + it.x * it.s) / nn;
    const CMat Rd_a = -G - it.Sa - adjoint_matrix(R, it.y);
    const double rd_s = -it.s - adjoint_scalar(it.y);
    const double dres = std::max(Rd_a.norm(), std::abs(rd_s)) / (1.0 + G.norm());
    const double pobj = -(G.cwiseProduct(it.Xa.transpose())).sum().real();
    const double dobj = it.y(0);
    const double gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));

    SdpSolution cur = snapshot(it, iter, dres);
    const double merit = std::max({gap, cur.primal_residual, dres});
    if (merit < best_merit) {
      best_merit = merit;
      best = cur;
    }
    if (cur.primal_residual <= options.tol && dres <= options.tol && gap <= options.tol &&
        cur.min_eigenvalue >= -options.tol) {
      cur.converged = true;
      return cur;
    }
    if (iter == options.max_iterations) break;

    Eigen::LLT<CMat> s_llt(it.Sa);
    if (s_llt.info() != Eigen::Success) break;
    const CMat Sinv = hermitian_part(s_llt.solve(CMat::Identity(n, n)));
    const double sinv = 1.0 / it.s;

    // Schur complement M_ik = Re tr(A_i X A_k S^{-1}).
    const CMat RX = R * it.Xa;
    Eigen::MatrixXd M(n + 1, n + 1);
    M(0, 0) = ((RX * R).cwiseProduct(Sinv.transpose())).sum().real() + it.x * sinv;
    const RVec cross = (Sinv.cwiseProduct(RX.transpose())).rowwise().sum().real();
    for (Eigen::Index l = 0; l < n; ++l) {
      M(0, l + 1) = M(l + 1, 0) = cross(l) - it.x * sinv;
    }
    M.bottomRightCorner(n, n) =
        (it.Xa.cwiseProduct(Sinv.transpose())).real().array() + it.x * sinv;
    Eigen::LDLT<Eigen::MatrixXd> schur(0.5 * (M + M.transpose()));
    if (schur.info() != Eigen::Success) break;

    const RVec a_sinv = apply_constraints(R, Sinv, sinv);
    const RVec a_xrds = apply_constraints(R, it.Xa * Rd_a * Sinv, it.x * rd_s * sinv);

    // Newton direction for target sigma*mu with an optional second-order term.
    auto direction = [&](double sigma_mu, const CMat& corr_a, double corr_s, CMat& dXa, double& dx,
                         RVec& dy, CMat& dSa, double& ds) {
      const RVec rhs = b - sigma_mu * a_sinv + apply_constraints(R, corr_a, corr_s) + a_xrds;
      dy = schur.solve(rhs);
      dSa = Rd_a - adjoint_matrix(R, dy);
      ds = rd_s - adjoint_scalar(dy);
      dXa = hermitian_part(sigma_mu * Sinv - it.Xa - corr_a - it.Xa * dSa * Sinv);
      dx = sigma_mu * sinv - it.x - corr_s - it.x * ds * sinv;
    };

    CMat dXa, dSa;
    double dx, ds;
    RVec dy;
    const CMat zero = CMat::Zero(n, n);
    direction(0.0, zero, 0.0, dXa, dx, dy, dSa, ds);
    double ap = std::min(1.0, std::min(max_step(it.Xa, dXa), max_step_scalar(it.x, dx)));
    double ad = std::min(1.0, std::min(max_step(it.Sa, dSa), max_step_scalar(it.s, ds)));
    const CMat Xn = it.Xa + ap * dXa, Sn = it.Sa + ad * dSa;
    const double mu_aff =
        ((Xn.cwiseProduct(Sn.transpose())).sum().real() + (it.x + ap * dx) * (it.s + ad * ds)) / nn;
    const double sigma = std::pow(std::clamp(mu_aff / mu, 0.0, 1.0), 3);

    const CMat corr_a = hermitian_part(dXa * dSa * Sinv);
    const double corr_s = dx * ds * sinv;
    direction(sigma * mu, corr_a, corr_s, dXa, dx, dy, dSa, ds);
    ap = std::min(1.0, kStepFraction * std::min(max_step(it.Xa, dXa), max_step_scalar(it.x, dx)));
    ad = std::min(1.0, kStepFraction * std::min(max_step(it.Sa, dSa), max_step_scalar(it.s, ds)));
    if (!(ap > 0) || !(ad > 0)) break;

    it.Xa = hermitian_part(it.Xa + ap * dXa);
    it.x += ap * dx;
    it.y += ad * dy;
    it.Sa = hermitian_part(it.Sa + ad * dSa);
    it.s += ad * ds;
  }
  throw SolverFailure("solve_relaxation: no convergence within " + std::to_string(options.max_iterations) +
                          " iterations (best merit " + std::to_string(best_merit) + ")",
                      best);
}

double fractional_objective(const CVec& phi, const CMat& G, const CMat& R) {
  const double num = phi.dot(G * phi).real();
  const double den = phi.dot(R * phi).real() + 1.0;
  return num / den;
}

CVec gaussian_randomization(const CMat& Phi, const CMat& G, const CMat& R, int n_draws, Rng& rng,
                            const PhaseAlphabet* alphabet) {
  const Eigen::Index n = Phi.rows();
  if (n < 1 || Phi.cols() != n || G.rows() != n || R.rows() != n)
    throw InvalidArgument("gaussian_randomization: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(Phi));
  // Clip negative and round-off eigenvalues; sqrt would amplify the latter.
  const double floor = 1e-12 * std::max(es.eigenvalues()(n - 1), 0.0);
  RVec lam = es.eigenvalues();
  for (Eigen::Index l = 0; l < n; ++l) lam(l) = lam(l) > floor ? lam(l) : 0.0;
  const CMat F = es.eigenvectors() * lam.cwiseSqrt().cast<cplx>().asDiagonal();

  auto project = [&](const CVec& r) {
    CVec phi(n);
    for (Eigen::Index l = 0; l < n; ++l) {
      const double th = std::abs(r(l)) > 0 ? std::arg(r(l)) : 0.0;
      phi(l) = alphabet ? quantize_phase(th, *alphabet).value() : std::polar(1.0, th);
    }
    return phi;
  };

  CVec best = project(es.eigenvectors().col(n - 1));
  double best_val = fractional_objective(best, G, R);
  for (int d = 0; d < n_draws; ++d) {
    const CVec cand = project(F * complex_normal_vector(rng, n));
    const double v = fractional_objective(cand, G, R);
    if (v > best_val) {
      best_val = v;
      best = cand;
    }
  }
  return best;
}

}  // namespace pirs
