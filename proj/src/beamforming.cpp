#include "pirs/beamforming.hpp"

#include <cmath>
#include <limits>

#include "pirs/errors.hpp"

namespace pirs {

namespace {

// Noise-normalized view: SINR = gain * |phi^H g|^2 / (phi^H Rn phi + 1).
struct Scaled {
  CVec g;
  CMat Rn;
  double gain;
};

Scaled scale(const BeamformingProblem& p) {
  const Eigen::Index n = p.g_hat.size();
  if (n < 1) throw InvalidArgument("beamforming: empty channel vector");
  if (p.R.rows() != n || p.R.cols() != n)
    throw InvalidArgument("beamforming: covariance dimension does not match the channel");
  if (!(p.P > 0) || p.sigma2 < 0) throw InvalidArgument("beamforming: need P > 0 and sigma2 >= 0");
  if (p.sigma2 == 0.0) return {p.g_hat, CMat::Zero(n, n), 1.0};
  const double k = p.P / p.sigma2;
  return {p.g_hat, hermitian_part(k * p.R), k};
}

double ratio(const CVec& phi, const Scaled& s) {
  return std::norm(phi.dot(s.g)) / (phi.dot(s.Rn * phi).real() + 1.0);
}

// Incremental coordinate-ascent state over a fixed vector.
struct Tracker {
  const Scaled& sc;
  CVec phi;
  cplx s;     // phi^H g
  CVec v;     // Rn phi
  double q;   // phi^H Rn phi

  Tracker(const Scaled& scaled, CVec start) : sc(scaled), phi(std::move(start)) {
    s = phi.dot(sc.g);
    v = sc.Rn * phi;
    q = phi.dot(v).real();
  }

  double value() const { return std::norm(s) / (q + 1.0); }

  double value_if(Eigen::Index l, cplx next) const {
    const cplx d = next - phi(l);
    const cplx s2 = s + std::conj(d) * sc.g(l);
    const double q2 = q + 2.0 * (std::conj(d) * v(l)).real() + std::norm(d) * sc.Rn(l, l).real();
    return std::norm(s2) / (q2 + 1.0);
  }

  void set(Eigen::Index l, cplx next) {
    const cplx d = next - phi(l);
    s += std::conj(d) * sc.g(l);
    q += 2.0 * (std::conj(d) * v(l)).real() + std::norm(d) * sc.Rn(l, l).real();
    v += sc.Rn.col(l) * d;
    phi(l) = next;
  }
};

// Guard against accepting round-off as an improvement.
constexpr double kImproveSlack = 1e-12;

}  // namespace

CVec phases_to_vector(const IVec& phases, const PhaseAlphabet& alphabet) {
  CVec out(phases.size());
  for (Eigen::Index l = 0; l < phases.size(); ++l) out(l) = alphabet.value(phases(l));
  return out;
}

double sinr(const CVec& phi, const BeamformingProblem& p) {
  if (phi.size() != p.g_hat.size()) throw InvalidArgument("sinr: dimension mismatch");
  for (Eigen::Index l = 0; l < phi.size(); ++l)
    if (std::abs(std::abs(phi(l)) - 1.0) > 1e-9) throw InvalidArgument("sinr: reflection vector is not unit modulus");
  const double num = p.P * std::norm(phi.dot(p.g_hat));
  const double den = p.P * phi.dot(p.R * phi).real() + p.sigma2;
  if (den <= 0.0) return num > 0 ? std::numeric_limits<double>::infinity() : 0.0;
  return num / den;
}

double sinr(const IVec& phases, const BeamformingProblem& p) {
  return sinr(phases_to_vector(phases, p.alphabet), p);
}

double rate_from_sinr(double sinr_value, int M, int M0, double gamma) {
  if (M < 0 || M >= M0) throw InvalidArgument("rate: need 0 <= M < M0");
  if (!(gamma >= 1.0)) throw InvalidArgument("rate: SNR gap must be >= 1");
  return (static_cast<double>(M0 - M) / M0) * std::log2(1.0 + sinr_value / gamma);
}

double rate(const CVec& phi, const BeamformingProblem& p, int M, int M0, double gamma) {
  return rate_from_sinr(sinr(phi, p), M, M0, gamma);
}

IVec init_gain_max(const BeamformingProblem& p) {
  const Eigen::Index n = p.g_hat.size();
  if (n < 1) throw InvalidArgument("init_gain_max: empty channel vector");
  Eigen::Index best = 0;
  for (Eigen::Index l = 1; l < n; ++l)
    if (std::abs(p.g_hat(l)) > std::abs(p.g_hat(best))) best = l;
  if (std::abs(p.g_hat(best)) == 0.0) throw DegenerateInput("init_gain_max: channel estimate is zero");
  const double ref = std::arg(p.g_hat(best));
  IVec out(n);
  for (Eigen::Index l = 0; l < n; ++l)
    out(l) = l == best ? 0 : quantize_phase(std::arg(p.g_hat(l)) - ref, p.alphabet).index();
  return out;
}

IVec init_sdr(const BeamformingProblem& p, Rng& rng, const SdrOptions& opt, std::string* tag) {
  const Scaled sc = scale(p);
  const Eigen::Index n = sc.g.size();
  try {
    const CMat G = sc.gain * sc.g * sc.g.adjoint();
    const SdpSolution sol = solve_relaxation({G, sc.Rn}, opt.sdp);
    const CVec phi = gaussian_randomization(sol.phi_matrix(), G, sc.Rn, opt.draws, rng, &p.alphabet);
    IVec out(n);
    for (Eigen::Index l = 0; l < n; ++l) out(l) = quantize_value(phi(l), p.alphabet).index();
    if (tag) *tag = "sdr";
    return out;
  } catch (const SolverFailure&) {
    if (tag) *tag = "gain-max(sdr-fallback)";
    return init_gain_max(p);
  }
}

IVec init_replication(const IVec& prev, int groups, int parent) {
  if (groups < 1 || prev.size() % groups != 0)
    throw InvalidArgument("init_replication: length is not a multiple of the group count");
  const int width = static_cast<int>(prev.size() / groups);
  if (parent < 0 || parent >= width) throw InvalidArgument("init_replication: parent position out of range");
  IVec out(static_cast<Eigen::Index>(groups) * (width + 1));
  for (int m = 0; m < groups; ++m) {
    const int src = m * width, dst = m * (width + 1);
    out.segment(dst, parent + 1) = prev.segment(src, parent + 1);
    out(dst + parent + 1) = prev(src + parent);
    out.segment(dst + parent + 2, width - parent - 1) = prev.segment(src + parent + 1, width - parent - 1);
  }
  return out;
}

BeamformingSolution successive_refinement(const IVec& phi0, const BeamformingProblem& p, double epsilon,
                                          int max_sweeps) {
  const Scaled sc = scale(p);
  const Eigen::Index n = sc.g.size();
  if (phi0.size() != n) throw InvalidArgument("successive_refinement: dimension mismatch");
  const PhaseAlphabet& a = p.alphabet;
  const int K = a.levels();
  std::vector<cplx> table(K);
  for (int k = 0; k < K; ++k) table[k] = a.value(k);

  IVec idx(n);
  for (Eigen::Index l = 0; l < n; ++l) idx(l) = a.wrap(phi0(l));
  Tracker t(sc, phases_to_vector(idx, a));

  BeamformingSolution out;
  out.history.push_back(t.value());
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    const double before = t.value();
    bool changed = false;
    for (Eigen::Index l = 0; l < n; ++l) {
      double best = t.value();
      int best_k = idx(l);
      for (int k = 0; k < K; ++k) {
        if (k == idx(l)) continue;
        const double v = t.value_if(l, table[k]);
        if (v > best * (1.0 + kImproveSlack) && v > best) {
          best = v;
          best_k = k;
        }
      }
      if (best_k != idx(l)) {
        t.set(l, table[best_k]);
        idx(l) = best_k;
        changed = true;
      }
    }
    out.sweeps = sweep + 1;
    out.history.push_back(t.value());
    if (!changed) break;
    const double after = t.value();
    if (before > 0 && (after - before) / before < epsilon) break;
  }
  out.phases = idx;
  out.phi = phases_to_vector(idx, a);
  out.sinr = sinr(out.phi, p);
  for (double& h : out.history) h *= sc.gain;
  if (p.sigma2 == 0.0)
    for (double& h : out.history) h = h > 0 ? std::numeric_limits<double>::infinity() : 0.0;
  return out;
}

BeamformingSolution exhaustive_optimum(const BeamformingProblem& p) {
  const Scaled sc = scale(p);
  const Eigen::Index n = sc.g.size();
  const PhaseAlphabet& a = p.alphabet;
  if (static_cast<long long>(a.bits()) * n > 20)
    throw SizeLimit("exhaustive_optimum: b*n = " + std::to_string(a.bits() * n) + " exceeds 20");
  const int K = a.levels();
  // Rotating every phase leaves the objective unchanged, so the
  // lexicographically first maximizer has a leading 0 index.
  IVec idx = IVec::Zero(n);
  IVec best_idx = idx;
  double best = -1.0;
  for (;;) {
    const double v = ratio(phases_to_vector(idx, a), sc);
    if (v > best * (1.0 + kImproveSlack) && v > best) {
      best = v;
      best_idx = idx;
    }
    Eigen::Index pos = n - 1;
    while (pos >= 1 && ++idx(pos) == K) idx(pos--) = 0;
    if (pos < 1) break;
  }
  BeamformingSolution out;
  out.phases = best_idx;
  out.phi = phases_to_vector(best_idx, a);
  out.sinr = sinr(out.phi, p);
  out.init = "exhaustive";
  return out;
}

double sinr_upper_bound(const BeamformingProblem& p) {
  const Scaled sc = scale(p);
  const Eigen::Index n = sc.g.size();
  const CMat shifted = sc.Rn + CMat::Identity(n, n) / static_cast<double>(n);
  // Rank-one numerator: the generalized eigenvalue is g^H (Rn + I/n)^{-1} g.
  const double lam = sc.g.dot(shifted.llt().solve(sc.g)).real();
  const double v = sc.gain * lam;
  if (p.sigma2 == 0.0) return v > 0 ? std::numeric_limits<double>::infinity() : 0.0;
  return v;
}

CVec continuous_refinement(const CVec& phi0, const BeamformingProblem& p, double epsilon, int max_sweeps) {
  const Scaled sc = scale(p);
  const Eigen::Index n = sc.g.size();
  if (phi0.size() != n) throw InvalidArgument("continuous_refinement: dimension mismatch");
  CVec start(n);
  for (Eigen::Index l = 0; l < n; ++l) start(l) = std::abs(phi0(l)) > 0 ? phi0(l) / std::abs(phi0(l)) : 1.0;
  Tracker t(sc, start);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    const double before = t.value();
    for (Eigen::Index l = 0; l < n; ++l) {
      // Objective in theta = arg(phi_l): (a + p cos + q sin) / (d + r cos + s sin).
      const cplx gl = sc.g(l);
      const cplx a0 = t.s - std::conj(t.phi(l)) * gl;
      const cplx c = std::conj(a0) * gl;
      const double rll = sc.Rn(l, l).real();
      const cplx w = t.v(l) - rll * t.phi(l);
      const double A = std::norm(a0) + std::norm(gl), P = 2 * c.real(), Q = 2 * c.imag();
      const double D = t.q + 1.0 - 2.0 * (std::conj(t.phi(l)) * w).real(), Rc = 2 * w.real(),
                   S = 2 * w.imag();
      // Stationary points: (A Rc - P D) sin + (Q D - A S) cos + (Q Rc - P S) = 0.
      const double u = A * Rc - P * D, v = Q * D - A * S, k = Q * Rc - P * S;
      const double rho = std::hypot(u, v);
      double best = t.value();
      cplx best_phi = t.phi(l);
      auto consider = [&](double th) {
        const cplx z = std::polar(1.0, th);
        const double val = t.value_if(l, z);
        if (val > best) {
          best = val;
          best_phi = z;
        }
      };
      if (rho > 0) {
        const double base = std::atan2(v, u);
        const double x = std::clamp(-k / rho, -1.0, 1.0);
        consider(std::asin(x) - base);
        consider(kPi - std::asin(x) - base);
      }
      if (best_phi != t.phi(l)) t.set(l, best_phi);
    }
    const double after = t.value();
    if (!(after > before) || (before > 0 && (after - before) / before < epsilon)) break;
  }
  return t.phi;
}

ContinuousResult continuous_upper_bound(const BeamformingProblem& p, Rng& rng, const SdrOptions& opt,
                                        const std::vector<CVec>& warm_starts) {
  const Scaled sc = scale(p);
  const CMat G = sc.gain * sc.g * sc.g.adjoint();
  const SdpSolution sol = solve_relaxation({G, sc.Rn}, opt.sdp);
  ContinuousResult out;
  out.relaxation_bound = sol.dual_bound;
  out.phi = continuous_refinement(gaussian_randomization(sol.phi_matrix(), G, sc.Rn, opt.draws, rng), p);
  out.sinr = sinr(out.phi, p);
  for (const CVec& w : warm_starts) {
    const CVec cand = continuous_refinement(w, p);
    const double v = sinr(cand, p);
    if (v > out.sinr) {
      out.sinr = v;
      out.phi = cand;
    }
  }
  return out;
}

}  // namespace pirs
