#include "pirs/hadamard.hpp"

#include <map>
#include <mutex>
#include <vector>

#include "pirs/errors.hpp"

namespace pirs {

namespace {

// GF(p^k) with elements encoded as base-p digit strings (polynomial
// coefficients, least significant first).
class FiniteField {
 public:
  FiniteField(int p, int k) : p_(p), k_(k), q_(1) {
    for (int i = 0; i < k; ++i) q_ *= p;
    modulus_ = find_irreducible();
    mul_.assign(static_cast<size_t>(q_) * q_, 0);
    for (int a = 0; a < q_; ++a)
      for (int b = a; b < q_; ++b) mul_[a * q_ + b] = mul_[b * q_ + a] = slow_mul(a, b);
  }

  int size() const { return q_; }

  int sub(int a, int b) const {
    int out = 0, scale = 1;
    for (int i = 0; i < k_; ++i) {
      int d = ((a % p_) - (b % p_) + p_) % p_;
      out += d * scale;
      scale *= p_;
      a /= p_;
      b /= p_;
    }
    return out;
  }

  int mul(int a, int b) const { return mul_[a * q_ + b]; }

  // chi(x): 0 at zero, +1 on nonzero squares, -1 otherwise.
  std::vector<int> quadratic_character() const {
    std::vector<int> chi(q_, -1);
    chi[0] = 0;
    for (int x = 1; x < q_; ++x) chi[mul(x, x)] = 1;
    return chi;
  }

 private:
  using Poly = std::vector<int>;

  Poly digits(int a, int len) const {
    Poly d(len, 0);
    for (int i = 0; i < len && a; ++i, a /= p_) d[i] = a % p_;
    return d;
  }

  // Reduce a polynomial modulo the monic modulus (degree k).
  void reduce(Poly& c) const {
    for (int deg = static_cast<int>(c.size()) - 1; deg >= k_; --deg) {
      int lead = c[deg] % p_;
      if (!lead) continue;
      for (int i = 0; i <= k_; ++i)
        c[deg - k_ + i] = ((c[deg - k_ + i] - lead * modulus_[i]) % p_ + p_) % p_;
    }
  }

  int slow_mul(int a, int b) const {
    Poly x = digits(a, k_), y = digits(b, k_);
    Poly c(2 * k_, 0);
    for (int i = 0; i < k_; ++i)
      for (int j = 0; j < k_; ++j) c[i + j] = (c[i + j] + x[i] * y[j]) % p_;
    if (k_ > 1) reduce(c);
    int out = 0, scale = 1;
    for (int i = 0; i < k_; ++i, scale *= p_) out += c[i] * scale;
    return out;
  }

  // Brute force: a monic degree-k polynomial without roots is irreducible
  // for k <= 3; for larger k check divisibility by every monic factor.
  Poly find_irreducible() const {
    Poly f(k_ + 1, 0);
    f[k_] = 1;
    if (k_ == 1) return f;
    for (int code = 0; code < q_; ++code) {
      Poly g = digits(code, k_ + 1);
      g[k_] = 1;
      if (irreducible(g)) return g;
    }
    throw std::logic_error("no irreducible polynomial found");
  }

  bool irreducible(const Poly& f) const {
    for (int d = 1; d <= k_ / 2; ++d) {
      int count = 1;
      for (int i = 0; i < d; ++i) count *= p_;
      for (int code = 0; code < count; ++code) {
        Poly g = digits(code, d + 1);
        g[d] = 1;
        if (divides(g, f)) return false;
      }
    }
    return true;
  }

  bool divides(const Poly& g, Poly f) const {
    const int dg = static_cast<int>(g.size()) - 1;
    for (int deg = static_cast<int>(f.size()) - 1; deg >= dg; --deg) {
      int lead = f[deg] % p_;
      if (!lead) continue;
      for (int i = 0; i <= dg; ++i)
        f[deg - dg + i] = ((f[deg - dg + i] - lead * g[i]) % p_ + p_) % p_;
    }
    for (int i = 0; i < dg; ++i)
      if (f[i] % p_) return false;
    return true;
  }

  int p_, k_, q_;
  Poly modulus_;
  std::vector<int> mul_;
};

// Jacobsthal matrix Q[a][b] = chi(a - b).
IMat jacobsthal(int q) {
  int p = 0, k = 0;
  prime_power(q, &p, &k);
  FiniteField f(p, k);
  const auto chi = f.quadratic_character();
  IMat Q(q, q);
  for (int a = 0; a < q; ++a)
    for (int b = 0; b < q; ++b) Q(a, b) = chi[f.sub(a, b)];
  return Q;
}

IMat kron_int(const IMat& a, const IMat& b) {
  IMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

IMat h2() {
  IMat h(2, 2);
  h << 1, 1, 1, -1;
  return h;
}

IMat sylvester(int order) {
  IMat h = IMat::Ones(1, 1);
  while (h.rows() < order) h = kron_int(h2(), h);
  return h;
}

IMat paley1(int q) {
  const IMat Q = jacobsthal(q);
  IMat S = IMat::Zero(q + 1, q + 1);
  S.block(0, 1, 1, q).setOnes();
  S.block(1, 0, q, 1).setConstant(-1);
  S.block(1, 1, q, q) = Q;
  return S + IMat::Identity(q + 1, q + 1);
}

IMat paley2(int q) {
  const IMat Q = jacobsthal(q);
  IMat C = IMat::Zero(q + 1, q + 1);
  C.block(0, 1, 1, q).setOnes();
  C.block(1, 0, q, 1).setOnes();
  C.block(1, 1, q, q) = Q;
  IMat off(2, 2);
  off << 1, -1, -1, -1;
  return kron_int(C, h2()) + kron_int(IMat::Identity(q + 1, q + 1), off);
}

void normalize(IMat& h) {
  for (Eigen::Index r = 0; r < h.rows(); ++r)
    if (h(r, 0) < 0) h.row(r) *= -1;
  for (Eigen::Index c = 0; c < h.cols(); ++c)
    if (h(0, c) < 0) h.col(c) *= -1;
}

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

bool paley1_ok(int order) {
  int q = order - 1;
  return q >= 3 && prime_power(q) && q % 4 == 3;
}

bool paley2_ok(int order) {
  if (order % 2) return false;
  int q = order / 2 - 1;
  return q >= 5 && prime_power(q) && q % 4 == 1;
}

// Factor pair (a, order/a) with both constructible, preferring a = 2.
int kron_factor(int order) {
  if (order % 2 == 0 && order > 2 && hadamard_constructible(order / 2)) return 2;
  for (int a = 4; a * a <= order; a += 4)
    if (order % a == 0 && hadamard_constructible(a) && hadamard_constructible(order / a))
      return a;
  return 0;
}

std::mutex cache_mu;
std::map<int, HadamardMethod> method_cache;

}  // namespace

std::string to_string(HadamardMethod m) {
  switch (m) {
    case HadamardMethod::Trivial: return "trivial";
    case HadamardMethod::Sylvester: return "sylvester";
    case HadamardMethod::PaleyI: return "paley-1";
    case HadamardMethod::PaleyII: return "paley-2";
    case HadamardMethod::Kronecker: return "kronecker";
    default: return "none";
  }
}

bool prime_power(int q, int* p_out, int* k_out) {
  if (q < 2) return false;
  int p = 2;
  while (p * p <= q && q % p) ++p;
  if (q % p) p = q;
  int k = 0, r = q;
  while (r % p == 0) {
    r /= p;
    ++k;
  }
  if (r != 1) return false;
  if (p_out) *p_out = p;
  if (k_out) *k_out = k;
  return true;
}

HadamardMethod hadamard_method(int order) {
  if (order < 1) return HadamardMethod::None;
  {
    std::lock_guard<std::mutex> lock(cache_mu);
    auto it = method_cache.find(order);
    if (it != method_cache.end()) return it->second;
  }
  HadamardMethod m = HadamardMethod::None;
  if (order == 1)
    m = HadamardMethod::Trivial;
  else if (is_pow2(order))
    m = HadamardMethod::Sylvester;
  else if (order % 4 != 0)
    m = HadamardMethod::None;
  else if (paley1_ok(order))
    m = HadamardMethod::PaleyI;
  else if (paley2_ok(order))
    m = HadamardMethod::PaleyII;
  else if (kron_factor(order))
    m = HadamardMethod::Kronecker;
  std::lock_guard<std::mutex> lock(cache_mu);
  method_cache[order] = m;
  return m;
}

bool hadamard_constructible(int order) { return hadamard_method(order) != HadamardMethod::None; }

int smallest_hadamard_order(int m) {
  if (m < 1) return 0;
  for (int ell = m; ell <= 4 * m; ++ell)
    if (hadamard_constructible(ell)) return ell;
  return 0;
}

IMat hadamard_matrix(int order) {
  if (order < 1) throw InvalidArgument("hadamard_matrix: order must be positive");
  IMat h;
  switch (hadamard_method(order)) {
    case HadamardMethod::Trivial: h = IMat::Ones(1, 1); break;
    case HadamardMethod::Sylvester: h = sylvester(order); break;
    case HadamardMethod::PaleyI: h = paley1(order - 1); break;
    case HadamardMethod::PaleyII: h = paley2(order / 2 - 1); break;
    case HadamardMethod::Kronecker: {
      const int a = kron_factor(order);
      h = kron_int(hadamard_matrix(a), hadamard_matrix(order / a));
      break;
    }
    default: {
      const int s = smallest_hadamard_order(order);
      throw UnsupportedOrder("no Hadamard construction for order " + std::to_string(order) +
                                 (s ? "; smallest constructible order above is " + std::to_string(s)
                                    : std::string()),
                             s);
    }
  }
  normalize(h);
  return h;
}

}  // namespace pirs
