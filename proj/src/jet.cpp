#include "decaylab/jet.hpp"

#include <cmath>
#include <numeric>

#include "decaylab/errors.hpp"

namespace decaylab {

namespace {

constexpr int kMaxDim = 3;
constexpr int kMaxOrder = 12;

std::size_t key(std::span<const int> g) {
  std::size_t k = 0;
  for (std::size_t i = g.size(); i-- > 0;) k = k * (kMaxOrder + 1) + static_cast<std::size_t>(g[i]);
  return k;
}

void enumerate(int d, int k, std::vector<int>& cur, int pos, int left,
               std::vector<std::vector<int>>& out) {
  if (pos == d - 1) {
    cur[static_cast<std::size_t>(pos)] = left;
    out.push_back(cur);
    return;
  }
  for (int e = left; e >= 0; --e) {
    cur[static_cast<std::size_t>(pos)] = e;
    enumerate(d, k, cur, pos + 1, left - e, out);
  }
}

}  // namespace

JetSpace::JetSpace(int dimension, int order) : d_(dimension), k_(order) {
  if (d_ < 1 || d_ > kMaxDim) throw UnsupportedDimension(d_);
  if (k_ < 0 || k_ > kMaxOrder) throw CapacityError("jet order must lie in [0, 12]");
  std::vector<int> cur(static_cast<std::size_t>(d_), 0);
  for (int total = 0; total <= k_; ++total) enumerate(d_, k_, cur, 0, total, exps_);
  std::size_t span = 1;
  for (int i = 0; i < d_; ++i) span *= kMaxOrder + 1;
  lookup_.assign(span, -1);
  for (std::size_t i = 0; i < exps_.size(); ++i) {
    lookup_[key(exps_[i])] = static_cast<std::ptrdiff_t>(i);
    double f = 1.0;
    for (int e : exps_[i]) f *= std::tgamma(e + 1.0);
    fact_.push_back(f);
  }
  std::vector<int> sum(static_cast<std::size_t>(d_));
  for (std::size_t a = 0; a < exps_.size(); ++a) {
    for (std::size_t b = 0; b < exps_.size(); ++b) {
      int total = 0;
      for (std::size_t i = 0; i < sum.size(); ++i) {
        sum[i] = exps_[a][i] + exps_[b][i];
        total += sum[i];
      }
      if (total <= k_) products_.push_back({a, b, index(sum)});
    }
  }
}

std::size_t JetSpace::index(std::span<const int> g) const {
  if (static_cast<int>(g.size()) != d_) throw DomainError("multi-index dimension mismatch");
  int total = 0;
  for (int e : g) {
    if (e < 0) throw DomainError("negative multi-index entry");
    total += e;
  }
  if (total > k_) throw DomainError("multi-index exceeds jet order");
  return static_cast<std::size_t>(lookup_[key(g)]);
}

bool Jet::is_zero() const {
  for (const auto& v : c)
    if (v != Complex(0.0)) return false;
  return true;
}

Complex Jet::derivative(const JetSpace& space, std::span<const int> g) const {
  const std::size_t i = space.index(g);
  return space.factorial(i) * c[i];
}

Jet jet_constant(const JetSpace& space, Complex v) {
  Jet j{std::vector<Complex>(space.size(), 0.0)};
  j.c[0] = v;
  return j;
}

Jet jet_variable(const JetSpace& space, int i, double x0i) {
  Jet j = jet_constant(space, x0i);
  if (space.order() >= 1) {
    std::vector<int> g(static_cast<std::size_t>(space.dimension()), 0);
    g[static_cast<std::size_t>(i)] = 1;
    j.c[space.index(g)] = 1.0;
  }
  return j;
}

Jet operator+(const Jet& a, const Jet& b) {
  Jet r = a;
  for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] += b.c[i];
  return r;
}

Jet operator-(const Jet& a, const Jet& b) {
  Jet r = a;
  for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] -= b.c[i];
  return r;
}

Jet operator*(Complex s, const Jet& a) {
  Jet r = a;
  for (auto& v : r.c) v *= s;
  return r;
}

Jet operator+(Complex s, const Jet& a) {
  Jet r = a;
  r.c[0] += s;
  return r;
}

Jet jet_mul(const JetSpace& space, const Jet& a, const Jet& b) {
  Jet r{std::vector<Complex>(space.size(), 0.0)};
  for (const auto& p : space.products()) r.c[p.out] += a.c[p.a] * b.c[p.b];
  return r;
}

Jet jet_compose(const JetSpace& space, const Jet& a, std::span<const Complex> coeffs) {
  Jet delta = a;
  delta.c[0] = 0.0;
  const int k = space.order();
  Jet r = jet_constant(space, coeffs[static_cast<std::size_t>(k)]);
  for (int n = k - 1; n >= 0; --n) r = coeffs[static_cast<std::size_t>(n)] + jet_mul(space, r, delta);
  return r;
}

Jet jet_exp(const JetSpace& space, const Jet& a) {
  const Complex a0 = a.c[0];
  if (a0.real() < -700.0) return jet_constant(space, 0.0);
  std::vector<Complex> coeffs(static_cast<std::size_t>(space.order()) + 1);
  Complex t = std::exp(a0);
  for (std::size_t n = 0; n < coeffs.size(); ++n) {
    coeffs[n] = t;
    t /= static_cast<double>(n + 1);
  }
  return jet_compose(space, a, coeffs);
}

Jet jet_reciprocal(const JetSpace& space, const Jet& a) {
  const Complex a0 = a.c[0];
  if (a0 == Complex(0.0)) throw DomainError("jet_reciprocal of a jet vanishing at the base point");
  std::vector<Complex> coeffs(static_cast<std::size_t>(space.order()) + 1);
  Complex t = 1.0 / a0;
  for (auto& v : coeffs) {
    v = t;
    t *= -1.0 / a0;
  }
  return jet_compose(space, a, coeffs);
}

Jet jet_sqrt(const JetSpace& space, const Jet& a) {
  const double a0 = a.c[0].real();
  if (!(a0 > 0.0) || a.c[0].imag() != 0.0) throw DomainError("jet_sqrt needs a positive real base value");
  // Binomial series of sqrt(a0 + h) = sqrt(a0) sum_n binom(1/2, n) (h/a0)^n.
  std::vector<Complex> coeffs(static_cast<std::size_t>(space.order()) + 1);
  double binom = 1.0;
  double scale = std::sqrt(a0);
  for (std::size_t n = 0; n < coeffs.size(); ++n) {
    coeffs[n] = binom * scale;
    binom *= (0.5 - static_cast<double>(n)) / static_cast<double>(n + 1);
    scale /= a0;
  }
  return jet_compose(space, a, coeffs);
}

Jet jet_monomial(const JetSpace& space, std::span<const double> x0, std::span<const int> beta) {
  Jet r = jet_constant(space, 1.0);
  for (std::size_t i = 0; i < beta.size(); ++i)
    for (int p = 0; p < beta[i]; ++p) r = jet_mul(space, r, jet_variable(space, static_cast<int>(i), x0[i]));
  return r;
}

}  // namespace decaylab
