#include "decaylab/decay_probe.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <set>

#include <boost/math/special_functions/hermite.hpp>

#include "decaylab/errors.hpp"
#include "decaylab/parallel.hpp"

namespace decaylab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

const JetSpace& jet_space(int d, int order) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, JetSpace> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find({d, order});
  if (it == cache.end()) it = cache.emplace(std::pair{d, order}, JetSpace(d, order)).first;
  return it->second;
}

std::string shortest(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::vector<Jet> coordinate_jets(const JetSpace& space, std::span<const double> x) {
  std::vector<Jet> xs;
  for (int i = 0; i < space.dimension(); ++i)
    xs.push_back(jet_variable(space, i, x[static_cast<std::size_t>(i)]));
  return xs;
}

Jet squared_norm(const JetSpace& space, std::span<const Jet> xs) {
  Jet s = jet_constant(space, 0.0);
  for (const auto& xi : xs) s = s + jet_mul(space, xi, xi);
  return s;
}

// exp(-s2 / (1 - s2)) on s2 < 1, zero beyond.
Jet ball_bump(const JetSpace& space, const Jet& s2) {
  if (s2.value().real() >= 1.0) return jet_constant(space, 0.0);
  const Jet u = Complex(-1.0) * jet_mul(space, s2, jet_reciprocal(space, 1.0 + Complex(-1.0) * s2));
  return jet_exp(space, u);
}

Jet edge_bump(const JetSpace& space, const Jet& t) { return ball_bump(space, jet_mul(space, t, t)); }

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Polar product rule on B(0, radius).
Rule ball_rule(int d, double radius, int panels, int order) {
  Rule r;
  if (d == 1) {
    const Grid1D g = composite_gauss_legendre(-radius, radius, 2 * panels, order);
    r.nodes = g.nodes;
    r.weights = g.weights;
    return r;
  }
  const Grid1D radial = composite_gauss_legendre(0.0, radius, panels, order);
  const SphereQuadrature sphere = sphere_rule(d, d == 2 ? 64 : 16);
  for (std::size_t i = 0; i < radial.size(); ++i) {
    const double rad = radial.nodes[i];
    const double jac = std::pow(rad, d - 1) * radial.weights[i];
    for (std::size_t k = 0; k < sphere.size(); ++k) {
      for (double c : sphere.point(k)) r.nodes.push_back(rad * c);
      r.weights.push_back(jac * sphere.weights[k]);
    }
  }
  return r;
}

// Product rule on {r_lo < |x| < r_hi, angle(x, dir) < aperture / 2}.
Rule cone_rule(std::span<const double> dir, double aperture, double r_lo, double r_hi) {
  const int d = static_cast<int>(dir.size());
  const Grid1D radial = composite_gauss_legendre(r_lo, r_hi, 4, 16);
  Rule r;
  if (d == 1) {
    const double sign = dir[0] > 0.0 ? 1.0 : -1.0;
    for (std::size_t i = 0; i < radial.size(); ++i) {
      r.nodes.push_back(sign * radial.nodes[i]);
      r.weights.push_back(radial.weights[i]);
    }
    return r;
  }
  const double half = 0.5 * aperture;
  if (d == 2) {
    const double theta0 = std::atan2(dir[1], dir[0]);
    const Grid1D ang = composite_gauss_legendre(theta0 - half, theta0 + half, 2, 16);
    for (std::size_t i = 0; i < radial.size(); ++i)
      for (std::size_t k = 0; k < ang.size(); ++k) {
        r.nodes.push_back(radial.nodes[i] * std::cos(ang.nodes[k]));
        r.nodes.push_back(radial.nodes[i] * std::sin(ang.nodes[k]));
        r.weights.push_back(radial.weights[i] * radial.nodes[i] * ang.weights[k]);
      }
    return r;
  }
  // Orthonormal frame (e1, e2, dir).
  std::array<double, 3> e3{dir[0], dir[1], dir[2]};
  std::array<double, 3> a = std::abs(e3[0]) < 0.9 ? std::array<double, 3>{1, 0, 0}
                                                  : std::array<double, 3>{0, 1, 0};
  const double proj = a[0] * e3[0] + a[1] * e3[1] + a[2] * e3[2];
  std::array<double, 3> e1{a[0] - proj * e3[0], a[1] - proj * e3[1], a[2] - proj * e3[2]};
  const double n1 = std::sqrt(e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]);
  for (double& v : e1) v /= n1;
  const std::array<double, 3> e2{e3[1] * e1[2] - e3[2] * e1[1], e3[2] * e1[0] - e3[0] * e1[2],
                                 e3[0] * e1[1] - e3[1] * e1[0]};
  const Grid1D polar = composite_gauss_legendre(0.0, half, 2, 12);
  const int az = 32;
  for (std::size_t i = 0; i < radial.size(); ++i)
    for (std::size_t k = 0; k < polar.size(); ++k)
      for (int m = 0; m < az; ++m) {
        const double phi = 2.0 * kPi * m / az;
        const double st = std::sin(polar.nodes[k]), ct = std::cos(polar.nodes[k]);
        for (std::size_t c = 0; c < 3; ++c)
          r.nodes.push_back(radial.nodes[i] *
                            (st * std::cos(phi) * e1[c] + st * std::sin(phi) * e2[c] + ct * e3[c]));
        r.weights.push_back(radial.weights[i] * radial.nodes[i] * radial.nodes[i] * st *
                            polar.weights[k] * 2.0 * kPi / az);
      }
  return r;
}

int order_of(std::span<const int> g) {
  int s = 0;
  for (int v : g) s += v;
  return s;
}

double sign_power(int n) { return n % 2 == 0 ? 1.0 : -1.0; }

void check_entry_dims(const DistributionRep& t, std::span<const IndexEntry> entries) {
  for (const auto& e : entries)
    if (e.alpha.dimension() != t.dimension() || e.beta.dimension() != t.dimension())
      throw DomainError("multi-index dimension does not match the distribution");
}

// <x^beta D^alpha T, phi> for every entry, sharing the jets of phi.
std::vector<Complex> pair_many(const DistributionRep& t, std::span<const IndexEntry> entries,
                               const TestFunction& phi) {
  const int d = t.dimension();
  if (phi.dimension != d) throw DomainError("test function dimension does not match the distribution");
  check_entry_dims(t, entries);
  int k = 0;
  for (const auto& e : entries) k = std::max(k, e.alpha.order());
  std::vector<Complex> out(entries.size(), 0.0);

  const auto accumulate = [&](std::span<const double> x, Complex weight, const JetSpace& space) {
    const Jet j = phi.jet(space, x);
    if (j.is_zero()) return false;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const Jet g = jet_mul(space, jet_monomial(space, x, entries[i].beta.entries), j);
      out[i] += weight * sign_power(entries[i].alpha.order()) *
                g.derivative(space, entries[i].alpha.entries);
    }
    return true;
  };

  if (const auto* pm = std::get_if<PointMassDerivative>(&t.rep)) {
    const int kg = pm->gamma.order();
    const JetSpace& space = jet_space(d, k + kg);
    const Jet j = phi.jet(space, pm->location);
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const Jet g = jet_mul(space, jet_monomial(space, pm->location, entries[i].beta.entries), j);
      std::vector<int> total = entries[i].alpha.entries;
      for (std::size_t c = 0; c < total.size(); ++c) total[c] += pm->gamma[c];
      out[i] = pm->scale * sign_power(entries[i].alpha.order() + kg) * g.derivative(space, total);
    }
    return out;
  }
  if (std::holds_alternative<ConstantOne>(t.rep)) {
    const JetSpace& space = jet_space(d, 0);
    for (std::size_t n = 0; n < phi.node_count(); ++n) {
      const auto x = phi.node(n);
      const Complex v = phi.jet(space, x).value();
      if (v == Complex(0.0)) continue;
      for (std::size_t i = 0; i < entries.size(); ++i) {
        if (entries[i].alpha.order() > 0) continue;
        double mono = 1.0;
        for (std::size_t c = 0; c < x.size(); ++c) mono *= std::pow(x[c], entries[i].beta[c]);
        out[i] += phi.weights[n] * mono * v;
      }
    }
    return out;
  }
  const JetSpace& space = jet_space(d, k);
  if (const auto* f = std::get_if<SampledFunction>(&t.rep)) {
    if (!f->value) throw CapacityError("sampled function has no evaluator");
    for (std::size_t n = 0; n < phi.node_count(); ++n) {
      const auto x = phi.node(n);
      const Jet j = phi.jet(space, x);
      if (j.is_zero()) continue;
      const Complex tv = f->value(x);
      if (!std::isfinite(tv.real()) || !std::isfinite(tv.imag()))
        throw EvaluationError("non-finite sample of " + t.label, x[0]);
      for (std::size_t i = 0; i < entries.size(); ++i) {
        const Jet g = jet_mul(space, jet_monomial(space, x, entries[i].beta.entries), j);
        out[i] += phi.weights[n] * tv * sign_power(entries[i].alpha.order()) *
                  g.derivative(space, entries[i].alpha.entries);
      }
    }
    return out;
  }
  if (const auto* s = std::get_if<SurfaceMeasure>(&t.rep)) {
    for (std::size_t n = 0; n < s->rule.size(); ++n) accumulate(s->rule.point(n), s->rule.weights[n], space);
    return out;
  }
  const auto& c = std::get<CantorMeasure>(t.rep);
  for (std::size_t n = 0; n < c.measure.size(); ++n)
    accumulate(std::span(&c.measure.atoms[n], 1), c.measure.masses[n], space);
  return out;
}

std::vector<std::vector<int>> multi_indices(int d, int max_order) {
  std::vector<std::vector<int>> out;
  const JetSpace& space = jet_space(d, max_order);
  for (std::size_t i = 0; i < space.size(); ++i) out.push_back(space.exponent(i));
  return out;
}

}  // namespace

int DistributionRep::dimension() const {
  return std::visit(
      [](const auto& r) -> int {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, SampledFunction> || std::is_same_v<R, ConstantOne>)
          return r.dimension;
        else if constexpr (std::is_same_v<R, SurfaceMeasure>)
          return r.rule.dimension;
        else if constexpr (std::is_same_v<R, PointMassDerivative>)
          return static_cast<int>(r.location.size());
        else
          return 1;
      },
      rep);
}

DistributionRep point_mass_derivative(std::vector<double> location, MultiIndex gamma, Complex scale) {
  if (gamma.dimension() != static_cast<int>(location.size()))
    throw DomainError("point mass location and multi-index differ in dimension");
  std::string label = "point_mass(gamma=" + to_string(gamma) + ")";
  return {label, PointMassDerivative{std::move(location), std::move(gamma), scale}};
}

DistributionRep fourier_transform(const DistributionRep& t) {
  const int d = t.dimension();
  if (std::holds_alternative<ConstantOne>(t.rep))
    return point_mass_derivative(std::vector<double>(static_cast<std::size_t>(d), 0.0),
                                 MultiIndex::zero(d), std::pow(2.0 * kPi, d));
  if (const auto* pm = std::get_if<PointMassDerivative>(&t.rep)) {
    SampledFunction f;
    f.dimension = d;
    f.value = [pm = *pm](std::span<const double> xi) {
      Complex v = pm.scale;
      double phase = 0.0;
      for (std::size_t i = 0; i < xi.size(); ++i) {
        for (int p = 0; p < pm.gamma[i]; ++p) v *= Complex(0.0, xi[i]);
        phase -= pm.location[i] * xi[i];
      }
      return v * std::polar(1.0, phase);
    };
    return {"hat(" + t.label + ")", std::move(f)};
  }
  if (const auto* f = std::get_if<SampledFunction>(&t.rep)) {
    if (!f->transform) throw CapacityError("no Fourier transform available for " + t.label);
    return *f->transform;
  }
  if (const auto* s = std::get_if<SurfaceMeasure>(&t.rep)) {
    SampledFunction f;
    f.dimension = d;
    f.value = [d](std::span<const double> xi) {
      double r2 = 0.0;
      for (double v : xi) r2 += v * v;
      return Complex(sigma_hat_exact(d, std::sqrt(r2)));
    };
    (void)s;
    return {"hat(" + t.label + ")", std::move(f)};
  }
  const auto& c = std::get<CantorMeasure>(t.rep);
  SampledFunction f;
  f.dimension = 1;
  f.value = [mu = c.measure](std::span<const double> xi) { return fourier_transform(mu, xi[0]); };
  return {"hat(" + t.label + ")", std::move(f)};
}

DistributionRep constant_one(int d) {
  if (d < 1 || d > 3) throw UnsupportedDimension(d);
  return {"constant_one", ConstantOne{d}};
}

DistributionRep coordinate_distribution(int d, int i) {
  if (d < 1 || d > 3) throw UnsupportedDimension(d);
  if (i < 0 || i >= d) throw DomainError("coordinate index out of range");
  SampledFunction f;
  f.dimension = d;
  f.value = [i](std::span<const double> x) { return Complex(x[static_cast<std::size_t>(i)]); };
  f.transform = std::make_shared<const DistributionRep>(point_mass_derivative(
      std::vector<double>(static_cast<std::size_t>(d), 0.0), MultiIndex::unit(d, i),
      Complex(0.0, std::pow(2.0 * kPi, d))));
  return {"x_" + std::to_string(i + 1), std::move(f)};
}

DistributionRep gaussian_distribution(int d, double a) {
  if (d < 1 || d > 3) throw UnsupportedDimension(d);
  if (!(a > 0.0)) throw DomainError("gaussian_distribution: a must be positive");
  SampledFunction f;
  f.dimension = d;
  f.value = [a](std::span<const double> x) {
    double r2 = 0.0;
    for (double v : x) r2 += v * v;
    return Complex(std::exp(-a * r2));
  };
  if (d == 1)
    f.derivative = [a](int k, double x) {
      const double sa = std::sqrt(a);
      return std::pow(-sa, k) * boost::math::hermite(static_cast<unsigned>(k), sa * x) *
             std::exp(-a * x * x);
    };
  SampledFunction ft;
  ft.dimension = d;
  ft.value = [a, d](std::span<const double> xi) {
    double r2 = 0.0;
    for (double v : xi) r2 += v * v;
    return Complex(std::pow(kPi / a, 0.5 * d) * std::exp(-r2 / (4.0 * a)));
  };
  f.transform = std::make_shared<const DistributionRep>(DistributionRep{"hat(gaussian)", std::move(ft)});
  return {"gaussian", std::move(f)};
}

DistributionRep lorentzian_distribution() {
  SampledFunction f;
  f.dimension = 1;
  f.value = [](std::span<const double> x) { return Complex(1.0 / (1.0 + x[0] * x[0])); };
  // 1/(1+x^2) = Im 1/(x-i), so f^{(k)} = Im (-1)^k k! (x-i)^{-k-1}.
  f.derivative = [](int k, double x) {
    const Complex z(x, -1.0);
    return (sign_power(k) * std::tgamma(k + 1.0) * std::pow(z, -(k + 1))).imag();
  };
  SampledFunction ft;
  ft.dimension = 1;
  ft.value = [](std::span<const double> xi) { return Complex(kPi * std::exp(-std::abs(xi[0]))); };
  f.transform = std::make_shared<const DistributionRep>(DistributionRep{"hat(lorentzian)", std::move(ft)});
  return {"lorentzian", std::move(f)};
}

DistributionRep surface_measure(int d, int resolution) {
  return {"surface_measure_d" + std::to_string(d), SurfaceMeasure{sphere_rule(d, resolution)}};
}

DistributionRep cantor_distribution(const DiscreteMeasure& mu) { return {"cantor", CantorMeasure{mu}}; }

std::span<const double> TestFunction::node(std::size_t i) const {
  return {nodes.data() + i * static_cast<std::size_t>(dimension), static_cast<std::size_t>(dimension)};
}

Complex TestFunction::value(std::span<const double> x) const { return jet(jet_space(dimension, 0), x).value(); }

double TestFunction::lp_norm(double p) const {
  if (!(p >= 1.0)) throw DomainError("lp_norm: p must be >= 1");
  double acc = 0.0;
  for (std::size_t n = 0; n < node_count(); ++n) {
    const double v = std::abs(value(node(n)));
    acc = p == kInf ? std::max(acc, v) : acc + weights[n] * std::pow(v, p);
  }
  return p == kInf ? acc : std::pow(acc, 1.0 / p);
}

double TestFunction::fourier_lq_norm(double q) const {
  if (dimension != 1) throw UnsupportedDimension(dimension);
  if (!(q >= 1.0)) throw DomainError("fourier_lq_norm: q must be >= 1");
  std::vector<Complex> vals(node_count());
  for (std::size_t n = 0; n < node_count(); ++n) vals[n] = weights[n] * value(node(n));
  // Frequencies beyond pi / (widest node gap) are not resolved by the rule.
  std::vector<double> sorted(nodes);
  std::sort(sorted.begin(), sorted.end());
  double gap = 0.0;
  for (std::size_t n = 1; n < sorted.size(); ++n) gap = std::max(gap, sorted[n] - sorted[n - 1]);
  if (!(gap > 0.0)) throw DomainError("fourier_lq_norm: quadrature needs at least two nodes");
  const int half = 800;
  const double h = std::numbers::pi / gap / half;
  double acc = 0.0;
  for (int m = -half; m <= half; ++m) {
    const double x = h * m;
    Complex s = 0.0;
    for (std::size_t n = 0; n < node_count(); ++n) s += vals[n] * std::polar(1.0, -x * nodes[n]);
    const double v = std::abs(s);
    acc = q == kInf ? std::max(acc, v) : acc + h * std::pow(v, q);
  }
  return q == kInf ? acc : std::pow(acc, 1.0 / q);
}

TestFunction gaussian_test(int d, double a) {
  if (!(a > 0.0)) throw DomainError("gaussian_test: a must be positive");
  TestFunction t;
  t.dimension = d;
  t.label = "gaussian_test(a=" + shortest(a) + ")";
  t.jet = [a](const JetSpace& space, std::span<const double> x) {
    const auto xs = coordinate_jets(space, x);
    return jet_exp(space, Complex(-a) * squared_norm(space, xs));
  };
  Rule r = ball_rule(d, std::sqrt(40.0 / a), 8, 16);
  t.nodes = std::move(r.nodes);
  t.weights = std::move(r.weights);
  return t;
}

TestFunction plateau_test(int d, double radius) {
  if (!(radius > 0.0)) throw DomainError("plateau_test: radius must be positive");
  TestFunction t;
  t.dimension = d;
  t.label = "plateau_test(radius=" + shortest(radius) + ")";
  t.jet = [radius](const JetSpace& space, std::span<const double> x) {
    const auto xs = coordinate_jets(space, x);
    const Jet s2 = (1.0 / (radius * radius)) * squared_norm(space, xs);
    const double s2v = s2.value().real();
    if (s2v <= 1.0) return jet_constant(space, 1.0);
    if (s2v >= 4.0) return jet_constant(space, 0.0);
    const Jet s = jet_sqrt(space, s2);
    const Jet ha = jet_exp(space, Complex(-1.0) * jet_reciprocal(space, 2.0 + Complex(-1.0) * s));
    const Jet hb = jet_exp(space, Complex(-1.0) * jet_reciprocal(space, -1.0 + s));
    return jet_mul(space, ha, jet_reciprocal(space, ha + hb));
  };
  Rule r = ball_rule(d, 2.0 * radius, 16, 16);
  t.nodes = std::move(r.nodes);
  t.weights = std::move(r.weights);
  return t;
}

TestFunction zero_member(int d, double lambda, std::span<const double> eta) {
  if (!(lambda > 0.0)) throw DomainError("zero_member: lambda must be positive");
  if (!eta.empty() && static_cast<int>(eta.size()) != d) throw DomainError("modulation dimension mismatch");
  TestFunction t;
  t.dimension = d;
  t.label = "zero(lambda=" + shortest(lambda) + ")";
  t.jet = [lambda, eta = std::vector<double>(eta.begin(), eta.end())](const JetSpace& space,
                                                                      std::span<const double> x) {
    auto xs = coordinate_jets(space, x);
    const Jet s2 = (lambda * lambda) * squared_norm(space, xs);
    Jet bump = ball_bump(space, s2);
    if (bump.is_zero() || eta.empty()) return bump;
    Jet phase = jet_constant(space, 0.0);
    for (std::size_t i = 0; i < eta.size(); ++i) phase = phase + Complex(0.0, lambda * eta[i]) * xs[i];
    return jet_mul(space, bump, jet_exp(space, phase));
  };
  Rule r = ball_rule(d, 1.0 / lambda, 4, 16);
  t.nodes = std::move(r.nodes);
  t.weights = std::move(r.weights);
  return t;
}

TestFunction cone_member(std::span<const double> direction, double aperture, double lambda) {
  const int d = static_cast<int>(direction.size());
  if (d < 1 || d > 3) throw UnsupportedDimension(d);
  if (!(lambda > 0.0)) throw DomainError("cone_member: lambda must be positive");
  if (!(aperture > 0.0 && aperture < kPi)) throw DomainError("cone_member: aperture must lie in (0, pi)");
  double norm = 0.0;
  for (double v : direction) norm += v * v;
  if (std::abs(norm - 1.0) > 1e-12) throw DomainError("cone_member: direction must be a unit vector");
  TestFunction t;
  t.dimension = d;
  t.label = "cone(lambda=" + shortest(lambda) + ")";
  const double denom = 1.0 - std::cos(0.5 * aperture);
  t.jet = [lambda, denom, dir = std::vector<double>(direction.begin(), direction.end())](
              const JetSpace& space, std::span<const double> x) {
    double dot = 0.0;
    for (std::size_t i = 0; i < dir.size(); ++i) dot += dir[i] * x[i];
    if (dot <= 0.0) return jet_constant(space, 0.0);
    const auto xs = coordinate_jets(space, x);
    const Jet s2 = squared_norm(space, xs);
    const Jet r = jet_sqrt(space, s2);
    const Jet s = (1.0 / lambda) * r;
    const double sv = s.value().real();
    if (sv <= 1.0 || sv >= 2.0) return jet_constant(space, 0.0);
    const Jet v = jet_mul(space, -1.0 + s, 2.0 + Complex(-1.0) * s);
    Jet out = jet_exp(space, 4.0 + Complex(-1.0) * jet_reciprocal(space, v));
    if (dir.size() == 1 || out.is_zero()) return out;
    Jet proj = jet_constant(space, 0.0);
    for (std::size_t i = 0; i < dir.size(); ++i) proj = proj + Complex(dir[i]) * xs[i];
    const Jet cosang = jet_mul(space, proj, jet_reciprocal(space, r));
    const Jet tt = (1.0 / denom) * (1.0 + Complex(-1.0) * cosang);
    return jet_mul(space, out, edge_bump(space, tt));
  };
  Rule rule = cone_rule(direction, aperture, lambda, 2.0 * lambda);
  t.nodes = std::move(rule.nodes);
  t.weights = std::move(rule.weights);
  return t;
}

TestFunction derivative_of(const TestFunction& phi, const MultiIndex& alpha) {
  if (alpha.dimension() != phi.dimension) throw DomainError("derivative_of: dimension mismatch");
  TestFunction t = phi;
  t.label = "D^" + to_string(alpha) + " " + phi.label;
  t.jet = [base = phi.jet, alpha, d = phi.dimension](const JetSpace& space, std::span<const double> x) {
    const JetSpace& big = jet_space(d, space.order() + alpha.order());
    const Jet j = base(big, x);
    Jet out = jet_constant(space, 0.0);
    for (std::size_t i = 0; i < space.size(); ++i) {
      std::vector<int> g = space.exponent(i);
      for (std::size_t c = 0; c < g.size(); ++c) g[c] += alpha[c];
      const std::size_t bi = big.index(g);
      out.c[i] = j.c[bi] * big.factorial(bi) / space.factorial(i);
    }
    return out;
  };
  return t;
}

Complex pair(const DistributionRep& t, const MultiIndex& alpha, const MultiIndex& beta,
             const TestFunction& phi) {
  const IndexEntry e{alpha, beta};
  return pair_many(t, std::span(&e, 1), phi).front();
}

int ParameterPair::dimension() const {
  if (entries.empty()) throw DomainError("empty parameter set");
  return entries.front().alpha.dimension();
}

double conjugate_exponent(double q) {
  if (!(q >= 1.0)) throw DomainError("exponent must be >= 1");
  if (q == 1.0) return kInf;
  if (q == kInf) return 1.0;
  return q / (q - 1.0);
}

bool is_downward_closed(std::span<const IndexEntry> entries) {
  std::set<std::pair<std::vector<int>, std::vector<int>>> present;
  for (const auto& e : entries) present.insert({e.alpha.entries, e.beta.entries});
  for (const auto& e : entries) {
    std::vector<int> joined = e.alpha.entries;
    joined.insert(joined.end(), e.beta.entries.begin(), e.beta.entries.end());
    std::vector<int> cur(joined.size(), 0);
    while (true) {
      const std::vector<int> a(cur.begin(), cur.begin() + static_cast<std::ptrdiff_t>(e.alpha.entries.size()));
      const std::vector<int> b(cur.begin() + static_cast<std::ptrdiff_t>(e.alpha.entries.size()), cur.end());
      if (!present.contains({a, b})) return false;
      std::size_t pos = 0;
      while (pos < cur.size() && cur[pos] == joined[pos]) cur[pos++] = 0;
      if (pos == cur.size()) break;
      ++cur[pos];
    }
  }
  return true;
}

ParameterPair make_parameter_pair(std::vector<IndexEntry> entries, double q, std::vector<double> growth) {
  if (entries.empty()) throw SpecError("parameter set must be nonempty");
  if (!(q >= 1.0)) throw SpecError("exponent q must be >= 1");
  const int d = entries.front().alpha.dimension();
  for (const auto& e : entries)
    if (e.alpha.dimension() != d || e.beta.dimension() != d)
      throw SpecError("all multi-indices must share one dimension");
  if (growth.empty()) growth.assign(entries.size(), 1.0);
  if (growth.size() != entries.size()) throw SpecError("one growth constant per index entry");
  for (double c : growth)
    if (!(c > 0.0) || !std::isfinite(c)) throw SpecError("growth constants must be positive and finite");
  ParameterPair p;
  p.closed = is_downward_closed(entries);
  p.entries = std::move(entries);
  p.growth = std::move(growth);
  p.q = q;
  p.degenerate = q == 1.0 || q == kInf;
  return p;
}

ParameterPair full_parameter_pair(int d, int max_order, double q, double a, const WeightSequence* weights) {
  if (max_order < 0 || max_order > 8) throw DomainError("index sets are truncated at |alpha| + |beta| <= 8");
  if (weights && weights->size() <= static_cast<std::size_t>(max_order))
    throw CapacityError("weight sequence shorter than the index set order");
  const auto idx = multi_indices(d, max_order);
  std::vector<IndexEntry> entries;
  std::vector<double> growth;
  for (const auto& al : idx)
    for (const auto& be : idx) {
      const int oa = order_of(al), ob = order_of(be);
      if (oa + ob > max_order) continue;
      entries.push_back({MultiIndex(al), MultiIndex(be)});
      double c = std::pow(a, oa + ob);
      if (weights)
        c *= std::exp(weights->log_m[static_cast<std::size_t>(oa)] +
                      weights->log_m_prime[static_cast<std::size_t>(ob)]);
      growth.push_back(c);
    }
  return make_parameter_pair(std::move(entries), q, std::move(growth));
}

ParameterPair dual_parameter_set(const ParameterPair& p) {
  ParameterPair out = p;
  for (auto& e : out.entries) std::swap(e.alpha, e.beta);
  out.q = conjugate_exponent(p.q);
  out.degenerate = p.degenerate;
  out.closed = is_downward_closed(out.entries);
  return out;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Bounded: return "BOUNDED";
    case Verdict::Unbounded: return "UNBOUNDED";
    case Verdict::Undecided: return "UNDECIDED";
  }
  return "UNDECIDED";
}

VerdictResult classify_ratios(std::span<const double> scales, std::span<const double> ratios,
                              const VerdictRule& rule) {
  if (scales.size() != ratios.size() || scales.empty()) throw DomainError("classify_ratios: size mismatch");
  VerdictResult out;
  std::vector<double> xs, ys;
  bool zero_seen = false, positive_after_zero = false;
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    if (!std::isfinite(ratios[i])) throw EvaluationError("non-finite ratio", scales[i]);
    if (ratios[i] > 0.0) {
      if (zero_seen) positive_after_zero = true;
      xs.push_back(scales[i]);
      ys.push_back(ratios[i]);
    } else {
      zero_seen = true;
    }
  }
  if (xs.empty()) {
    out.verdict = Verdict::Bounded;
    return out;
  }
  if (xs.size() < 3) {
    out.verdict = positive_after_zero ? Verdict::Undecided : Verdict::Bounded;
    return out;
  }
  out.fit = fit_loglog(xs, ys);
  bool increasing = !zero_seen;
  for (std::size_t i = 1; i < ys.size() && increasing; ++i) increasing = ys[i] > ys[i - 1];
  const double decades = std::log10(xs.back() / xs.front());
  if (increasing && decades >= rule.min_decades - 1e-12 && out.fit.slope > rule.unbounded_slope &&
      out.fit.r_squared > rule.unbounded_r_squared)
    out.verdict = Verdict::Unbounded;
  else if (out.fit.slope <= rule.bounded_slope && !positive_after_zero)
    out.verdict = Verdict::Bounded;
  else
    out.verdict = Verdict::Undecided;
  return out;
}

std::string Direction::label() const {
  if (is_zero()) return "ZERO";
  std::string s = "(";
  for (std::size_t i = 0; i < unit->size(); ++i) {
    if (i) s += ",";
    const double v = std::abs((*unit)[i]) < 1e-15 ? 0.0 : (*unit)[i];
    s += shortest(v);
  }
  return s + ")";
}

TestFunction TestFamily::member(std::size_t j) const {
  if (j >= ladder.size()) throw DomainError("family member index out of range");
  if (direction.is_zero()) return zero_member(dimension, ladder[j], modulation);
  return cone_member(*direction.unit, aperture, ladder[j]);
}

TestFamily make_family(int d, const Direction& direction, double aperture) {
  TestFamily f;
  f.dimension = d;
  f.direction = direction;
  f.aperture = aperture;
  for (int j = 0; j <= 10; ++j) f.ladder.push_back(std::ldexp(1.0, j));
  if (direction.is_zero()) {
    f.modulation.assign(static_cast<std::size_t>(d), 0.0);
    f.modulation[0] = 1.0;
  }
  return f;
}

DecayFit directional_decay_fit(const DistributionRep& t, const ParameterPair& p, const TestFamily& family,
                               const DecayProbeOptions& options) {
  if (p.dimension() != t.dimension() || family.dimension != t.dimension())
    throw DomainError("distribution, parameter set and family differ in dimension");
  if (family.ladder.empty()) throw DomainError("empty dilation ladder");
  for (std::size_t j = 1; j < family.ladder.size(); ++j)
    if (!(family.ladder[j] > family.ladder[j - 1])) throw DomainError("dilation ladder must increase");
  const double r = options.side == NormSide::Direct ? conjugate_exponent(p.q) : p.q;
  const std::size_t members = family.ladder.size();
  std::vector<std::vector<double>> ratios(p.entries.size(), std::vector<double>(members, 0.0));
  parallel_for(
      members,
      [&](std::size_t j) {
        const TestFunction phi = family.member(j);
        try {
          const double norm = options.side == NormSide::Direct ? phi.lp_norm(r) : phi.fourier_lq_norm(r);
          if (!(norm > 0.0)) throw EvaluationError("test function has zero norm", family.ladder[j]);
          const auto vals = pair_many(t, p.entries, phi);
          for (std::size_t e = 0; e < vals.size(); ++e) ratios[e][j] = std::abs(vals[e]) / (p.growth[e] * norm);
        } catch (const Error& err) {
          throw Error(std::string(err.what()) + " [family member " + phi.label + ", direction " +
                      family.direction.label() + "]");
        }
      },
      options.threads);

  DecayFit out;
  out.direction = family.direction.label();
  out.scales = family.ladder;
  out.norm_exponent = r;
  out.aggregate.assign(members, 0.0);
  for (std::size_t e = 0; e < p.entries.size(); ++e) {
    EntryDecay ed;
    ed.entry = p.entries[e];
    ed.growth = p.growth[e];
    ed.ratios = ratios[e];
    ed.sup_ratio = *std::max_element(ed.ratios.begin(), ed.ratios.end());
    ed.verdict = classify_ratios(out.scales, ed.ratios, options.rule);
    for (std::size_t j = 0; j < members; ++j)
      out.aggregate[j] = p.q == kInf ? std::max(out.aggregate[j], ed.ratios[j])
                                     : out.aggregate[j] + std::pow(ed.ratios[j], p.q);
    out.entries.push_back(std::move(ed));
  }
  if (p.q != kInf)
    for (double& v : out.aggregate) v = std::pow(v, 1.0 / p.q);
  out.verdict = classify_ratios(out.scales, out.aggregate, options.rule);
  return out;
}

WavefrontSet wavefront_scan(const DistributionRep& t, const ParameterPair& p,
                            std::span<const Direction> directions, double aperture,
                            const DecayProbeOptions& options) {
  if (directions.empty()) throw DomainError("wavefront_scan needs at least one direction");
  const DistributionRep hat = fourier_transform(t);
  const ParameterPair dual = dual_parameter_set(p);
  const int d = t.dimension();
  std::vector<DecayFit> fits(directions.size());
  DecayProbeOptions inner = options;
  inner.threads = 1;
  parallel_for(
      directions.size(),
      [&](std::size_t i) {
        fits[i] = directional_decay_fit(hat, dual, make_family(d, directions[i], aperture), inner);
      },
      options.threads);
  WavefrontSet out;
  for (const auto& f : fits) {
    if (f.verdict.verdict == Verdict::Unbounded) out.flagged.push_back(f.direction);
    if (f.verdict.verdict == Verdict::Undecided) out.undecided.push_back(f.direction);
  }
  out.fits = std::move(fits);
  return out;
}

std::vector<Direction> standard_directions(int d, int count) {
  std::vector<Direction> out;
  if (d == 1) {
    out.push_back({std::vector<double>{1.0}});
    out.push_back({std::vector<double>{-1.0}});
  } else if (d == 2) {
    if (count < 1) throw DomainError("standard_directions: count must be positive");
    for (int k = 0; k < count; ++k) {
      const double t = 2.0 * kPi * k / count;
      out.push_back({std::vector<double>{std::cos(t), std::sin(t)}});
    }
  } else if (d == 3) {
    for (int i = 0; i < 3; ++i)
      for (double s : {1.0, -1.0}) {
        std::vector<double> v(3, 0.0);
        v[static_cast<std::size_t>(i)] = s;
        out.push_back({v});
      }
  } else {
    throw UnsupportedDimension(d);
  }
  out.push_back(Direction::zero());
  return out;
}

std::string to_string(Membership m) { return m == Membership::Member ? "MEMBER" : "NON-MEMBER"; }

GevreyMembership gevrey_membership(const DistributionRep& t, double q, double s, int k_max) {
  const auto* f = std::get_if<SampledFunction>(&t.rep);
  if (!f || f->dimension != 1 || !f->derivative)
    throw CapacityError("gevrey_membership needs a one-dimensional sampled function with derivatives");
  if (!(q >= 1.0) || q == kInf) throw DomainError("gevrey_membership: q must be finite and >= 1");
  if (!(s >= 0.0)) throw DomainError("gevrey_membership: s must be >= 0");
  if (k_max < 6) throw CapacityError("gevrey_membership needs k_max >= 6");
  GevreyMembership out;
  out.s_requested = s;
  const Grid1D grid = composite_gauss_legendre(-0.5 * kPi, 0.5 * kPi, 64, 20);
  std::vector<double> norms;
  for (int k = 0; k <= k_max; ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double th = grid.nodes[i];
      const double c = std::cos(th);
      const double v = f->derivative(k, std::tan(th));
      acc += grid.weights[i] * std::pow(std::abs(v), q) / (c * c);
    }
    const double norm = std::pow(acc, 1.0 / q);
    if (!std::isfinite(norm)) {
      out.diverging_index = k;
      return out;
    }
    norms.push_back(norm);
  }
  out.fit = fit_gevrey(norms, 3);
  out.fit.q = q;
  out.verdict = out.fit.s <= s + 0.1 * std::max(s, 1.0) ? Membership::Member : Membership::NonMember;
  return out;
}

GevreyMembership gevrey_membership_sigma_hat(int d, double q, double s, int k_max) {
  GevreyMembership out;
  out.s_requested = s;
  try {
    out.fit = gevrey_norm_sequence(d, q, k_max, coeff_tables(k_max / 2 + 1));
  } catch (const DomainError&) {
    if (k_max < 5 || k_max > 12) throw;
    out.diverging_index = 0;
    return out;
  }
  out.verdict = out.fit.s <= s + 0.1 * std::max(s, 1.0) ? Membership::Member : Membership::NonMember;
  return out;
}

}  // namespace decaylab
