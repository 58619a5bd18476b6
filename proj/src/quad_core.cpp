#include "decaylab/quad_core.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

#include <boost/math/special_functions/binomial.hpp>

#include "decaylab/errors.hpp"

namespace decaylab {

namespace {

// Reference nodes on [-1, 1] by Newton iteration on P_n.
Grid1D legendre_reference(int n) {
  Grid1D g;
  g.nodes.resize(static_cast<std::size_t>(n));
  g.weights.resize(static_cast<std::size_t>(n));
  const double pi = std::numbers::pi;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    g.nodes[static_cast<std::size_t>(i)] = -x;
    g.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    g.weights[static_cast<std::size_t>(i)] = w;
    g.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  if (n % 2 == 1) g.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
  return g;
}

const Grid1D& cached_reference(int n) {
  static std::mutex mutex;
  static std::map<int, Grid1D> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, legendre_reference(n)).first;
  return it->second;
}

double checked_power(const ScalarFn& f, double r, double q) {
  const double v = f(r);
  if (!std::isfinite(v)) throw EvaluationError("non-finite integrand", r);
  return std::pow(std::abs(v), q);
}

}  // namespace

void Grid1D::validate() const {
  if (nodes.size() < 2) throw SpecError("Grid1D needs at least two nodes");
  if (weights.size() != nodes.size()) throw SpecError("Grid1D node/weight length mismatch");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!(weights[i] > 0.0)) throw SpecError("Grid1D weight not positive at " + std::to_string(i));
    if (i > 0 && !(nodes[i] > nodes[i - 1]))
      throw SpecError("Grid1D nodes not increasing at " + std::to_string(i));
  }
}

Grid1D gauss_legendre(int n, double a, double b) {
  if (n < 1) throw DomainError("gauss_legendre: n must be positive");
  const Grid1D& ref = cached_reference(n);
  Grid1D g;
  g.nodes.reserve(ref.size());
  g.weights.reserve(ref.size());
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  for (std::size_t i = 0; i < ref.size(); ++i) {
    g.nodes.push_back(mid + half * ref.nodes[i]);
    g.weights.push_back(half * ref.weights[i]);
  }
  return g;
}

Grid1D composite_gauss_legendre(double a, double b, int panels, int order) {
  if (panels < 1) throw DomainError("composite_gauss_legendre: panels must be positive");
  const Grid1D& ref = cached_reference(order);
  Grid1D g;
  g.nodes.reserve(static_cast<std::size_t>(panels) * ref.size());
  g.weights.reserve(g.nodes.capacity());
  const double width = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * width;
    const double mid = lo + 0.5 * width;
    for (std::size_t i = 0; i < ref.size(); ++i) {
      g.nodes.push_back(mid + 0.5 * width * ref.nodes[i]);
      g.weights.push_back(0.5 * width * ref.weights[i]);
    }
  }
  return g;
}

double integrate_panels(const ScalarFn& f, double a, double b, int panels, int order) {
  const Grid1D& ref = cached_reference(order);
  const double width = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * width;
    double s = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i) s += ref.weights[i] * f(mid + 0.5 * width * ref.nodes[i]);
    total += 0.5 * width * s;
  }
  return total;
}

double surface_area(int d) {
  if (d < 1) throw DomainError("surface_area: d must be >= 1");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

double SphereQuadrature::total_weight() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

SphereQuadrature sphere_rule(int d, int resolution) {
  if (d != 2 && d != 3) throw UnsupportedDimension(d);
  if (resolution < 8) throw DomainError("sphere_rule: resolution must be >= 8");
  SphereQuadrature rule;
  rule.dimension = d;
  const double two_pi = 2.0 * std::numbers::pi;
  if (d == 2) {
    const double w = two_pi / resolution;
    rule.coords.reserve(2 * static_cast<std::size_t>(resolution));
    for (int i = 0; i < resolution; ++i) {
      const double t = two_pi * i / resolution;
      rule.coords.push_back(std::cos(t));
      rule.coords.push_back(std::sin(t));
      rule.weights.push_back(w);
    }
    return rule;
  }
  const Grid1D polar = gauss_legendre(resolution, -1.0, 1.0);
  const int azimuths = 2 * resolution;
  const double dphi = two_pi / azimuths;
  rule.coords.reserve(3 * polar.size() * static_cast<std::size_t>(azimuths));
  for (std::size_t i = 0; i < polar.size(); ++i) {
    const double z = polar.nodes[i];
    const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    for (int j = 0; j < azimuths; ++j) {
      const double phi = dphi * j;
      rule.coords.push_back(s * std::cos(phi));
      rule.coords.push_back(s * std::sin(phi));
      rule.coords.push_back(z);
      rule.weights.push_back(polar.weights[i] * dphi);
    }
  }
  return rule;
}

double integrate_radial_shell(const ScalarFn& f, int d, double q, double r_lo, double r_hi,
                              const RadialIntegralOptions& options) {
  if (!(r_hi > r_lo) || r_lo < 0.0) throw DomainError("integrate_radial: need 0 <= r_lo < r_hi");
  if (!(q >= 1.0)) throw DomainError("integrate_radial: q must be >= 1");
  const auto integrand = [&](double r) {
    return checked_power(f, r, q) * std::pow(r, d - 1);
  };
  int panels = options.initial_panels > 0
                   ? options.initial_panels
                   : std::max(8, static_cast<int>(std::ceil(r_hi - r_lo)));
  double previous = integrate_panels(integrand, r_lo, r_hi, panels, options.order);
  double current = previous;
  for (int i = 0; i < options.max_doublings; ++i) {
    panels *= 2;
    current = integrate_panels(integrand, r_lo, r_hi, panels, options.order);
    if (std::abs(current - previous) <= options.rel_tol * std::abs(current)) break;
    previous = current;
  }
  return surface_area(d) * current;
}

double integrate_radial(const ScalarFn& f, int d, double q, double r_max,
                        const RadialIntegralOptions& options) {
  if (!(r_max > 0.0)) throw DomainError("integrate_radial: r_max must be positive");
  return integrate_radial_shell(f, d, q, 0.0, r_max, options);
}

double default_fd_step(int n, double r) {
  return std::max(0.2, 0.09 * n) * std::max(1.0, 0.02 * std::abs(r));
}

double finite_diff(const ScalarFn& f, int n, double r, const FiniteDiffOptions& options) {
  if (n < 0 || n > 10) throw DomainError("finite_diff: order must lie in [0, 10]");
  if (n == 0) return f(r);
  const double h0 = options.h > 0.0 ? options.h : default_fd_step(n, r);
  const double reach = 0.5 * n * h0;
  if (r - reach < options.domain_lo || r + reach > options.domain_hi)
    throw DomainError("finite_diff: stencil [" + std::to_string(r - reach) + ", " +
                      std::to_string(r + reach) + "] leaves the domain");

  const auto stencil = [&](double h) {
    double s = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double c = boost::math::binomial_coefficient<double>(static_cast<unsigned>(n),
                                                                 static_cast<unsigned>(i));
      s += ((i % 2) ? -c : c) * f(r + (0.5 * n - i) * h);
    }
    return s / std::pow(h, n);
  };

  const int levels = std::max(0, options.richardson_levels);
  std::vector<double> table(static_cast<std::size_t>(levels) + 1);
  for (int l = 0; l <= levels; ++l) table[static_cast<std::size_t>(l)] = stencil(h0 / std::pow(2.0, l));
  // Neville-style elimination of h^2, h^4, ...
  for (int order = 1; order <= levels; ++order) {
    const double factor = std::pow(4.0, order);
    for (int l = levels; l >= order; --l) {
      auto& hi = table[static_cast<std::size_t>(l)];
      const auto lo = table[static_cast<std::size_t>(l - 1)];
      hi = (factor * hi - lo) / (factor - 1.0);
    }
  }
  return table.back();
}

FitResult fit_linear(std::span<const double> xs, std::span<const double> ys) {
  const std::size_t n = xs.size();
  if (n != ys.size()) throw DomainError("fit: length mismatch");
  if (n < 2) throw DomainError("fit: need at least two points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0) throw DomainError("fit: abscissae are all equal");
  FitResult fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = ys[i] - (fit.intercept + fit.slope * xs[i]);
    sse += e * e;
  }
  const double scale = std::max(1.0, std::abs(my));
  if (syy <= 1e-24 * scale * scale * static_cast<double>(n))
    fit.r_squared = 1.0;
  else
    fit.r_squared = std::clamp(1.0 - sse / syy, 0.0, 1.0);
  fit.slope_stderr = n > 2 ? std::sqrt(sse / static_cast<double>(n - 2) / sxx) : 0.0;
  fit.window = {0, n};
  return fit;
}

FitResult fit_loglog(std::span<const double> xs, std::span<const double> ys, IndexWindow window) {
  if (xs.size() != ys.size()) throw DomainError("fit_loglog: length mismatch");
  if (window.end > xs.size() || window.size() < 3)
    throw DomainError("fit_loglog: window must contain at least three points");
  std::vector<double> lx, ly;
  lx.reserve(window.size());
  ly.reserve(window.size());
  for (std::size_t i = window.begin; i < window.end; ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0))
      throw DomainError("fit_loglog: nonpositive value at index " + std::to_string(i));
    lx.push_back(std::log(xs[i]));
    ly.push_back(std::log(ys[i]));
  }
  FitResult fit = fit_linear(lx, ly);
  fit.window = window;
  return fit;
}

FitResult fit_loglog(std::span<const double> xs, std::span<const double> ys) {
  return fit_loglog(xs, ys, IndexWindow{0, xs.size()});
}

std::vector<AnnulusSup> annulus_envelope(const ScalarFn& g, double r0, double r_hi,
                                         const EnvelopeOptions& options) {
  if (!(r0 > 0.0) || !(r_hi > r0)) throw DomainError("annulus_envelope: need 0 < r0 < r_hi");
  std::vector<AnnulusSup> out;
  for (double lower = r0; lower < r_hi; lower *= 2.0) {
    const double width = lower;
    const int samples = std::max(options.min_samples,
                                 static_cast<int>(std::ceil(width / options.max_spacing)));
    AnnulusSup a{lower, 0.0, lower};
    for (int i = 0; i < samples; ++i) {
      const double r = lower + width * i / samples;
      const double v = std::abs(g(r));
      if (v > a.sup) {
        a.sup = v;
        a.argmax = r;
      }
    }
    out.push_back(a);
  }
  return out;
}

FitResult fit_envelope(std::span<const AnnulusSup> annuli) {
  std::vector<double> xs, ys;
  for (const auto& a : annuli) {
    xs.push_back(a.lower);
    ys.push_back(a.sup);
  }
  return fit_loglog(xs, ys);
}

}  // namespace decaylab
