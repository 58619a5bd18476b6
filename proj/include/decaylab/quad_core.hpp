#pragma once

// Shared numerical backend: Gauss-Legendre rules, sphere quadrature, radial
// L^q integrals, central finite differences and log-log regression.
//
// Everything here is pure and reentrant.

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace decaylab {

using ScalarFn = std::function<double(double)>;

/// Nodes and weights of a one-dimensional rule.
struct Grid1D {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }
  /// Throws SpecError unless nodes increase strictly, weights are positive
  /// and there are at least two nodes.
  void validate() const;
};

/// n-point Gauss-Legendre rule mapped to [a, b].
Grid1D gauss_legendre(int n, double a = -1.0, double b = 1.0);

/// `panels` equal Gauss-Legendre panels of `order` nodes each on [a, b].
Grid1D composite_gauss_legendre(double a, double b, int panels, int order = 16);

/// Integral of f over [a, b] with `panels` Gauss-Legendre panels.
double integrate_panels(const ScalarFn& f, double a, double b, int panels, int order = 16);

/// Surface area of S^{d-1}, 2 pi^{d/2} / Gamma(d/2). d = 1 gives 2.
double surface_area(int d);

/// Product quadrature on the unit sphere S^{d-1}, d in {2, 3}.
struct SphereQuadrature {
  int dimension = 0;
  std::vector<double> coords;  // point i occupies coords[i*d .. i*d + d)
  std::vector<double> weights;

  std::size_t size() const noexcept { return weights.size(); }
  std::span<const double> point(std::size_t i) const {
    return {coords.data() + i * static_cast<std::size_t>(dimension),
            static_cast<std::size_t>(dimension)};
  }
  double total_weight() const;
};

/// d = 2: `resolution` equispaced angles (trapezoid rule).
/// d = 3: Gauss-Legendre in cos(theta) with `resolution` nodes times a
/// trapezoid rule with 2*resolution azimuths.
/// Throws UnsupportedDimension for other d and DomainError for resolution < 8.
SphereQuadrature sphere_rule(int d, int resolution);

/// Sum of w_i f(y_i) over a sphere rule.
template <class F>
auto integrate_sphere(const SphereQuadrature& rule, F&& f) {
  using R = decltype(f(rule.point(0)));
  R acc{};
  for (std::size_t i = 0; i < rule.size(); ++i) acc += rule.weights[i] * f(rule.point(i));
  return acc;
}

struct RadialIntegralOptions {
  double rel_tol = 1e-9;
  int order = 16;
  /// Initial panel count; 0 picks one panel per unit length (at least 8).
  int initial_panels = 0;
  int max_doublings = 10;
};

/// |S^{d-1}| * integral over [r_lo, r_hi] of |f(r)|^q r^{d-1} dr.
///
/// Panel counts are doubled until two successive estimates agree to
/// `rel_tol`. Throws EvaluationError (carrying the radius) if f returns a
/// non-finite value.
double integrate_radial_shell(const ScalarFn& f, int d, double q, double r_lo, double r_hi,
                              const RadialIntegralOptions& options = {});

/// Truncated L^q integral of the radial function x -> f(|x|) over B(0, r_max).
double integrate_radial(const ScalarFn& f, int d, double q, double r_max,
                        const RadialIntegralOptions& options = {});

struct FiniteDiffOptions {
  /// Base step; values <= 0 select default_fd_step(n, r).
  double h = 0.0;
  /// Number of Richardson extrapolation levels applied to the O(h^2) stencil.
  int richardson_levels = 2;
  double domain_lo = -std::numeric_limits<double>::infinity();
  double domain_hi = std::numeric_limits<double>::infinity();
};

/// max(0.2, 0.09 n) * max(1, 0.02 |r|).
double default_fd_step(int n, double r);

/// Central-difference estimate of f^{(n)}(r), n <= 10.
///
/// The basic stencil sum_i (-1)^i C(n,i) f(r + (n/2 - i) h) / h^n has O(h^2)
/// error; each Richardson level halves h and removes one even power.
/// Throws DomainError when the widest stencil leaves [domain_lo, domain_hi].
double finite_diff(const ScalarFn& f, int n, double r, const FiniteDiffOptions& options = {});

/// Half-open index range [begin, end).
struct IndexWindow {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const noexcept { return end > begin ? end - begin : 0; }
};

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double slope_stderr = 0.0;
  IndexWindow window;
};

/// Least-squares line through (log x_i, log y_i) for i in the window.
/// Throws DomainError naming the first nonpositive index, or if the window
/// has fewer than three points. A perfectly flat series reports r^2 = 1.
FitResult fit_loglog(std::span<const double> xs, std::span<const double> ys, IndexWindow window);
FitResult fit_loglog(std::span<const double> xs, std::span<const double> ys);

/// Ordinary least-squares line y = slope * x + intercept.
FitResult fit_linear(std::span<const double> xs, std::span<const double> ys);

/// Supremum of |g| over one dyadic annulus [lower, 2 lower).
struct AnnulusSup {
  double lower = 0.0;
  double sup = 0.0;
  double argmax = 0.0;
};

struct EnvelopeOptions {
  int min_samples = 64;
  /// Largest allowed gap between consecutive samples.
  double max_spacing = 0.25;
};

/// Sampled sup of |g| over the annuli [r0 2^j, r0 2^{j+1}), j = 0, 1, ...,
/// until the annulus lower edge reaches r_hi.
std::vector<AnnulusSup> annulus_envelope(const ScalarFn& g, double r0, double r_hi,
                                         const EnvelopeOptions& options = {});

/// Log-log fit of annulus sups against annulus lower edges.
FitResult fit_envelope(std::span<const AnnulusSup> annuli);

}  // namespace decaylab
