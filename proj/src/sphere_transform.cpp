#include "decaylab/sphere_transform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>
#include <boost/math/tools/roots.hpp>

#include "decaylab/errors.hpp"
#include "decaylab/parallel.hpp"

namespace decaylab {

namespace {

constexpr double kPi = std::numbers::pi;

double bessel_form_constant(int d) { return 2.0 * std::pow(kPi, 0.5 * d); }

// Asymptotic zeros of the k-th derivative of f_m lie near
// phase + n pi with phase = pi m/2 + 3 pi/4 - k pi/2.
double zero_phase(double m, int k) {
  const double ph = 0.5 * kPi * m + 0.75 * kPi - 0.5 * kPi * k;
  return ph - kPi * std::floor(ph / kPi);
}

double snap_to_zero(double r, double phase) {
  return phase + kPi * std::round((r - phase) / kPi);
}

// Cumulative integral of g from 0 to each radius in `targets` (already on
// the half-lobe lattice phase + i pi/2).
std::vector<double> cumulative_on_lobes(const ScalarFn& g, double phase,
                                        std::span<const double> targets, int order) {
  const double step = 0.5 * kPi;
  double start = phase;
  while (start < 2.0) start += step;
  std::vector<double> out(targets.size(), 0.0);
  double acc = integrate_panels(g, 0.0, start, 8, order);
  double lo = start;
  std::size_t t = 0;
  while (t < targets.size() && targets[t] <= lo + 1e-9) out[t++] = acc;
  while (t < targets.size()) {
    const double hi = lo + step;
    acc += integrate_panels(g, lo, hi, 1, order);
    lo = hi;
    while (t < targets.size() && targets[t] <= lo + 1e-9) out[t++] = acc;
  }
  return out;
}

std::vector<double> snapped_radii(std::span<const double> grid, double phase) {
  if (grid.size() < 3) throw DomainError("need at least three truncation radii");
  std::vector<double> radii;
  for (double r : grid) {
    if (!radii.empty() && !(r > radii.back())) throw DomainError("truncation radii must increase");
    radii.push_back(snap_to_zero(r, phase));
  }
  for (std::size_t i = 1; i < radii.size(); ++i)
    if (!(radii[i] > radii[i - 1])) throw DomainError("truncation radii collapse after snapping");
  return radii;
}

}  // namespace

double sigma_hat(int d, double rho) {
  if (d < 2) throw UnsupportedDimension(d);
  return bessel_form_constant(d) * f_eval(sphere_order(d), std::abs(rho));
}

double sigma_hat_exact(int d, double rho) {
  if (d < 2) throw UnsupportedDimension(d);
  return std::pow(2.0 * kPi, 0.5 * d) * f_eval(sphere_order(d), std::abs(rho));
}

std::complex<double> sigma_hat_quadrature(std::span<const double> xi, int resolution) {
  const int d = static_cast<int>(xi.size());
  const SphereQuadrature rule = sphere_rule(d, resolution);
  return integrate_sphere(rule, [&](std::span<const double> y) {
    double dot = 0.0;
    for (int i = 0; i < d; ++i) dot += y[static_cast<std::size_t>(i)] * xi[static_cast<std::size_t>(i)];
    return std::complex<double>(std::cos(dot), -std::sin(dot));
  });
}

double measured_normalization(int d, int resolution) {
  const std::vector<double> zero(static_cast<std::size_t>(d), 0.0);
  return sigma_hat_quadrature(zero, resolution).real() / sigma_hat(d, 0.0);
}

RadialProfile sigma_hat_profile(int d) {
  return {d, [d](double r) { return sigma_hat(d, r); }, "sigma_hat_d" + std::to_string(d)};
}

std::string to_string(LqClass c) {
  switch (c) {
    case LqClass::Convergent: return "CONVERGENT";
    case LqClass::Divergent: return "DIVERGENT";
    case LqClass::Undecided: return "UNDECIDED";
  }
  return "UNDECIDED";
}

double lq_threshold(int d) {
  if (d < 2) throw UnsupportedDimension(d);
  return 2.0 * d / (d - 1.0);
}

double power_tail_extrapolate(std::span<const double> radii, std::span<const double> values) {
  if (radii.size() != 3 || values.size() != 3) throw DomainError("power_tail_extrapolate needs three points");
  const double ra = radii[0], rb = radii[1], rc = radii[2];
  const double ia = values[0], ib = values[1], ic = values[2];
  if (ic == ib) return ic;
  const double t = (ib - ia) / (ic - ib);
  const auto h = [&](double g) {
    return (std::pow(ra, g) - std::pow(rb, g)) / (std::pow(rb, g) - std::pow(rc, g)) - t;
  };
  double lo = -6.0, hi = -1e-6;
  const double hlo = h(lo), hhi = h(hi);
  if (!std::isfinite(hlo) || !std::isfinite(hhi) || hlo * hhi > 0.0) return std::nan("");
  std::uintmax_t iters = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(
      h, lo, hi, hlo, hhi, boost::math::tools::eps_tolerance<double>(50), iters);
  const double g = 0.5 * (a + b);
  const double c = (ib - ia) / (std::pow(ra, g) - std::pow(rb, g));
  return ic + c * std::pow(rc, g);
}

std::vector<LqScanRow> lq_threshold_scan(int d, std::span<const double> q_grid,
                                         const LqScanOptions& options) {
  if (d < 2) throw UnsupportedDimension(d);
  const double m = sphere_order(d);
  const double phase = zero_phase(m, 0);
  const std::vector<double> radii = snapped_radii(options.r_max_grid, phase);
  const double area = surface_area(d);
  const double c = bessel_form_constant(d);

  std::vector<LqScanRow> rows(q_grid.size());
  parallel_for(
      q_grid.size(),
      [&](std::size_t qi) {
        const double q = q_grid[qi];
        if (!(q >= 1.0)) throw DomainError("lq_threshold_scan: q must be >= 1");
        const ScalarFn g = [&](double r) {
          const double v = c * f_eval(m, r);
          if (!std::isfinite(v)) throw EvaluationError("non-finite sigma_hat", r);
          return std::pow(std::abs(v), q) * std::pow(r, d - 1);
        };
        LqScanRow row;
        row.q = q;
        row.predicted_exponent = (d - 1) * (1.0 - 0.5 * q) + 1.0;
        row.radii = radii;
        row.integrals = cumulative_on_lobes(g, phase, radii, options.order);
        for (double& v : row.integrals) v *= area;

        std::vector<double> shell_r, inc;
        for (std::size_t j = 1; j < radii.size(); ++j) {
          shell_r.push_back(radii[j]);
          inc.push_back(row.integrals[j] - row.integrals[j - 1]);
        }
        const FitResult fit = fit_loglog(shell_r, inc);
        row.growth_exponent = fit.slope;
        row.r_squared = fit.r_squared;
        const auto [mn, mx] = std::minmax_element(inc.begin(), inc.end());

        std::vector<double> extrap;
        for (std::size_t j = 0; j + 2 < radii.size(); ++j)
          extrap.push_back(power_tail_extrapolate(std::span(radii).subspan(j, 3),
                                                  std::span(row.integrals).subspan(j, 3)));

        if (fit.slope > options.flat_slope && fit.r_squared >= options.min_r_squared) {
          row.classification = LqClass::Divergent;
        } else if (std::abs(fit.slope) <= options.flat_slope && *mn >= 0.5 * *mx) {
          row.classification = LqClass::Divergent;
          row.logarithmic = true;
        } else if (fit.slope < -options.flat_slope && fit.r_squared >= options.min_r_squared &&
                   extrap.size() >= 3) {
          const auto tail = std::span(extrap).last(3);
          const bool finite = std::all_of(tail.begin(), tail.end(), [](double v) { return std::isfinite(v); });
          if (finite) {
            const auto [lo, hi] = std::minmax_element(tail.begin(), tail.end());
            row.limit = tail.back();
            if (*hi - *lo <= options.cauchy_tol * std::abs(row.limit))
              row.classification = LqClass::Convergent;
          }
        }
        rows[qi] = std::move(row);
      },
      options.threads);
  return rows;
}

GevreyFit fit_gevrey(std::span<const double> norms, int first_k) {
  const int n = static_cast<int>(norms.size());
  if (n - first_k < 3) throw CapacityError("fit_gevrey needs at least three norms past first_k");
  GevreyFit fit;
  fit.norms.assign(norms.begin(), norms.end());
  fit.first_k = first_k;
  const int rows = n - first_k;
  Eigen::MatrixXd X(rows, 3);
  Eigen::VectorXd y(rows);
  for (int i = 0; i < rows; ++i) {
    const double k = first_k + i;
    if (!(norms[static_cast<std::size_t>(k)] > 0.0)) throw DomainError("fit_gevrey: nonpositive norm");
    X(i, 0) = 1.0;
    X(i, 1) = k;
    X(i, 2) = k * std::log(k);
    y(i) = std::log(norms[static_cast<std::size_t>(k)]);
  }
  Eigen::VectorXd coef = X.colPivHouseholderQr().solve(y);
  if (coef(2) < 0.0) {
    const Eigen::VectorXd two = X.leftCols(2).colPivHouseholderQr().solve(y);
    coef = Eigen::Vector3d(two(0), two(1), 0.0);
  }
  fit.C = std::exp(coef(0));
  fit.A = std::exp(coef(1));
  fit.s = coef(2);
  const Eigen::VectorXd res = y - X * coef;
  fit.residuals.assign(res.data(), res.data() + res.size());
  fit.ratios.assign(static_cast<std::size_t>(n), 0.0);
  for (int k = 1; k < n; ++k)
    fit.ratios[static_cast<std::size_t>(k)] =
        std::exp((std::log(norms[static_cast<std::size_t>(k)]) - k * std::log(k)) / k);
  return fit;
}

GevreyFit gevrey_norm_sequence(int d, double q, int k_max, const CoeffTable& table,
                               const GevreyOptions& options) {
  if (d < 2) throw UnsupportedDimension(d);
  const double threshold = lq_threshold(d);
  if (!(q > threshold))
    throw DomainError("derivative norms of sigma_hat diverge for q=" + std::to_string(q) +
                      " <= threshold " + std::to_string(threshold));
  if (k_max < 5 || k_max > 12) throw DomainError("gevrey_norm_sequence: k_max must lie in [5, 12]");
  if (2 * table.k_max() + 1 < k_max) throw CapacityError("coefficient table too small for k_max");

  const double m = sphere_order(d);
  const double c = bessel_form_constant(d);
  const double area = surface_area(d);
  std::vector<double> norms(static_cast<std::size_t>(k_max) + 1);
  parallel_for(
      norms.size(),
      [&](std::size_t ki) {
        const int k = static_cast<int>(ki);
        const auto terms = derivative_expansion(k, table);
        const double phase = zero_phase(m, k);
        const std::vector<double> radii = snapped_radii(options.r_max_grid, phase);
        const ScalarFn g = [&](double r) {
          const double v = c * f_deriv(m, terms, r);
          if (!std::isfinite(v)) throw EvaluationError("non-finite derivative", r);
          return std::pow(std::abs(v), q) * std::pow(r, d - 1);
        };
        std::vector<double> cum = cumulative_on_lobes(g, phase, radii, options.order);
        for (double& v : cum) v *= area;
        double limit = power_tail_extrapolate(std::span(radii).last(3), std::span(cum).last(3));
        if (!std::isfinite(limit)) limit = cum.back();
        norms[ki] = std::pow(limit, 1.0 / q);
      },
      options.threads);
  GevreyFit fit = fit_gevrey(norms, 3);
  fit.q = q;
  return fit;
}

}  // namespace decaylab
