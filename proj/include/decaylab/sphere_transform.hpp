#pragma once

// Fourier transform of the surface measure on S^{d-1}, its L^q threshold,
// and the growth of its derivative norms.

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "decaylab/bessel.hpp"
#include "decaylab/quad_core.hpp"

namespace decaylab {

/// Radial function r -> value(r) on R^d.
struct RadialProfile {
  int dimension = 2;
  ScalarFn evaluator;
  std::string label;

  double operator()(double r) const { return evaluator(r); }
};

/// Bessel order (d-2)/2 attached to dimension d.
inline double sphere_order(int d) { return 0.5 * (d - 2); }

/// Closed form 2 pi^{d/2} J_nu(rho) / rho^nu with nu = (d-2)/2, extended
/// continuously to rho = 0.
double sigma_hat(int d, double rho);

/// The true transform int e^{-i x.xi} dsigma(x) = (2 pi)^{d/2} J_nu(rho) / rho^nu.
double sigma_hat_exact(int d, double rho);

/// Direct quadrature of int_{S^{d-1}} e^{-i x.xi} dsigma(x), d in {2, 3}.
std::complex<double> sigma_hat_quadrature(std::span<const double> xi, int resolution = 96);

/// Ratio sigma_hat_quadrature / sigma_hat at xi = 0.
double measured_normalization(int d, int resolution = 96);

RadialProfile sigma_hat_profile(int d);

enum class LqClass { Convergent, Divergent, Undecided };
std::string to_string(LqClass c);

struct LqScanRow {
  double q = 0.0;
  LqClass classification = LqClass::Undecided;
  /// Fitted exponent g in I(R_{j+1}) - I(R_j) ~ R^g.
  double growth_exponent = 0.0;
  /// (d-1)(1 - q/2) + 1.
  double predicted_exponent = 0.0;
  double r_squared = 0.0;
  bool logarithmic = false;
  /// Extrapolated limit of the truncated integrals (convergent rows).
  double limit = 0.0;
  std::vector<double> radii;
  std::vector<double> integrals;
};

struct LqScanOptions {
  /// Truncation radii before snapping; at least three, increasing.
  std::vector<double> r_max_grid = {50, 100, 200, 400, 800, 1600, 3200};
  double cauchy_tol = 1e-3;
  double flat_slope = 0.1;
  double min_r_squared = 0.9;
  int order = 20;
  int threads = 1;
};

/// Truncated L^q integrals of sigma_hat over B(0, R) for each R in the grid
/// (each snapped to the nearest asymptotic zero of the integrand), with a
/// classification per q:
///   growth > flat_slope with r^2 >= min_r_squared   -> Divergent
///   |growth| <= flat_slope and flat increments     -> Divergent (logarithmic)
///   growth < -flat_slope, r^2 ok, and the last three power-tail
///   extrapolations agree to cauchy_tol              -> Convergent
///   anything else                                  -> Undecided
std::vector<LqScanRow> lq_threshold_scan(int d, std::span<const double> q_grid,
                                         const LqScanOptions& options = {});

/// Threshold 2d/(d-1).
double lq_threshold(int d);

/// Limit of I(R) from three values assuming I(R) = E - c R^g with g < 0.
/// Returns NaN if no g in (-6, 0) fits.
double power_tail_extrapolate(std::span<const double> radii, std::span<const double> values);

struct GevreyFit {
  double q = 0.0;
  std::vector<double> norms;
  /// log norm_k ~ log C + k log A + s k log k, fitted on k >= first_k.
  double C = 0.0;
  double A = 0.0;
  double s = 0.0;
  int first_k = 3;
  std::vector<double> residuals;
  /// (norm_k / k^k)^{1/k} for k >= 1 (entry 0 unused).
  std::vector<double> ratios;
};

/// Fits (C, A, s) to a norm sequence over k >= first_k. A negative s is
/// clamped to 0 and the remaining two parameters refitted.
GevreyFit fit_gevrey(std::span<const double> norms, int first_k = 3);

struct GevreyOptions {
  std::vector<double> r_max_grid = {100, 200, 400, 800};
  int order = 20;
  int threads = 1;
};

/// ||D^k sigma_hat||_{L^q(R^d)} for k = 0..k_max as radial norms of the k-th
/// radial derivative of f_{(d-2)/2}, scaled by 2 pi^{d/2}, and the fit.
/// Throws DomainError when q <= 2d/(d-1).
GevreyFit gevrey_norm_sequence(int d, double q, int k_max, const CoeffTable& table,
                               const GevreyOptions& options = {});

}  // namespace decaylab
