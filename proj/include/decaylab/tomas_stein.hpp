#pragma once

// Dyadic restriction machinery for the sphere: a smooth radial partition of
// unity, the pieces T_k of convolution with D^alpha sigma_hat, their
// L^1 -> L^inf and L^2 -> L^2 bounds, interpolation exponents, restriction
// thresholds, and an empirical restriction ratio for trial functions.

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <boost/rational.hpp>

namespace decaylab {

struct MultiIndex {
  std::vector<int> entries;

  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> e);
  static MultiIndex zero(int d) { return MultiIndex(std::vector<int>(static_cast<std::size_t>(d), 0)); }
  static MultiIndex unit(int d, int i);

  int dimension() const noexcept { return static_cast<int>(entries.size()); }
  int order() const noexcept;
  int operator[](std::size_t i) const { return entries[i]; }
  /// Componentwise <=.
  bool contained_in(const MultiIndex& other) const;
  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;
};

std::string to_string(const MultiIndex& a);

/// psi(s) = h(2-s) / (h(2-s) + h(s-1)), h(t) = exp(-1/t) for t > 0:
/// smooth, 1 on [0, 1], 0 on [2, inf).
double plateau(double s);

/// Radial partition phi_0(x) = psi(|x|), phi_k(x) = phi(x / 2^k) with
/// phi(x) = psi(|x|) - psi(2|x|). The members k = 0..k_max sum to
/// psi(|x| / 2^{k_max}).
struct DyadicPartition {
  int dimension = 2;
  int k_max = 2;

  double phi(double r) const;
  double member(int k, double r) const;
  double sum(double r) const;
  /// Closed support radii of member k.
  std::pair<double, double> support(int k) const;
};

/// Requires k_max in [2, 14].
DyadicPartition build_partition(int d, int k_max);

/// Samples of phi_k * d^alpha sigma_hat on a polar grid.
struct DyadicKernel {
  int dimension = 2;
  std::vector<int> alpha;
  int k = 0;
  std::vector<double> points;  // flattened, dimension per point
  std::vector<double> values;
};

struct KernelGrid {
  double radial_step = 0.25;
  /// Directions used when alpha != 0 (d = 2: equispaced angles).
  int angles = 16;
  /// Samples are restricted to |xi| <= max_radius.
  double max_radius = 1e9;
};

DyadicKernel build_kernel(int d, std::span<const int> alpha, int k, const KernelGrid& grid = {});

/// Sup norm of the kernel samples; 0 when the kernel has no samples.
double op_norm_1_inf(const DyadicKernel& kernel);

struct OpNormResult {
  double value = 0.0;
  /// Maximizing point.
  std::vector<double> argmax;
  /// | |argmax| - 1 |.
  double distance_to_sphere = 0.0;
};

/// sup_x |(hat phi_k * x^alpha dsigma)(x)|, evaluated as the Fourier
/// transform of phi_k d^alpha sigma_hat, with x searched over the shell
/// | |x| - 1 | <= 2^{3-k}. `resolution` is the number of search points per
/// unit length in |x| (0 selects 2^{k+3}); below 2^{k+2} the search cannot
/// resolve the 2^{-k} peak and CapacityError is thrown.
/// d = 2 supports every alpha; d = 3 supports alpha = 0.
OpNormResult op_norm_2_2(int d, std::span<const int> alpha, int k, double resolution = 0.0);

/// Same transform at a single point x.
std::complex<double> dyadic_multiplier_transform(int d, std::span<const int> alpha, int k,
                                                 std::span<const double> x);

/// int_{S^{d-1}} (1 + 2^k |e_1 - y|)^{-N} dsigma(y), d in {2, 3}.
double annulus_integral(int d, int k, int N);

enum class ExponentVariant { Stated, Direct };

/// Per-scale exponent e(p) of the interpolated bound 2^{-k e(p)}:
/// Stated: (2(d+1) - p(d+3)) / p
/// Direct: (2(d+1) - p(d+3)) / (2p)
double interpolation_exponent(int d, double p, ExponentVariant variant);

/// 2(d+1)/(d+3).
double restriction_threshold(int d);

/// 2(2 - 2 alpha + beta) / (4(1 - alpha) + beta) for alpha in (0,1),
/// beta in (0, 2 alpha].
double salem_threshold(double alpha, double beta);

using Rational = boost::rational<long long>;
Rational salem_threshold(const Rational& alpha, const Rational& beta);

/// Trial function on R^2 for the restriction ratio.
struct TrialFunction {
  std::string label;
  std::function<std::complex<double>(double, double)> f;
  /// Spatial standard deviations per axis.
  double scale1 = 1.0;
  double scale2 = 1.0;
  /// Center and widths of the Fourier transform per axis.
  double spectral_center1 = 0.0;
  double spectral_center2 = 0.0;
  double spectral_width1 = 1.0;
  double spectral_width2 = 1.0;
};

/// exp(-|x|^2/2) (modulated by e^{i x.eta} when eta != 0).
TrialFunction gaussian_trial(double eta1 = 0.0, double eta2 = 0.0);

/// e^{i x_1} exp(-(delta^2 x_1)^2/2 - (delta x_2)^2/2): a bump whose
/// transform is a delta^2 x delta slab tangent to the circle at e_1.
TrialFunction knapp_trial(double delta);

struct TrialGrid {
  int points_per_axis = 512;
  /// Half-width of the box in spatial standard deviations.
  double box_sigmas = 7.0;
  int min_sphere_nodes = 256;
};

/// ||f_hat||_{L^2(dsigma)} and the samples needed for ||f||_{L^p}.
struct TrialEvaluation {
  std::string label;
  double sphere_l2 = 0.0;
  double cell_area = 0.0;
  std::vector<double> magnitudes;
  int sphere_nodes = 0;

  double lp_norm(double p) const;
  double ratio(double p) const { return sphere_l2 / lp_norm(p); }
};

/// Transforms the trial directly at circle quadrature nodes. Throws
/// CapacityError when the grid aliases the trial's spectrum onto the circle.
TrialEvaluation evaluate_trial(const TrialFunction& trial, const TrialGrid& grid = {});

struct RestrictionResult {
  double p = 0.0;
  std::vector<double> ratios;
  double max_ratio = 0.0;
  std::string argmax;
};

/// max over trials of ||f_hat||_{L^2(dsigma)} / ||f||_{L^p} on the circle (d = 2).
RestrictionResult restriction_empirical(int d, double p, std::span<const TrialFunction> trials,
                                        const TrialGrid& grid = {});

}  // namespace decaylab
