#pragma once

// Bessel functions of real order, the quotients f_m(r) = J_m(r) / r^m, and
// the exact integer tables that express derivatives of f_m as finite sums
// of shifted quotients:
//
//   f_m^{(2k)}(r)   = sum_j (-1)^{j+k}   a_{jk} r^{2j}   f_{m+k+j}(r)
//   f_m^{(2k+1)}(r) = sum_j (-1)^{j+k+1} b_{jk} r^{2j+1} f_{m+k+j+1}(r)

#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "decaylab/quad_core.hpp"

namespace decaylab {

using BigInt = boost::multiprecision::cpp_int;

/// Radius up to which bessel_j and f_eval sum the ascending series.
inline constexpr double kSeriesSwitch = 12.0;
/// Largest radius accepted by bessel_j_series.
inline constexpr double kSeriesLimit = 25.0;

/// J_m(r) for real m >= 0 and r >= 0. Ascending series for r <= kSeriesSwitch,
/// Boost's uniform evaluation beyond.
double bessel_j(double m, double r);

/// Ascending series with compensated summation. Throws CapacityError for
/// r > kSeriesLimit, where cancellation destroys the result; use
/// bessel_j_asymptotic there.
double bessel_j_series(double m, double r);

/// Integer-order J_n(x) in plain double precision, for inner loops.
double bessel_j_fast(int n, double x);

/// Two-term Hankel form sqrt(2/(pi r)) [cos w - (4m^2-1)/(8r) sin w],
/// w = r - m pi/2 - pi/4. Requires r > 0.
double bessel_j_asymptotic(double m, double r);

/// Leading term sqrt(2/(pi r)) cos(r - m pi/2 - pi/4).
double bessel_j_leading(double m, double r);

/// f_m(r) = J_m(r) / r^m, with f_m(0) = 1 / (2^m Gamma(m+1)).
double f_eval(double m, double r);

/// Exact triangular tables a_{jk}, b_{jk}, 0 <= j <= k <= k_max.
class CoeffTable {
 public:
  explicit CoeffTable(int k_max);

  int k_max() const noexcept { return k_max_; }
  const BigInt& a(int j, int k) const;
  const BigInt& b(int j, int k) const;

 private:
  int k_max_;
  std::vector<std::vector<BigInt>> a_;  // a_[k][j]
  std::vector<std::vector<BigInt>> b_;
};

inline constexpr int kMaxTableOrder = 60;

/// Builds the tables from the recurrences with a_00 = b_00 = 1.
/// Throws DomainError for k_max outside [0, kMaxTableOrder].
CoeffTable coeff_tables(int k_max);

/// One summand sign * coefficient * r^power * f_{m + shift}(r).
struct DerivTerm {
  int sign = 1;
  BigInt coefficient;
  int power = 0;
  int shift = 0;
};

/// Terms of f_m^{(n)}; floor(n/2) + 1 of them.
/// Throws CapacityError when n > 2 k_max + 1.
std::vector<DerivTerm> derivative_expansion(int n, const CoeffTable& table);

/// f_m^{(n)}(r) evaluated from the expansion.
double f_deriv(double m, int n, double r, const CoeffTable& table);

/// Same, from a precomputed expansion.
double f_deriv(double m, std::span<const DerivTerm> terms, double r);

/// Linear fit of log(max_j a_{jk} / k!) against k over 8 <= k <= k_max.
/// exp(slope) estimates the geometric constant A. Requires k_max >= 10.
FitResult coeff_growth_check(const CoeffTable& table);

/// (max_j a_{jk} / k!)^{1/k} for k >= 1.
double coeff_growth_ratio(const CoeffTable& table, int k);

/// max_j a_{jk} as a double.
double coeff_column_max(const CoeffTable& table, int k);

/// One term coefficient * xi^monomial * f_{m+shift}(|xi|) of a partial
/// derivative of the radial function xi -> f_m(|xi|).
struct RadialPartialTerm {
  long long coefficient = 0;
  std::vector<int> monomial;
  int shift = 0;
};

/// Expansion of d^alpha [f_m(|xi|)] using d_i f_m(|xi|) = -xi_i f_{m+1}(|xi|).
std::vector<RadialPartialTerm> radial_partial_expansion(std::span<const int> alpha);

/// Evaluates a radial partial expansion at xi.
double radial_partial_eval(double m, std::span<const RadialPartialTerm> terms,
                           std::span<const double> xi);

}  // namespace decaylab
