#pragma once

// FBI transform with the kernel exp(i(x-y).xi - <xi>|x-y|^2) alpha(x-y, xi),
// Gaussian moment integrals, weight sequences and their associated function.

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace decaylab {

using Complex = std::complex<double>;

/// <xi> = sqrt(1 + xi.xi).
double japanese_bracket(std::span<const double> xi);

/// int_R y^power exp(i y a - b y^2) dy for power in {0, 1}, b > 0.
Complex gaussian_moment_integral(double a, double b, int power);

/// det(I + i x (xi / <xi>)^T) = 1 + i x.xi / <xi>.
Complex alpha_form(std::span<const double> x, std::span<const double> xi);

/// FBI transform of the constant 1 at (x, xi), assembled per coordinate from
/// Gaussian moments centered at x. Equals
/// (pi/b)^{d/2} exp(-|xi|^2 / 4b) (1 - |xi|^2 / (2 b^2)), b = <xi>.
Complex fbi_constant(std::span<const double> x, std::span<const double> xi);

using PointFn = std::function<Complex(std::span<const double>)>;

struct FbiQuadrature {
  /// Half-width of the integration box around x; 0 picks the smallest width
  /// meeting the tail bound.
  double truncation = 0.0;
  int order = 16;
  double tail_tol = 1e-8;
};

/// Tensor Gauss-Legendre value of the FBI pairing for d in {1, 2}, with f
/// assumed bounded by 1 in modulus. Throws CapacityError when the Gaussian
/// tail beyond the box exceeds tail_tol.
Complex fbi_numeric(const PointFn& f, std::span<const double> x, std::span<const double> xi,
                    const FbiQuadrature& options = {});

/// Nondecreasing sequences M_j, M'_j (j >= 0) with j! <= min(M_j, M'_j),
/// stored as logarithms.
struct WeightSequence {
  std::vector<double> log_m;
  std::vector<double> log_m_prime;

  std::size_t size() const noexcept { return log_m.size(); }
  /// Throws SpecError naming the first offending index.
  void validate() const;
};

/// M_j = M'_j = exp(log_m(j)) for j = 0..n-1, validated.
WeightSequence make_weight_sequence(const std::function<double(int)>& log_m, int n);
/// M_j = j!.
WeightSequence factorial_weights(int n);
/// M_j = j^j (0^0 = 1).
WeightSequence power_weights(int n);
/// M_j = (j!)^s, s >= 1.
WeightSequence gevrey_weights(double s, int n);

struct AssociatedValue {
  double value = 0.0;
  int argmax = 1;
};

/// sup over integers 1 <= p <= p_max of p log t - log M_p. Throws
/// CapacityError when the maximizer is p_max itself.
AssociatedValue associated_function(const WeightSequence& m, double t, int p_max);

}  // namespace decaylab
