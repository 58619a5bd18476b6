#pragma once

// Truncated multivariate Taylor jets: f(x0 + h) = sum_g c_g h^g over
// multi-indices |g| <= K in d <= 3 variables, with complex coefficients.

#include <complex>
#include <span>
#include <vector>

namespace decaylab {

class JetSpace {
 public:
  JetSpace(int dimension, int order);

  int dimension() const noexcept { return d_; }
  int order() const noexcept { return k_; }
  std::size_t size() const noexcept { return exps_.size(); }
  const std::vector<int>& exponent(std::size_t i) const { return exps_[i]; }
  /// Position of the multi-index g; throws DomainError when |g| > order.
  std::size_t index(std::span<const int> g) const;
  /// g! for the i-th multi-index.
  double factorial(std::size_t i) const { return fact_[i]; }

  struct Product {
    std::size_t a, b, out;
  };
  const std::vector<Product>& products() const noexcept { return products_; }

 private:
  int d_;
  int k_;
  std::vector<std::vector<int>> exps_;
  std::vector<double> fact_;
  std::vector<std::ptrdiff_t> lookup_;
  std::vector<Product> products_;
};

using Complex = std::complex<double>;

struct Jet {
  std::vector<Complex> c;

  Complex value() const { return c.front(); }
  bool is_zero() const;
  /// d^g f(x0) = g! c_g.
  Complex derivative(const JetSpace& space, std::span<const int> g) const;
};

Jet jet_constant(const JetSpace& space, Complex v);
/// The coordinate x_i expanded at x0_i.
Jet jet_variable(const JetSpace& space, int i, double x0i);
Jet operator+(const Jet& a, const Jet& b);
Jet operator-(const Jet& a, const Jet& b);
Jet operator*(Complex s, const Jet& a);
Jet operator+(Complex s, const Jet& a);
Jet jet_mul(const JetSpace& space, const Jet& a, const Jet& b);
/// f(a) from the Taylor coefficients coeffs[n] = f^{(n)}(a0) / n!.
Jet jet_compose(const JetSpace& space, const Jet& a, std::span<const Complex> coeffs);
/// exp(a); the zero jet when Re a0 < -700.
Jet jet_exp(const JetSpace& space, const Jet& a);
Jet jet_reciprocal(const JetSpace& space, const Jet& a);
/// sqrt(a) for real positive a0.
Jet jet_sqrt(const JetSpace& space, const Jet& a);
/// x^beta at x0.
Jet jet_monomial(const JetSpace& space, std::span<const double> x0, std::span<const int> beta);

}  // namespace decaylab
