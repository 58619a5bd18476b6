#include "decaylab/fbi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "decaylab/errors.hpp"
#include "decaylab/quad_core.hpp"

namespace decaylab {

namespace {

constexpr double kPi = std::numbers::pi;

void check_dims(std::span<const double> x, std::span<const double> xi) {
  if (x.size() != xi.size()) throw DomainError("x and xi must have the same dimension");
  if (x.empty()) throw DomainError("empty point");
}

}  // namespace

double japanese_bracket(std::span<const double> xi) {
  double s = 1.0;
  for (double v : xi) s += v * v;
  return std::sqrt(s);
}

Complex gaussian_moment_integral(double a, double b, int power) {
  if (!(b > 0.0)) throw DomainError("gaussian_moment_integral: b must be positive");
  const double g = std::sqrt(kPi / b) * std::exp(-a * a / (4.0 * b));
  if (power == 0) return g;
  if (power == 1) return Complex(0.0, a / (2.0 * b)) * g;
  throw DomainError("gaussian_moment_integral: power must be 0 or 1");
}

Complex alpha_form(std::span<const double> x, std::span<const double> xi) {
  check_dims(x, xi);
  const auto d = static_cast<Eigen::Index>(x.size());
  const double b = japanese_bracket(xi);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(d, d);
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index c = 0; c < d; ++c)
      m(r, c) += Complex(0.0, x[static_cast<std::size_t>(r)] * xi[static_cast<std::size_t>(c)] / b);
  return m.determinant();
}

Complex fbi_constant(std::span<const double> x, std::span<const double> xi) {
  check_dims(x, xi);
  const double b = japanese_bracket(xi);
  const std::size_t d = x.size();
  // Per coordinate, with y centered at x:
  //   e0 = int exp(i(x-y)a - b(x-y)^2) dy
  //   e1 = int (x-y) exp(i(x-y)a - b(x-y)^2) dy
  std::vector<Complex> e0(d), e1(d);
  for (std::size_t k = 0; k < d; ++k) {
    const double a = xi[k];
    const Complex phase_in = std::polar(1.0, x[k] * a);
    const Complex phase_out = std::polar(1.0, -x[k] * a);
    const Complex m0 = phase_out * gaussian_moment_integral(-a, b, 0);
    const Complex m1 = phase_out * (x[k] * gaussian_moment_integral(-a, b, 0) +
                                    gaussian_moment_integral(-a, b, 1));
    e0[k] = phase_in * m0;
    e1[k] = phase_in * (x[k] * m0 - m1);
  }
  Complex prod = 1.0;
  for (const auto& v : e0) prod *= v;
  Complex total = prod;
  for (std::size_t k = 0; k < d; ++k) {
    Complex term = Complex(0.0, xi[k] / b) * e1[k];
    for (std::size_t l = 0; l < d; ++l)
      if (l != k) term *= e0[l];
    total += term;
  }
  return total;
}

Complex fbi_numeric(const PointFn& f, std::span<const double> x, std::span<const double> xi,
                    const FbiQuadrature& options) {
  check_dims(x, xi);
  const std::size_t d = x.size();
  if (d > 2) throw UnsupportedDimension(static_cast<int>(d));
  const double b = japanese_bracket(xi);
  double xi_norm = 0.0;
  for (double v : xi) xi_norm = std::max(xi_norm, std::abs(v));
  const auto tail = [&](double t) {
    return std::sqrt(kPi / b) * std::erfc(std::sqrt(b) * t) * (1.0 + t * xi_norm / b) *
           std::pow(std::sqrt(kPi / b), static_cast<double>(d) - 1.0) * static_cast<double>(d);
  };
  double t = options.truncation;
  if (t == 0.0) {
    t = 1.0;
    while (tail(t) > 0.1 * options.tail_tol) t *= 1.1;
  }
  if (tail(t) > options.tail_tol)
    throw CapacityError("fbi_numeric: truncation " + std::to_string(t) + " leaves tail " +
                        std::to_string(tail(t)));
  const double width = 1.0 / std::max({1.0, xi_norm, std::sqrt(b)});
  const int panels = static_cast<int>(std::ceil(2.0 * t / width));

  std::vector<Grid1D> axes;
  for (std::size_t k = 0; k < d; ++k)
    axes.push_back(composite_gauss_legendre(x[k] - t, x[k] + t, panels, options.order));
  std::vector<double> y(d), diff(d);
  const auto kernel = [&]() {
    double phase = 0.0, r2 = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      diff[k] = x[k] - y[k];
      phase += diff[k] * xi[k];
      r2 += diff[k] * diff[k];
    }
    return std::polar(std::exp(-b * r2), phase) * alpha_form(diff, xi) * f(y);
  };
  Complex sum = 0.0;
  const Grid1D& g0 = axes[0];
  for (std::size_t i = 0; i < g0.nodes.size(); ++i) {
    y[0] = g0.nodes[i];
    if (d == 1) {
      sum += g0.weights[i] * kernel();
      continue;
    }
    const Grid1D& g1 = axes[1];
    Complex inner = 0.0;
    for (std::size_t j = 0; j < g1.nodes.size(); ++j) {
      y[1] = g1.nodes[j];
      inner += g1.weights[j] * kernel();
    }
    sum += g0.weights[i] * inner;
  }
  return sum;
}

void WeightSequence::validate() const {
  if (log_m.empty() || log_m.size() != log_m_prime.size())
    throw SpecError("weight sequences must be nonempty and of equal length");
  for (std::size_t j = 0; j < log_m.size(); ++j) {
    const double log_fact = std::lgamma(static_cast<double>(j) + 1.0);
    const double slack = 1e-12 * (1.0 + log_fact);
    for (const auto* seq : {&log_m, &log_m_prime}) {
      const double v = (*seq)[j];
      if (!std::isfinite(v)) throw SpecError("weight M_" + std::to_string(j) + " is not finite");
      if (v < log_fact - slack) throw SpecError("weight M_" + std::to_string(j) + " is below j!");
      if (j > 0 && v < (*seq)[j - 1] - slack)
        throw SpecError("weight M_" + std::to_string(j) + " decreases");
    }
  }
}

WeightSequence make_weight_sequence(const std::function<double(int)>& log_m, int n) {
  if (n < 2) throw DomainError("weight sequence needs at least two terms");
  WeightSequence w;
  for (int j = 0; j < n; ++j) w.log_m.push_back(log_m(j));
  w.log_m_prime = w.log_m;
  w.validate();
  return w;
}

WeightSequence factorial_weights(int n) {
  return make_weight_sequence([](int j) { return std::lgamma(j + 1.0); }, n);
}

WeightSequence power_weights(int n) {
  return make_weight_sequence([](int j) { return j == 0 ? 0.0 : j * std::log(j); }, n);
}

WeightSequence gevrey_weights(double s, int n) {
  if (!(s >= 1.0)) throw DomainError("gevrey_weights: s must be >= 1");
  return make_weight_sequence([s](int j) { return s * std::lgamma(j + 1.0); }, n);
}

AssociatedValue associated_function(const WeightSequence& m, double t, int p_max) {
  if (!(t > 0.0)) throw DomainError("associated_function: t must be positive");
  if (p_max < 1 || static_cast<std::size_t>(p_max) >= m.size())
    throw DomainError("associated_function: p_max must lie in [1, " + std::to_string(m.size() - 1) + "]");
  const double lt = std::log(t);
  AssociatedValue best{-std::numeric_limits<double>::infinity(), 1};
  for (int p = 1; p <= p_max; ++p) {
    const double v = p * lt - m.log_m[static_cast<std::size_t>(p)];
    if (v > best.value) best = {v, p};
  }
  if (best.argmax == p_max)
    throw CapacityError("associated_function: maximizer reached p_max=" + std::to_string(p_max));
  return best;
}

}  // namespace decaylab
