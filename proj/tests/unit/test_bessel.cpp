#include <cmath>
#include <numbers>

#include <boost/math/special_functions/bessel.hpp>
#include <gtest/gtest.h>

#include "decaylab/bessel.hpp"
#include "decaylab/errors.hpp"

using namespace decaylab;

namespace {

BigInt double_factorial(int n) {
  BigInt r = 1;
  for (int i = n; i > 1; i -= 2) r *= i;
  return r;
}

// d^n/dr^n [sqrt(2/pi) sin(r) / r] by the Leibniz rule, which is f_{1/2}^{(n)}.
double half_order_derivative(int n, double r) {
  double s = 0.0;
  double binom = 1.0;
  for (int k = 0; k <= n; ++k) {
    const int rest = n - k;
    const double sin_k = std::sin(r + k * std::numbers::pi / 2.0);
    const double inv = (rest % 2 ? -1.0 : 1.0) * std::tgamma(rest + 1.0) / std::pow(r, rest + 1);
    s += binom * sin_k * inv;
    binom = binom * (n - k) / (k + 1);
  }
  return std::sqrt(2.0 / std::numbers::pi) * s;
}

}  // namespace

TEST(CoeffTable, SmallEntriesFromRecurrences) {
  const CoeffTable t = coeff_tables(4);
  EXPECT_EQ(t.b(0, 1), 3);
  EXPECT_EQ(t.a(0, 2), 3);
  EXPECT_EQ(t.a(1, 2), 6);
  EXPECT_EQ(t.a(2, 2), 1);
  EXPECT_EQ(t.b(1, 2), 10);
}

TEST(CoeffTable, RecurrencesHoldExactly) {
  const CoeffTable t = coeff_tables(30);
  for (int k = 1; k <= 30; ++k) {
    for (int j = 0; j <= k; ++j) {
      const BigInt bj = j <= k - 1 ? t.b(j, k - 1) : BigInt(0);
      const BigInt bjm = j >= 1 ? t.b(j - 1, k - 1) : BigInt(0);
      EXPECT_EQ(t.a(j, k), bj * (2 * j + 1) + bjm) << "a j=" << j << " k=" << k;
      const BigInt aj1 = j + 1 <= k ? t.a(j + 1, k) : BigInt(0);
      EXPECT_EQ(t.b(j, k), 2 * (j + 1) * aj1 + t.a(j, k)) << "b j=" << j << " k=" << k;
    }
  }
}

TEST(CoeffTable, BoundaryColumnsAreDoubleFactorials) {
  const CoeffTable t = coeff_tables(40);
  for (int k = 0; k <= 40; ++k) {
    EXPECT_EQ(t.a(0, k), double_factorial(2 * k - 1)) << k;
    EXPECT_EQ(t.b(0, k), double_factorial(2 * k + 1)) << k;
  }
}

TEST(CoeffTable, RejectsOutOfRangeOrder) {
  EXPECT_THROW(coeff_tables(-1), DomainError);
  EXPECT_THROW(coeff_tables(kMaxTableOrder + 1), DomainError);
}

TEST(BesselJ, AgreesWithBoostAcrossBranches) {
  for (double m : {0.0, 0.5, 1.0, 2.5, 7.0})
    for (double r : {0.0, 0.3, 2.0, 11.9, 12.1, 40.0, 500.0}) {
      const double ref = boost::math::cyl_bessel_j(m, r);
      // The power series loses about two digits to cancellation just below its limit.
      EXPECT_NEAR(bessel_j(m, r), ref, 2e-12 * std::max(1.0, std::abs(ref))) << m << " " << r;
    }
}

TEST(BesselJ, SeriesGuard) { EXPECT_THROW(bessel_j_series(0.0, kSeriesLimit + 1.0), CapacityError); }

TEST(BesselJ, HalfOrderIsElementary) {
  for (double r : {0.5, 3.0, 20.0})
    EXPECT_NEAR(bessel_j(0.5, r), std::sqrt(2.0 / (std::numbers::pi * r)) * std::sin(r), 1e-14);
}

TEST(FEval, ValueAtOriginAndSmallRadius) {
  EXPECT_NEAR(f_eval(0.0, 0.0), 1.0, 1e-15);
  EXPECT_NEAR(f_eval(1.0, 0.0), 0.5, 1e-15);
  EXPECT_NEAR(f_eval(0.5, 0.0), std::sqrt(2.0 / std::numbers::pi), 1e-15);
  EXPECT_NEAR(f_eval(1.0, 1e-9), 0.5, 1e-15);
}

TEST(FDeriv, MatchesLeibnizOracleForHalfOrder) {
  const CoeffTable t = coeff_tables(8);
  for (int n = 0; n <= 8; ++n)
    for (double r : {0.5, 1.0, 2.0, 5.0, 10.0, 30.0}) {
      const double ref = half_order_derivative(n, r);
      EXPECT_NEAR(f_deriv(0.5, n, r, t), ref, 2e-8 * std::max(1e-3, std::abs(ref))) << n << " " << r;
    }
}

TEST(FDeriv, FirstDerivativeIdentity) {
  // f_m' = -r f_{m+1}.
  const CoeffTable t = coeff_tables(2);
  for (double m : {0.0, 1.0, 1.5})
    for (double r : {0.7, 4.0, 25.0}) EXPECT_NEAR(f_deriv(m, 1, r, t), -r * f_eval(m + 1.0, r), 1e-14);
}

TEST(DerivativeExpansion, TermCountAndCapacity) {
  const CoeffTable t = coeff_tables(4);
  for (int n = 0; n <= 9; ++n) EXPECT_EQ(derivative_expansion(n, t).size(), static_cast<std::size_t>(n / 2 + 1));
  EXPECT_THROW(derivative_expansion(10, t), CapacityError);
}

TEST(CoeffGrowth, GeometricRateStabilizes) {
  const CoeffTable t = coeff_tables(40);
  const FitResult f = coeff_growth_check(t);
  EXPECT_GT(f.r_squared, 0.98);
  EXPECT_NEAR(std::exp(f.slope), 2.24, 0.05);
  EXPECT_THROW(coeff_growth_check(coeff_tables(9)), CapacityError);
}

TEST(RadialPartial, MatchesFiniteDifferenceIn2D) {
  const int alpha[2] = {2, 1};
  const auto terms = radial_partial_expansion(alpha);
  const double xi[2] = {0.8, -1.3};
  const double m = 0.0;
  auto g = [m](double a, double b) { return f_eval(m, std::hypot(a, b)); };
  const double h = 1e-3;
  // d^2/dx^2 d/dy by nested central differences.
  auto dy = [&](double a, double b) { return (g(a, b + h) - g(a, b - h)) / (2 * h); };
  const double ref = (dy(xi[0] + h, xi[1]) - 2 * dy(xi[0], xi[1]) + dy(xi[0] - h, xi[1])) / (h * h);
  EXPECT_NEAR(radial_partial_eval(m, terms, xi), ref, 1e-5);
}
