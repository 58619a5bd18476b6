#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "decaylab/errors.hpp"
#include "decaylab/fbi.hpp"
#include "decaylab/quad_core.hpp"

using namespace decaylab;

namespace {

Complex moment_by_quadrature(double a, double b, int power) {
  auto re = [=](double y) { return std::pow(y, power) * std::cos(a * y) * std::exp(-b * y * y); };
  auto im = [=](double y) { return std::pow(y, power) * std::sin(a * y) * std::exp(-b * y * y); };
  const double L = 12.0 / std::sqrt(b);
  return {integrate_panels(re, -L, L, 64), integrate_panels(im, -L, L, 64)};
}

}  // namespace

TEST(GaussianMoment, MatchesQuadrature) {
  for (double a : {0.0, 1.0, -2.5})
    for (double b : {0.5, 1.0, 3.0})
      for (int p : {0, 1})
        EXPECT_NEAR(std::abs(gaussian_moment_integral(a, b, p) - moment_by_quadrature(a, b, p)), 0.0, 1e-12)
            << a << " " << b << " " << p;
}

TEST(GaussianMoment, FirstMomentSign) {
  // a = 2, b = 1: +i sqrt(pi) e^{-1}.
  const Complex v = gaussian_moment_integral(2.0, 1.0, 1);
  EXPECT_NEAR(v.real(), 0.0, 1e-15);
  EXPECT_NEAR(v.imag(), std::sqrt(std::numbers::pi) * std::exp(-1.0), 1e-15);
}

TEST(GaussianMoment, RejectsBadArguments) {
  EXPECT_THROW(gaussian_moment_integral(0.0, 0.0, 0), DomainError);
  EXPECT_THROW(gaussian_moment_integral(0.0, 1.0, 2), DomainError);
}

TEST(AlphaForm, DeterminantIdentity) {
  const double x[2] = {0.5, -1.0}, xi[2] = {2.0, 1.0};
  const double b = std::sqrt(6.0);
  EXPECT_NEAR(std::abs(alpha_form(x, xi) - Complex(1.0, (0.5 * 2.0 - 1.0) / b)), 0.0, 1e-15);
}

TEST(FbiConstant, IndependentOfBasePoint) {
  const double xi[2] = {1.5, -0.5};
  const double origin[2] = {0.0, 0.0};
  const Complex c0 = fbi_constant(origin, xi);
  for (double s : {-7.0, 0.3, 9.0}) {
    const double x[2] = {s, 2.0 * s};
    EXPECT_NEAR(std::abs(fbi_constant(x, xi) - c0), 0.0, 1e-13);
  }
}

TEST(FbiConstant, ClosedFormAtZeroFrequency) {
  const double x[1] = {3.0}, xi[1] = {0.0};
  EXPECT_NEAR(std::abs(fbi_constant(x, xi) - Complex(std::sqrt(std::numbers::pi))), 0.0, 1e-14);
}

TEST(FbiNumeric, AgreesWithConstant) {
  const PointFn one = [](std::span<const double>) { return Complex(1.0); };
  const double x[2] = {1.0, -2.0}, xi[2] = {0.7, 2.0};
  EXPECT_NEAR(std::abs(fbi_numeric(one, x, xi) - fbi_constant(x, xi)), 0.0, 1e-8);
  FbiQuadrature tight;
  tight.truncation = 0.5;
  EXPECT_THROW(fbi_numeric(one, x, xi, tight), CapacityError);
}

TEST(Weights, ValidationNamesIndex) {
  EXPECT_NO_THROW(factorial_weights(20).validate());
  EXPECT_NO_THROW(gevrey_weights(1.5, 20).validate());
  EXPECT_THROW(gevrey_weights(0.5, 10), DomainError);
  try {
    make_weight_sequence([](int j) { return j == 4 ? 0.0 : std::lgamma(j + 1.0); }, 8);
    FAIL() << "expected SpecError";
  } catch (const SpecError& e) {
    EXPECT_NE(std::string(e.what()).find('4'), std::string::npos);
  }
}

TEST(AssociatedFunction, PowerWeightsClosedForm) {
  // sup_p (2p - p log p) over integers: p = 3.
  const AssociatedValue v = associated_function(power_weights(30), std::exp(2.0), 20);
  EXPECT_EQ(v.argmax, 3);
  EXPECT_NEAR(v.value, 3.0 * (2.0 - std::log(3.0)), 1e-12);
  EXPECT_THROW(associated_function(power_weights(30), std::exp(6.0), 10), CapacityError);
}
