#include <cmath>

#include <boost/math/special_functions/hermite.hpp>
#include <gtest/gtest.h>

#include "decaylab/errors.hpp"
#include "decaylab/jet.hpp"

using namespace decaylab;

TEST(JetSpace, CountsMultiIndices) {
  EXPECT_EQ(JetSpace(1, 5).size(), 6u);
  EXPECT_EQ(JetSpace(2, 4).size(), 15u);
  EXPECT_EQ(JetSpace(3, 2).size(), 10u);
  EXPECT_THROW(JetSpace(4, 2), UnsupportedDimension);
  EXPECT_THROW(JetSpace(2, 13), CapacityError);
}

TEST(Jet, GaussianDerivativesAreHermite) {
  // d^n/dx^n exp(-x^2) = (-1)^n H_n(x) exp(-x^2).
  const JetSpace s(1, 10);
  const double x0 = 0.7;
  const Jet x = jet_variable(s, 0, x0);
  const Jet g = jet_exp(s, Complex(-1.0) * jet_mul(s, x, x));
  for (int n = 0; n <= 10; ++n) {
    const int idx[1] = {n};
    const double ref = (n % 2 ? -1.0 : 1.0) * boost::math::hermite(n, x0) * std::exp(-x0 * x0);
    EXPECT_NEAR(g.derivative(s, idx).real(), ref, 1e-9 * std::max(1.0, std::abs(ref))) << n;
  }
}

TEST(Jet, ProductRuleInTwoVariables) {
  const JetSpace s(2, 4);
  const double x0[2] = {0.3, -1.2};
  const Jet x = jet_variable(s, 0, x0[0]);
  const Jet y = jet_variable(s, 1, x0[1]);
  const Jet f = jet_mul(s, jet_mul(s, x, x), y);  // x^2 y
  const int dxdy[2] = {1, 1}, dxx[2] = {2, 0}, dxxy[2] = {2, 1};
  EXPECT_NEAR(f.derivative(s, dxdy).real(), 2.0 * x0[0], 1e-15);
  EXPECT_NEAR(f.derivative(s, dxx).real(), 2.0 * x0[1], 1e-15);
  EXPECT_NEAR(f.derivative(s, dxxy).real(), 2.0, 1e-15);
  const int beta[2] = {2, 1};
  const Jet m = jet_monomial(s, x0, beta);
  for (std::size_t i = 0; i < s.size(); ++i) EXPECT_NEAR(std::abs(m.c[i] - f.c[i]), 0.0, 1e-15);
}

TEST(Jet, ReciprocalAndSqrtInvertProducts) {
  const JetSpace s(1, 8);
  const Jet x = jet_variable(s, 0, 0.4);
  const Jet a = Complex(1.0) + jet_mul(s, x, x);
  const Jet one = jet_mul(s, a, jet_reciprocal(s, a));
  const Jet back = jet_mul(s, jet_sqrt(s, a), jet_sqrt(s, a));
  EXPECT_NEAR(std::abs(one.c[0] - 1.0), 0.0, 1e-15);
  for (std::size_t i = 1; i < s.size(); ++i) {
    EXPECT_NEAR(std::abs(one.c[i]), 0.0, 1e-13);
    EXPECT_NEAR(std::abs(back.c[i] - a.c[i]), 0.0, 1e-13);
  }
  EXPECT_THROW(jet_reciprocal(s, jet_constant(s, 0.0)), DomainError);
  EXPECT_THROW(jet_sqrt(s, jet_constant(s, -1.0)), DomainError);
}

TEST(Jet, ExpUnderflowGivesZeroJet) {
  const JetSpace s(1, 3);
  EXPECT_TRUE(jet_exp(s, jet_constant(s, -800.0)).is_zero());
}
