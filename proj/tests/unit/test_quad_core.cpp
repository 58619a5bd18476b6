#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "decaylab/errors.hpp"
#include "decaylab/quad_core.hpp"

using namespace decaylab;

TEST(GaussLegendre, IntegratesPolynomialsExactly) {
  const Grid1D g = gauss_legendre(8, 0.0, 2.0);
  for (int k = 0; k <= 15; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) s += g.weights[i] * std::pow(g.nodes[i], k);
    EXPECT_NEAR(s, std::pow(2.0, k + 1) / (k + 1), 1e-12 * std::pow(2.0, k + 1)) << "k=" << k;
  }
}

TEST(GaussLegendre, CompositeRuleMatchesClosedForm) {
  EXPECT_NEAR(integrate_panels([](double x) { return std::sin(x); }, 0.0, std::numbers::pi, 8), 2.0, 1e-14);
  EXPECT_NEAR(integrate_panels([](double x) { return std::exp(-x * x); }, -8.0, 8.0, 16),
              std::sqrt(std::numbers::pi), 1e-13);
}

TEST(Grid1D, ValidateRejectsBrokenRules) {
  Grid1D g{{0.0, 0.0}, {1.0, 1.0}};
  EXPECT_THROW(g.validate(), SpecError);
  Grid1D h{{0.0, 1.0}, {1.0, -1.0}};
  EXPECT_THROW(h.validate(), SpecError);
}

TEST(SurfaceArea, MatchesKnownSpheres) {
  EXPECT_NEAR(surface_area(2), 2.0 * std::numbers::pi, 1e-14);
  EXPECT_NEAR(surface_area(3), 4.0 * std::numbers::pi, 1e-14);
  EXPECT_NEAR(surface_area(4), 2.0 * std::numbers::pi * std::numbers::pi, 1e-13);
}

TEST(SphereRule, IntegratesMonomials) {
  const SphereQuadrature s2 = sphere_rule(2, 32);
  EXPECT_NEAR(s2.total_weight(), 2.0 * std::numbers::pi, 1e-13);
  EXPECT_NEAR(integrate_sphere(s2, [](auto y) { return y[0] * y[0]; }), std::numbers::pi, 1e-13);
  const SphereQuadrature s3 = sphere_rule(3, 16);
  EXPECT_NEAR(s3.total_weight(), 4.0 * std::numbers::pi, 1e-12);
  // int_{S^2} z^2 = 4 pi / 3, int x^2 y^2 = 4 pi / 15.
  EXPECT_NEAR(integrate_sphere(s3, [](auto y) { return y[2] * y[2]; }), 4.0 * std::numbers::pi / 3.0, 1e-12);
  EXPECT_NEAR(integrate_sphere(s3, [](auto y) { return y[0] * y[0] * y[1] * y[1]; }),
              4.0 * std::numbers::pi / 15.0, 1e-12);
}

TEST(SphereRule, RejectsUnsupportedInput) {
  EXPECT_THROW(sphere_rule(4, 16), UnsupportedDimension);
  EXPECT_THROW(sphere_rule(2, 4), DomainError);
}

TEST(RadialIntegral, GaussianMass) {
  // int_{R^2} exp(-|x|^2) = pi, int_{R^3} = pi^{3/2}.
  auto g = [](double r) { return std::exp(-r * r); };
  EXPECT_NEAR(integrate_radial(g, 2, 1.0, 12.0), std::numbers::pi, 1e-9);
  EXPECT_NEAR(integrate_radial(g, 3, 1.0, 12.0), std::pow(std::numbers::pi, 1.5), 1e-8);
  // L^2 norm squared: int exp(-2 r^2) over R^2 = pi / 2.
  EXPECT_NEAR(integrate_radial(g, 2, 2.0, 12.0), std::numbers::pi / 2.0, 1e-9);
}

TEST(RadialIntegral, NonFiniteIntegrandCarriesRadius) {
  auto bad = [](double r) { return r > 2.0 ? std::nan("") : 1.0; };
  EXPECT_THROW(integrate_radial(bad, 2, 1.0, 4.0), EvaluationError);
}

TEST(FiniteDiff, DerivativesOfSine) {
  for (int n = 0; n <= 8; ++n) {
    const double x = 0.7;
    const double exact = std::sin(x + n * std::numbers::pi / 2.0);
    EXPECT_NEAR(finite_diff([](double t) { return std::sin(t); }, n, x), exact, 2e-5) << "n=" << n;
  }
}

TEST(FiniteDiff, DomainGuard) {
  FiniteDiffOptions o;
  o.domain_lo = 0.0;
  EXPECT_THROW(finite_diff([](double t) { return std::sqrt(t); }, 2, 0.01, o), DomainError);
}

TEST(DefaultStep, GrowsWithOrderAndRadius) {
  EXPECT_DOUBLE_EQ(default_fd_step(1, 1.0), 0.2);
  EXPECT_DOUBLE_EQ(default_fd_step(8, 1.0), 0.72);
  EXPECT_DOUBLE_EQ(default_fd_step(1, 100.0), 0.4);
}

TEST(FitLogLog, RecoversPowerLaw) {
  std::vector<double> xs, ys;
  for (int i = 1; i <= 10; ++i) {
    xs.push_back(i);
    ys.push_back(3.0 * std::pow(i, -1.25));
  }
  const FitResult f = fit_loglog(xs, ys);
  EXPECT_NEAR(f.slope, -1.25, 1e-12);
  EXPECT_NEAR(std::exp(f.intercept), 3.0, 1e-12);
  EXPECT_NEAR(f.r_squared, 1.0, 1e-12);
}

TEST(FitLogLog, RejectsNonPositiveAndShortInput) {
  std::vector<double> xs{1, 2, 3, 4}, ys{1, 2, -3, 4};
  EXPECT_THROW(fit_loglog(xs, ys), DomainError);
  std::vector<double> a{1, 2}, b{1, 2};
  EXPECT_THROW(fit_loglog(a, b), DomainError);
}

TEST(FitLinear, ExactLine) {
  std::vector<double> xs{0, 1, 2, 3}, ys{1, 3, 5, 7};
  const FitResult f = fit_linear(xs, ys);
  EXPECT_NEAR(f.slope, 2.0, 1e-14);
  EXPECT_NEAR(f.intercept, 1.0, 1e-14);
}

TEST(AnnulusEnvelope, OscillatingPowerLaw) {
  const auto env = annulus_envelope([](double r) { return std::cos(r) / std::pow(r, 1.5); }, 10.0, 2000.0);
  ASSERT_GE(env.size(), 7u);
  // The first annuli see the cosine phase, so the fit is biased slightly high.
  EXPECT_NEAR(fit_envelope(env).slope, -1.5, 0.05);
}
