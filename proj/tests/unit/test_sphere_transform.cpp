#include <cmath>
#include <numbers>

#include <boost/math/special_functions/bessel.hpp>
#include <gtest/gtest.h>

#include "decaylab/errors.hpp"
#include "decaylab/sphere_transform.hpp"

using namespace decaylab;

TEST(SigmaHat, ExactTransformClosedForms) {
  for (double rho : {0.0, 0.4, 3.0, 17.0, 250.0}) {
    EXPECT_NEAR(sigma_hat_exact(2, rho), 2.0 * std::numbers::pi * boost::math::cyl_bessel_j(0, rho), 1e-12);
    const double sinc = rho == 0.0 ? 1.0 : std::sin(rho) / rho;
    EXPECT_NEAR(sigma_hat_exact(3, rho), 4.0 * std::numbers::pi * sinc, 1e-12);
  }
}

TEST(SigmaHat, QuadratureMatchesExactTransform) {
  const double xi2[2] = {3.0, -4.0};
  EXPECT_NEAR(std::abs(sigma_hat_quadrature(xi2) - sigma_hat_exact(2, 5.0)), 0.0, 1e-10);
  const double xi3[3] = {1.0, 2.0, 2.0};
  EXPECT_NEAR(std::abs(sigma_hat_quadrature(xi3, 48) - sigma_hat_exact(3, 3.0)), 0.0, 1e-10);
}

TEST(SigmaHat, ConstantDiffersFromTrueTransformByPowerOfTwo) {
  EXPECT_NEAR(measured_normalization(2), 1.0, 1e-12);
  EXPECT_NEAR(measured_normalization(3), std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(sigma_hat(3, 2.0) / sigma_hat_exact(3, 2.0), 1.0 / std::sqrt(2.0), 1e-14);
}

TEST(LqThreshold, Values) {
  EXPECT_DOUBLE_EQ(lq_threshold(2), 4.0);
  EXPECT_DOUBLE_EQ(lq_threshold(3), 3.0);
}

TEST(LqScan, ClassifiesBothSidesOfThreshold) {
  const std::vector<double> qs{3.0, 4.0, 6.0};
  const auto rows = lq_threshold_scan(2, qs);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].classification, LqClass::Divergent);
  EXPECT_EQ(rows[1].classification, LqClass::Divergent);
  EXPECT_TRUE(rows[1].logarithmic);
  EXPECT_EQ(rows[2].classification, LqClass::Convergent);
  EXPECT_NEAR(rows[0].growth_exponent, rows[0].predicted_exponent, 0.05);
}

TEST(FitGevrey, RecoversSyntheticParameters) {
  std::vector<double> norms;
  for (int k = 0; k <= 12; ++k)
    norms.push_back(2.0 * std::pow(1.5, k) * (k == 0 ? 1.0 : std::pow(k, 0.8 * k)));
  const GevreyFit f = fit_gevrey(norms);
  EXPECT_NEAR(f.s, 0.8, 1e-9);
  EXPECT_NEAR(f.A, 1.5, 1e-8);
  EXPECT_NEAR(f.C, 2.0, 1e-7);
}

TEST(FitGevrey, NegativeExponentIsClamped) {
  std::vector<double> norms;
  for (int k = 0; k <= 10; ++k) norms.push_back(std::pow(0.5, k) / std::tgamma(k + 1.0));
  EXPECT_EQ(fit_gevrey(norms).s, 0.0);
}

TEST(GevreyNorms, DerivativeNormsStayGevreyOne) {
  const GevreyFit f = gevrey_norm_sequence(2, 5.0, 8, coeff_tables(12));
  ASSERT_EQ(f.norms.size(), 9u);
  EXPECT_LE(f.s, 1.15);
  for (std::size_t k = 5; k < f.ratios.size(); ++k) EXPECT_LT(f.ratios[k], f.ratios[k - 1]);
}

TEST(GevreyNorms, RejectsExponentBelowThreshold) {
  EXPECT_THROW(gevrey_norm_sequence(2, 4.0, 4, coeff_tables(8)), DomainError);
}
