#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "decaylab/errors.hpp"
#include "decaylab/quad_core.hpp"
#include "decaylab/tomas_stein.hpp"

using namespace decaylab;

TEST(MultiIndex, OrderAndContainment) {
  const MultiIndex a({1, 2}), b({2, 2});
  EXPECT_EQ(a.order(), 3);
  EXPECT_TRUE(a.contained_in(b));
  EXPECT_FALSE(b.contained_in(a));
  EXPECT_EQ(MultiIndex::unit(3, 1), MultiIndex({0, 1, 0}));
}

TEST(Plateau, SmoothStep) {
  EXPECT_DOUBLE_EQ(plateau(0.5), 1.0);
  EXPECT_DOUBLE_EQ(plateau(1.0), 1.0);
  EXPECT_DOUBLE_EQ(plateau(2.0), 0.0);
  EXPECT_NEAR(plateau(1.5), 0.5, 1e-15);
}

TEST(DyadicPartition, SumsToUnity) {
  const DyadicPartition p = build_partition(2, 8);
  for (double r : {0.0, 0.3, 1.7, 9.0, 100.0, 250.0}) EXPECT_NEAR(p.sum(r), 1.0, 1e-14) << r;
  EXPECT_NEAR(p.sum(600.0), 0.0, 1e-14);
  const auto [lo, hi] = p.support(3);
  EXPECT_DOUBLE_EQ(lo, 4.0);
  EXPECT_DOUBLE_EQ(hi, 16.0);
}

TEST(Kernel, SupNormDecaysLikeHalfPower) {
  const int zero[2] = {0, 0};
  std::vector<double> xs, ys;
  for (int k = 4; k <= 9; ++k) {
    xs.push_back(std::ldexp(1.0, k));
    ys.push_back(op_norm_1_inf(build_kernel(2, zero, k)));
  }
  EXPECT_NEAR(fit_loglog(xs, ys).slope, -0.5, 0.07);
}

TEST(AnnulusIntegral, DecaysLikeInverseScale) {
  EXPECT_NEAR(annulus_integral(2, 9, 2) / annulus_integral(2, 10, 2), 2.0, 0.05);
  EXPECT_NEAR(annulus_integral(3, 8, 3) / annulus_integral(3, 9, 3), 4.0, 0.2);
}

TEST(OpNorm22, GrowsLikeScale) {
  const int zero[2] = {0, 0};
  const double r = op_norm_2_2(2, zero, 7).value / op_norm_2_2(2, zero, 6).value;
  EXPECT_NEAR(r, 2.0, 0.1);
  EXPECT_THROW(op_norm_2_2(2, zero, 6, 16.0), CapacityError);
}

TEST(Exponents, ShareZeroAtThreshold) {
  for (int d = 2; d <= 10; ++d) {
    const double p = restriction_threshold(d);
    EXPECT_NEAR(interpolation_exponent(d, p, ExponentVariant::Stated), 0.0, 1e-14);
    EXPECT_NEAR(interpolation_exponent(d, p, ExponentVariant::Direct), 0.0, 1e-14);
    EXPECT_GT(interpolation_exponent(d, p - 0.01, ExponentVariant::Direct), 0.0);
  }
  EXPECT_DOUBLE_EQ(restriction_threshold(2), 1.2);
}

TEST(SalemThreshold, ExactRational) {
  EXPECT_EQ(salem_threshold(Rational(1, 2), Rational(1, 2)), Rational(6, 5));
  EXPECT_NEAR(salem_threshold(0.5, 0.5), 1.2, 1e-15);
  // alpha -> 1 with beta = 2 alpha tends to 2.
  EXPECT_NEAR(salem_threshold(0.999999, 1.999998), 2.0, 1e-5);
  EXPECT_THROW(salem_threshold(0.5, 1.5), DomainError);
}

TEST(Trials, GaussianRatioClosedForm) {
  const TrialEvaluation e = evaluate_trial(gaussian_trial());
  EXPECT_NEAR(e.ratio(1.0), std::sqrt(2.0 * std::numbers::pi) * std::exp(-0.5), 1e-8);
}

TEST(Trials, KnappRatiosSeparateAroundThreshold) {
  const double deltas[] = {0.5, 0.25, 0.125};
  std::vector<double> low, high;
  for (double d : deltas) {
    const TrialEvaluation e = evaluate_trial(knapp_trial(d));
    low.push_back(e.ratio(1.1));
    high.push_back(e.ratio(1.35));
  }
  EXPECT_LT(low[2], low[0]);
  EXPECT_GT(high[1], high[0]);
  EXPECT_GT(high[2], high[1]);
}
