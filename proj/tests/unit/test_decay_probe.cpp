#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "decaylab/decay_probe.hpp"
#include "decaylab/errors.hpp"

using namespace decaylab;

namespace {

const double kPi = std::numbers::pi;

}  // namespace

TEST(Pairing, PointMassDerivativeAgainstEvenGaussian) {
  const auto t = point_mass_derivative({0.0, 0.0}, MultiIndex::unit(2, 0), Complex(0.0, 1.0));
  EXPECT_NEAR(std::abs(pair(t, MultiIndex::zero(2), MultiIndex::zero(2), gaussian_test(2))), 0.0, 1e-15);
}

TEST(Pairing, CircleAgainstPlateau) {
  const Complex v = pair(surface_measure(2), MultiIndex::zero(2), MultiIndex::zero(2), plateau_test(2, 2.0));
  EXPECT_NEAR(v.real(), 2.0 * kPi, 1e-12);
}

TEST(Pairing, ConstantAgainstGaussian) {
  const Complex v = pair(constant_one(1), MultiIndex::zero(1), MultiIndex::zero(1), gaussian_test(1));
  EXPECT_NEAR(v.real(), std::sqrt(kPi), 1e-10);
}

TEST(Pairing, DerivativeMovesToTestFunction) {
  // <T', phi> = -<T, phi'> with T = x on R and phi = exp(-x^2): <1, phi> = sqrt(pi).
  const auto x = coordinate_distribution(1, 0);
  const Complex v = pair(x, MultiIndex::unit(1, 0), MultiIndex::zero(1), gaussian_test(1));
  EXPECT_NEAR(v.real(), std::sqrt(kPi), 1e-10);
  // <x^2 T, phi> with T = 1: int x^2 e^{-x^2} = sqrt(pi) / 2.
  const Complex w = pair(constant_one(1), MultiIndex::zero(1), MultiIndex({2}), gaussian_test(1));
  EXPECT_NEAR(w.real(), std::sqrt(kPi) / 2.0, 1e-10);
}

TEST(Transform, ConstantAndCoordinate) {
  const auto one = fourier_transform(constant_one(2));
  const auto& pm = std::get<PointMassDerivative>(one.rep);
  EXPECT_NEAR(std::abs(pm.scale - Complex(4.0 * kPi * kPi)), 0.0, 1e-12);
  const auto x = fourier_transform(coordinate_distribution(1, 0));
  const auto& px = std::get<PointMassDerivative>(x.rep);
  EXPECT_EQ(px.gamma, MultiIndex::unit(1, 0));
  EXPECT_NEAR(std::abs(px.scale - Complex(0.0, 2.0 * kPi)), 0.0, 1e-12);
}

TEST(Transform, GaussianPairingMatchesParseval) {
  // <T_hat, phi> = <T, phi_hat>: both sides for T = exp(-x^2), phi = exp(-x^2) on R.
  const auto g = gaussian_distribution(1);
  const auto gh = fourier_transform(g);
  const Complex lhs = pair(gh, MultiIndex::zero(1), MultiIndex::zero(1), gaussian_test(1));
  // int sqrt(pi) e^{-xi^2/4} e^{-xi^2} dxi = sqrt(pi) sqrt(pi / 1.25).
  EXPECT_NEAR(lhs.real(), std::sqrt(kPi) * std::sqrt(kPi / 1.25), 1e-9);
}

TEST(TestFunctionNorms, GaussianLpNorms) {
  const TestFunction g = gaussian_test(1);
  EXPECT_NEAR(g.lp_norm(1.0), std::sqrt(kPi), 1e-10);
  EXPECT_NEAR(g.lp_norm(2.0), std::pow(kPi / 2.0, 0.25), 1e-10);
  EXPECT_NEAR(g.lp_norm(INFINITY), 1.0, 1e-4);
  // hat phi = sqrt(pi) e^{-xi^2/4}; its L^2 norm is sqrt(2 pi) ||phi||_2.
  EXPECT_NEAR(g.fourier_lq_norm(2.0), std::sqrt(2.0 * kPi) * g.lp_norm(2.0), 1e-6);
}

TEST(ParameterSets, ConjugatesAndClosure) {
  EXPECT_DOUBLE_EQ(conjugate_exponent(2.0), 2.0);
  EXPECT_DOUBLE_EQ(conjugate_exponent(4.0), 4.0 / 3.0);
  EXPECT_TRUE(std::isinf(conjugate_exponent(1.0)));
  const ParameterPair p = full_parameter_pair(2, 2, 3.0);
  EXPECT_TRUE(p.closed);
  EXPECT_EQ(p.entries.size(), 15u);
  const ParameterPair dual = dual_parameter_set(p);
  EXPECT_DOUBLE_EQ(dual.q, 1.5);
  std::vector<IndexEntry> gap{{MultiIndex({1, 0}), MultiIndex::zero(2)}};
  EXPECT_FALSE(is_downward_closed(gap));
  EXPECT_TRUE(full_parameter_pair(1, 1, 1.0).degenerate);
}

TEST(Verdicts, SyntheticRatioSequences) {
  std::vector<double> scales, grow, flat;
  for (int j = 0; j <= 10; ++j) {
    scales.push_back(std::ldexp(1.0, j));
    grow.push_back(std::pow(scales.back(), 0.8));
    flat.push_back(1.0 + 0.01 * std::sin(j));
  }
  EXPECT_EQ(classify_ratios(scales, grow).verdict, Verdict::Unbounded);
  EXPECT_EQ(classify_ratios(scales, flat).verdict, Verdict::Bounded);
  const std::vector<double> short_scales(scales.begin(), scales.begin() + 4);
  const std::vector<double> short_grow(grow.begin(), grow.begin() + 4);
  EXPECT_EQ(classify_ratios(short_scales, short_grow).verdict, Verdict::Undecided);
}

TEST(Wavefront, CoordinateFlagsOnlyZero) {
  const auto dirs = standard_directions(2, 8);
  const WavefrontSet wf = wavefront_scan(coordinate_distribution(2, 0), full_parameter_pair(2, 1, 2.0), dirs,
                                         kPi / 6.0);
  ASSERT_EQ(wf.flagged.size(), 1u);
  EXPECT_EQ(wf.flagged.front(), Direction::zero().label());
  EXPECT_TRUE(wf.undecided.empty());
}

TEST(Wavefront, GaussianFlagsNothing) {
  const auto dirs = standard_directions(2, 8);
  const WavefrontSet wf =
      wavefront_scan(gaussian_distribution(2), full_parameter_pair(2, 1, 2.0), dirs, kPi / 6.0);
  EXPECT_TRUE(wf.flagged.empty());
  EXPECT_TRUE(wf.undecided.empty());
}

TEST(Gevrey, GaussianMemberLorentzianNot) {
  EXPECT_EQ(gevrey_membership(gaussian_distribution(1), 2.0, 0.5, 12).verdict, Membership::Member);
  EXPECT_EQ(gevrey_membership(lorentzian_distribution(), 2.0, 0.0, 12).verdict, Membership::NonMember);
}

TEST(Gevrey, SurfaceTransformIsGevreyOne) {
  const GevreyMembership m = gevrey_membership_sigma_hat(2, 5.0, 1.0, 8);
  EXPECT_EQ(m.verdict, Membership::Member);
  EXPECT_LE(m.fit.s, 1.15);
}

TEST(Errors, MissingTransformAndDimension) {
  SampledFunction f;
  f.value = [](std::span<const double>) { return Complex(1.0); };
  const DistributionRep t{"untransformed", f};
  EXPECT_THROW(fourier_transform(t), CapacityError);
  EXPECT_THROW(constant_one(4), UnsupportedDimension);
}
