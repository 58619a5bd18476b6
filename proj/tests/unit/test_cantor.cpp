#include <cmath>
#include <complex>

#include <gtest/gtest.h>

#include "decaylab/cantor.hpp"
#include "decaylab/errors.hpp"

using namespace decaylab;

namespace {

// Midpoint atoms of the middle-thirds construction sit at 1/2 + sum_n +-3^{-n},
// so the transform is a finite product of cosines.
std::complex<double> middle_thirds_product(int depth, double xi) {
  std::complex<double> v = std::polar(1.0, -0.5 * xi);
  for (int n = 1; n <= depth; ++n) v *= std::cos(xi * std::pow(3.0, -n));
  return v;
}

}  // namespace

TEST(Build, MiddleThirdsAtomsAndMass) {
  const DiscreteMeasure mu = build_cantor(middle_thirds_spec(6));
  ASSERT_EQ(mu.size(), 64u);
  EXPECT_NEAR(mu.total_mass(), 1.0, 1e-14);
  EXPECT_NEAR(mu.atoms.front(), 0.5 * std::pow(3.0, -6), 1e-15);
  EXPECT_NEAR(mu.spec.dimension(), std::log(2.0) / std::log(3.0), 1e-15);
}

TEST(Transform, MatchesCosineProduct) {
  const DiscreteMeasure mu = build_cantor(middle_thirds_spec(8));
  for (double xi : {0.0, 1.0, 37.5, 400.0, 3000.0})
    EXPECT_NEAR(std::abs(fourier_transform(mu, xi) - middle_thirds_product(8, xi)), 0.0, 1e-12) << xi;
}

TEST(Transform, UniformGridAgreesWithDirect) {
  const DiscreteMeasure mu = build_cantor(random_spec(4, 1.0 / 16.0, 3, 7));
  const auto grid = fourier_transform_uniform(mu, 100.0, 0.5, 3000, 2);
  for (std::size_t i : {0u, 1023u, 1024u, 2999u})
    EXPECT_NEAR(std::abs(grid[i] - fourier_transform(mu, 100.0 + 0.5 * i)), 0.0, 1e-11) << i;
}

TEST(Random, SeedDeterminesMeasure) {
  const auto a = build_cantor(random_spec(4, 1.0 / 16.0, 4, 3));
  const auto b = build_cantor(random_spec(4, 1.0 / 16.0, 4, 3));
  const auto c = build_cantor(random_spec(4, 1.0 / 16.0, 4, 4));
  EXPECT_EQ(a.atoms, b.atoms);
  EXPECT_NE(a.atoms, c.atoms);
  for (double x : a.atoms) {
    EXPECT_GE(x, 0.0);
    EXPECT_LE(x, 1.0);
  }
}

TEST(Random, PerLevelOffsetsRepeatAcrossIntervals) {
  const auto mu = build_cantor(random_spec(2, 0.25, 2, 9, OffsetMode::RandomPerLevel));
  // Level-2 children of both level-1 intervals share their relative offsets.
  EXPECT_NEAR(mu.atoms[1] - mu.atoms[0], mu.atoms[3] - mu.atoms[2], 1e-15);
}

TEST(Validate, RejectsOverlapAndBadContraction) {
  CantorSpec s = middle_thirds_spec(3);
  s.offsets = {0.0, 0.2};
  EXPECT_THROW(build_cantor(s), SpecError);
  CantorSpec t = middle_thirds_spec(3);
  t.contraction = 0.6;
  EXPECT_THROW(build_cantor(t), SpecError);
}

TEST(ValidityWindow, LimitAndCapacity) {
  EXPECT_EQ(validity_limit(middle_thirds_spec(12)), 15);
  const auto mu = build_cantor(middle_thirds_spec(4));
  EXPECT_THROW(decay_exponent_fit(mu, {8, 14, 0.5, 1}), CapacityError);
}

TEST(DecayFit, UniformMeasureDecaysLikeInverseFrequency) {
  const auto mu = build_cantor(uniform_spec(12));
  const BetaFit f = decay_exponent_fit(mu, {3, 8, 0.5, 1});
  EXPECT_NEAR(f.beta_hat / 2.0, 1.0, 0.05);
}

TEST(DecayFit, MiddleThirdsDoesNotDecay) {
  const auto mu = build_cantor(middle_thirds_spec(10));
  EXPECT_LE(decay_exponent_fit(mu, {6, 12, 0.5, 1}).beta_hat, 0.05);
}

TEST(Moments, MassesScaleByPower) {
  const auto mu = build_cantor(middle_thirds_spec(3));
  const auto m2 = moment_measure(mu, 2);
  for (std::size_t i = 0; i < mu.size(); ++i) EXPECT_DOUBLE_EQ(m2.masses[i], mu.masses[i] * mu.atoms[i] * mu.atoms[i]);
  EXPECT_THROW(moment_measure(mu, 9), DomainError);
}

TEST(Moments, SharedPassMatchesSeparateFits) {
  const auto mu = build_cantor(random_spec(4, 1.0 / 16.0, 4, 1));
  const DecayOptions o{6, 10, 0.5, 1};
  const auto rows = moment_decay_check(mu, 0, 2, o);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_NEAR(rows[2].fit.beta_hat, decay_exponent_fit(moment_measure(mu, 2), o).beta_hat, 1e-10);
}
