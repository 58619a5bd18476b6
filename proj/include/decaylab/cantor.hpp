#pragma once

// Cantor-type measures on [0, 1]: construction from branching data, Fourier
// transforms, dyadic-annulus decay fits and moment measures x^j dmu.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "decaylab/quad_core.hpp"

namespace decaylab {

enum class OffsetMode {
  /// The same offsets for every interval at every level.
  Deterministic,
  /// One random offset vector per level, shared by all intervals of that level.
  RandomPerLevel,
  /// Fresh random offsets for every interval.
  RandomPerInterval,
};

/// Each interval of length L spawns `branching` children of length
/// contraction * L starting at L * offsets[i] from its left end. Random
/// offsets are i/N + U (1/N - contraction) with U uniform on [0, 1).
struct CantorSpec {
  int branching = 2;
  double contraction = 1.0 / 3.0;
  OffsetMode mode = OffsetMode::Deterministic;
  std::vector<double> offsets{0.0, 2.0 / 3.0};
  int depth = 10;
  std::uint64_t seed = 0;

  /// log N / log(1 / contraction).
  double dimension() const;
  /// Throws SpecError on a broken invariant.
  void validate() const;
};

CantorSpec middle_thirds_spec(int depth);
/// N = 2, contraction 1/2, offsets {0, 1/2}: midpoints of a uniform grid.
CantorSpec uniform_spec(int depth);
CantorSpec random_spec(int branching, double contraction, int depth, std::uint64_t seed,
                       OffsetMode mode = OffsetMode::RandomPerInterval);

struct DiscreteMeasure {
  std::vector<double> atoms;
  std::vector<double> masses;
  CantorSpec spec;

  double total_mass() const;
  std::size_t size() const noexcept { return atoms.size(); }
};

/// Equal-mass atoms at the midpoints of the level-`depth` intervals.
DiscreteMeasure build_cantor(const CantorSpec& spec);

/// sum masses * exp(-i atom xi).
std::complex<double> fourier_transform(const DiscreteMeasure& mu, double xi);
std::vector<std::complex<double>> fourier_transform(const DiscreteMeasure& mu,
                                                    std::span<const double> xi, int threads = 1);

/// Transform on the uniform grid xi0 + i h, i < n, by phase rotation.
std::vector<std::complex<double>> fourier_transform_uniform(const DiscreteMeasure& mu, double xi0,
                                                            double h, std::size_t n,
                                                            int threads = 1);

struct BetaFit {
  /// Fitted exponent in |mu_hat| ~ |xi|^{-beta/2}.
  double beta_hat = 0.0;
  /// beta_hat -/+ two standard errors.
  double beta_lo = 0.0;
  double beta_hi = 0.0;
  FitResult fit;
  std::vector<int> ks;
  /// sup |mu_hat| over [2^k, 2^{k+1}).
  std::vector<double> sups;
};

struct DecayOptions {
  int k_lo = 8;
  int k_hi = 14;
  double spacing = 0.5;
  int threads = 1;
};

/// Largest k with 2^k <= 0.1 (1/contraction)^depth.
int validity_limit(const CantorSpec& spec);

/// Fits the annulus sups over k_lo..min(k_hi, validity_limit). Throws
/// CapacityError when fewer than three annuli remain.
BetaFit decay_exponent_fit(const DiscreteMeasure& mu, const DecayOptions& options = {});

/// Same atoms, masses multiplied by atom^j, j <= 8. The total mass is no
/// longer 1.
DiscreteMeasure moment_measure(const DiscreteMeasure& mu, int j);

struct MomentDecayRow {
  int j = 0;
  BetaFit fit;
  /// max of |transform| at 0 and over the scanned annuli.
  double sup_norm = 0.0;
};

/// One row per j in [j_lo, j_hi], all moments sharing one pass over the atoms.
std::vector<MomentDecayRow> moment_decay_check(const DiscreteMeasure& mu, int j_lo, int j_hi,
                                               const DecayOptions& options = {});

}  // namespace decaylab
