#pragma once

// Pairings <x^beta D^alpha T, phi> of concrete tempered distributions with
// cone-localized test families, decay verdicts over dilation ladders, the
// empirical Fourier wavefront set and Gevrey membership fits.

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "decaylab/cantor.hpp"
#include "decaylab/fbi.hpp"
#include "decaylab/jet.hpp"
#include "decaylab/quad_core.hpp"
#include "decaylab/sphere_transform.hpp"
#include "decaylab/tomas_stein.hpp"

namespace decaylab {

struct DistributionRep;

/// A locally integrable function T(x), optionally with its Fourier transform
/// and, in d = 1, derivatives f^{(k)}(x).
struct SampledFunction {
  int dimension = 1;
  std::function<Complex(std::span<const double>)> value;
  std::function<double(int, double)> derivative;
  std::shared_ptr<const DistributionRep> transform;
};

/// Surface measure carried by a sphere quadrature.
struct SurfaceMeasure {
  SphereQuadrature rule;
};

/// scale * d^gamma delta_location.
struct PointMassDerivative {
  std::vector<double> location;
  MultiIndex gamma;
  Complex scale = 1.0;
};

struct CantorMeasure {
  DiscreteMeasure measure;
};

/// Integration against 1.
struct ConstantOne {
  int dimension = 1;
};

struct DistributionRep {
  std::string label;
  std::variant<SampledFunction, SurfaceMeasure, PointMassDerivative, CantorMeasure, ConstantOne> rep;

  int dimension() const;
};

/// Fourier transform with hat T(psi) = T(hat psi), hat psi(x) = int e^{-ix.xi} psi.
/// Throws CapacityError for a SampledFunction without a transform.
DistributionRep fourier_transform(const DistributionRep& t);

DistributionRep constant_one(int d);
/// T(phi) = int x_i phi, with transform i (2 pi)^d d delta_0 / d xi_i.
DistributionRep coordinate_distribution(int d, int i);
/// exp(-a |x|^2), with transform and (d = 1) Hermite derivatives.
DistributionRep gaussian_distribution(int d, double a = 1.0);
/// 1 / (1 + x^2) on R, with derivatives and transform pi e^{-|xi|}.
DistributionRep lorentzian_distribution();
DistributionRep surface_measure(int d, int resolution = 96);
DistributionRep cantor_distribution(const DiscreteMeasure& mu);
DistributionRep point_mass_derivative(std::vector<double> location, MultiIndex gamma, Complex scale);

/// A smooth test function: its Taylor jet at any point plus a quadrature
/// covering its support.
struct TestFunction {
  int dimension = 1;
  std::string label;
  std::function<Jet(const JetSpace&, std::span<const double>)> jet;
  std::vector<double> nodes;  // flattened, dimension per node
  std::vector<double> weights;

  std::size_t node_count() const { return weights.size(); }
  std::span<const double> node(std::size_t i) const;
  Complex value(std::span<const double> x) const;
  /// ||phi||_{L^p} by quadrature; p = inf gives the max over the nodes.
  double lp_norm(double p) const;
  /// ||hat phi||_{L^q} by direct transform on a grid up to the band the
  /// quadrature resolves, d = 1 only.
  double fourier_lq_norm(double q) const;
};

TestFunction gaussian_test(int d, double a = 1.0);
/// psi(|x| / radius): 1 on B(0, radius), 0 outside B(0, 2 radius).
TestFunction plateau_test(int d, double radius);
/// phi0(lambda x) e^{i lambda x.eta}, phi0(y) = exp(-|y|^2 / (1 - |y|^2)).
/// An empty eta means no modulation.
TestFunction zero_member(int d, double lambda, std::span<const double> eta);
/// R(|x| / lambda) A(angle to direction), R a bump on (1, 2) and A a bump on
/// the cone of full opening `aperture` radians.
TestFunction cone_member(std::span<const double> direction, double aperture, double lambda);
/// D^alpha phi.
TestFunction derivative_of(const TestFunction& phi, const MultiIndex& alpha);

/// <x^beta D^alpha T, phi> = (-1)^{|alpha|} <T, d^alpha (x^beta phi)>.
Complex pair(const DistributionRep& t, const MultiIndex& alpha, const MultiIndex& beta,
             const TestFunction& phi);

struct IndexEntry {
  MultiIndex alpha;
  MultiIndex beta;
};

/// Index set of (alpha, beta, q) with a common q and one growth constant per entry.
struct ParameterPair {
  std::vector<IndexEntry> entries;
  std::vector<double> growth;
  double q = 2.0;
  /// Downward closed in (alpha, beta).
  bool closed = false;
  /// q in {1, inf}: the conjugate exponent degenerates.
  bool degenerate = false;

  int dimension() const;
};

/// Conjugate exponent q / (q - 1), with 1 <-> inf.
double conjugate_exponent(double q);

bool is_downward_closed(std::span<const IndexEntry> entries);

/// Explicit entries, growth constants defaulting to 1.
ParameterPair make_parameter_pair(std::vector<IndexEntry> entries, double q,
                                  std::vector<double> growth = {});

/// All (alpha, beta) in d variables with |alpha| + |beta| <= max_order (<= 8),
/// with c = A^{|alpha| + |beta|} M_{|alpha|} M'_{|beta|}, or 1 without weights.
ParameterPair full_parameter_pair(int d, int max_order, double q, double a = 1.0,
                                  const WeightSequence* weights = nullptr);

/// Swaps alpha and beta and conjugates q.
ParameterPair dual_parameter_set(const ParameterPair& p);

enum class Verdict { Bounded, Unbounded, Undecided };
std::string to_string(Verdict v);

struct VerdictRule {
  double min_decades = 3.0;
  double unbounded_slope = 0.2;
  double unbounded_r_squared = 0.95;
  double bounded_slope = 0.05;
};

struct VerdictResult {
  Verdict verdict = Verdict::Undecided;
  FitResult fit;
};

/// Classifies a ratio sequence over increasing scales.
VerdictResult classify_ratios(std::span<const double> scales, std::span<const double> ratios,
                              const VerdictRule& rule = {});

/// A unit direction or the ZERO marker.
struct Direction {
  std::optional<std::vector<double>> unit;

  static Direction zero() { return {}; }
  bool is_zero() const { return !unit.has_value(); }
  std::string label() const;
};

struct TestFamily {
  int dimension = 2;
  Direction direction;
  double aperture = 0.5235987755982988;
  std::vector<double> ladder;
  /// Modulation eta for ZERO members; empty for none.
  std::vector<double> modulation;

  TestFunction member(std::size_t j) const;
};

/// Ladder 2^j, j = 0..10. ZERO families are modulated along e_1.
TestFamily make_family(int d, const Direction& direction, double aperture);

enum class NormSide { Direct, Fourier };

struct EntryDecay {
  IndexEntry entry;
  double growth = 1.0;
  std::vector<double> ratios;
  double sup_ratio = 0.0;
  VerdictResult verdict;
};

struct DecayFit {
  std::string direction;
  std::vector<double> scales;
  /// l^q sum over the index set of the ratios, per scale.
  std::vector<double> aggregate;
  VerdictResult verdict;
  std::vector<EntryDecay> entries;
  double norm_exponent = 1.0;
};

struct DecayProbeOptions {
  NormSide side = NormSide::Direct;
  VerdictRule rule;
  int threads = 1;
};

/// Ratios |<x^beta D^alpha T, phi_j>| / (c ||phi_j||) along the family, with
/// ||.|| the L^{q'} norm of phi (Direct) or the L^q norm of hat phi (Fourier).
DecayFit directional_decay_fit(const DistributionRep& t, const ParameterPair& p,
                               const TestFamily& family, const DecayProbeOptions& options = {});

struct WavefrontSet {
  std::vector<std::string> flagged;
  std::vector<std::string> undecided;
  std::vector<DecayFit> fits;
};

/// Fits hat T against the dual parameter set along every direction.
WavefrontSet wavefront_scan(const DistributionRep& t, const ParameterPair& p,
                            std::span<const Direction> directions, double aperture,
                            const DecayProbeOptions& options = {});

/// Equispaced unit directions in d = 1, 2 (d = 1: +-1) followed by ZERO.
std::vector<Direction> standard_directions(int d, int count);

enum class Membership { Member, NonMember };
std::string to_string(Membership m);

struct GevreyMembership {
  Membership verdict = Membership::NonMember;
  GevreyFit fit;
  double s_requested = 0.0;
  /// First k with a non-finite norm, or -1.
  int diverging_index = -1;
};

/// ||f^{(k)}||_{L^q(R)}, k = 0..k_max, for a 1-D SampledFunction with
/// derivatives. Member when the fitted s <= s + 0.1 max(s, 1).
GevreyMembership gevrey_membership(const DistributionRep& t, double q, double s, int k_max);

/// Same test for the transform of the surface measure in d dimensions.
GevreyMembership gevrey_membership_sigma_hat(int d, double q, double s, int k_max);

}  // namespace decaylab
