#include "decaylab/cantor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "decaylab/errors.hpp"
#include "decaylab/parallel.hpp"

namespace decaylab {

namespace {

constexpr std::size_t kChunk = 1024;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform on [0, 1) from the counter (seed, level, interval, child).
double counter_uniform(std::uint64_t seed, std::uint64_t level, std::uint64_t interval,
                       std::uint64_t child) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ level);
  h = splitmix64(h ^ interval);
  h = splitmix64(h ^ child);
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

// sup_p |sum_a w_s[a] exp(-i atom_a xi_p)| over the uniform grid, for every
// weight set s at once.
std::vector<double> uniform_grid_sups(std::span<const double> atoms,
                                      const std::vector<std::vector<double>>& weights, double xi0,
                                      double h, std::size_t n, int threads) {
  const std::size_t sets = weights.size();
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  std::vector<std::vector<double>> chunk_sup(chunks, std::vector<double>(sets, 0.0));
  parallel_for(
      chunks,
      [&](std::size_t c) {
        const std::size_t lo = c * kChunk;
        const std::size_t len = std::min(kChunk, n - lo);
        const double start = xi0 + h * static_cast<double>(lo);
        std::vector<std::complex<double>> acc(sets * len, 0.0);
        for (std::size_t a = 0; a < atoms.size(); ++a) {
          std::complex<double> z = std::polar(1.0, -atoms[a] * start);
          const std::complex<double> w = std::polar(1.0, -atoms[a] * h);
          for (std::size_t p = 0; p < len; ++p) {
            for (std::size_t s = 0; s < sets; ++s) acc[s * len + p] += weights[s][a] * z;
            z *= w;
          }
        }
        for (std::size_t s = 0; s < sets; ++s)
          for (std::size_t p = 0; p < len; ++p)
            chunk_sup[c][s] = std::max(chunk_sup[c][s], std::abs(acc[s * len + p]));
      },
      threads);
  std::vector<double> out(sets, 0.0);
  for (const auto& cs : chunk_sup)
    for (std::size_t s = 0; s < sets; ++s) out[s] = std::max(out[s], cs[s]);
  return out;
}

BetaFit fit_sups(std::vector<int> ks, std::vector<double> sups) {
  std::vector<double> xs;
  for (int k : ks) xs.push_back(std::ldexp(1.0, k));
  BetaFit out;
  out.fit = fit_loglog(xs, sups);
  out.beta_hat = -2.0 * out.fit.slope;
  out.beta_lo = out.beta_hat - 4.0 * out.fit.slope_stderr;
  out.beta_hi = out.beta_hat + 4.0 * out.fit.slope_stderr;
  out.ks = std::move(ks);
  out.sups = std::move(sups);
  return out;
}

std::vector<int> fit_window(const CantorSpec& spec, const DecayOptions& options) {
  if (!(options.spacing > 0.0)) throw DomainError("decay fit spacing must be positive");
  const int k_hi = std::min(options.k_hi, validity_limit(spec));
  std::vector<int> ks;
  for (int k = std::max(options.k_lo, 0); k <= k_hi; ++k) ks.push_back(k);
  if (ks.size() < 3)
    throw CapacityError("decay fit: fewer than three annuli inside the validity window (k <= " +
                        std::to_string(validity_limit(spec)) + ")");
  return ks;
}

}  // namespace

double CantorSpec::dimension() const { return std::log(branching) / std::log(1.0 / contraction); }

void CantorSpec::validate() const {
  if (branching < 2) throw SpecError("branching must be >= 2");
  if (!(contraction > 0.0) || contraction * branching > 1.0 + 1e-15)
    throw SpecError("contraction must lie in (0, 1/N]");
  if (depth < 0) throw SpecError("depth must be >= 0");
  if (mode != OffsetMode::Deterministic) return;
  if (offsets.size() != static_cast<std::size_t>(branching))
    throw SpecError("need one offset per child");
  std::vector<double> sorted = offsets;
  std::sort(sorted.begin(), sorted.end());
  for (double o : sorted)
    if (o < 0.0 || o > 1.0 - contraction + 1e-15) throw SpecError("offset outside [0, 1 - contraction]");
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i] - sorted[i - 1] < contraction - 1e-15) throw SpecError("child intervals overlap");
}

CantorSpec middle_thirds_spec(int depth) {
  CantorSpec s;
  s.depth = depth;
  return s;
}

CantorSpec uniform_spec(int depth) {
  CantorSpec s;
  s.contraction = 0.5;
  s.offsets = {0.0, 0.5};
  s.depth = depth;
  return s;
}

CantorSpec random_spec(int branching, double contraction, int depth, std::uint64_t seed,
                       OffsetMode mode) {
  CantorSpec s;
  s.branching = branching;
  s.contraction = contraction;
  s.mode = mode;
  s.offsets.clear();
  s.depth = depth;
  s.seed = seed;
  return s;
}

double DiscreteMeasure::total_mass() const {
  double s = 0.0;
  for (double m : masses) s += m;
  return s;
}

DiscreteMeasure build_cantor(const CantorSpec& spec) {
  spec.validate();
  const auto n = static_cast<std::size_t>(spec.branching);
  const double slack = 1.0 / spec.branching - spec.contraction;
  std::vector<double> starts{0.0};
  double length = 1.0;
  for (int level = 0; level < spec.depth; ++level) {
    std::vector<double> next;
    next.reserve(starts.size() * n);
    std::vector<double> level_offsets(n);
    for (std::size_t i = 0; i < n; ++i)
      level_offsets[i] = spec.mode == OffsetMode::Deterministic
                             ? spec.offsets[i]
                             : static_cast<double>(i) / spec.branching +
                                   slack * counter_uniform(spec.seed, level, 0, i);
    for (std::size_t iv = 0; iv < starts.size(); ++iv) {
      for (std::size_t i = 0; i < n; ++i) {
        double o = level_offsets[i];
        if (spec.mode == OffsetMode::RandomPerInterval)
          o = static_cast<double>(i) / spec.branching +
              slack * counter_uniform(spec.seed, level, iv, i);
        next.push_back(starts[iv] + length * o);
      }
    }
    starts = std::move(next);
    length *= spec.contraction;
  }
  DiscreteMeasure mu;
  mu.spec = spec;
  mu.atoms.reserve(starts.size());
  for (double s : starts) mu.atoms.push_back(s + 0.5 * length);
  mu.masses.assign(starts.size(), 1.0 / static_cast<double>(starts.size()));
  return mu;
}

std::complex<double> fourier_transform(const DiscreteMeasure& mu, double xi) {
  std::complex<double> sum = 0.0;
  for (std::size_t a = 0; a < mu.size(); ++a) sum += std::polar(mu.masses[a], -mu.atoms[a] * xi);
  return sum;
}

std::vector<std::complex<double>> fourier_transform(const DiscreteMeasure& mu,
                                                    std::span<const double> xi, int threads) {
  std::vector<std::complex<double>> out(xi.size());
  parallel_for(
      xi.size(), [&](std::size_t i) { out[i] = fourier_transform(mu, xi[i]); }, threads);
  return out;
}

std::vector<std::complex<double>> fourier_transform_uniform(const DiscreteMeasure& mu, double xi0,
                                                            double h, std::size_t n, int threads) {
  std::vector<std::complex<double>> out(n, 0.0);
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  parallel_for(
      chunks,
      [&](std::size_t c) {
        const std::size_t lo = c * kChunk;
        const std::size_t hi = std::min(n, lo + kChunk);
        const double start = xi0 + h * static_cast<double>(lo);
        for (std::size_t a = 0; a < mu.size(); ++a) {
          std::complex<double> z = std::polar(mu.masses[a], -mu.atoms[a] * start);
          const std::complex<double> w = std::polar(1.0, -mu.atoms[a] * h);
          for (std::size_t p = lo; p < hi; ++p) {
            out[p] += z;
            z *= w;
          }
        }
      },
      threads);
  return out;
}

int validity_limit(const CantorSpec& spec) {
  const double log2_limit = std::log2(0.1) + spec.depth * std::log2(1.0 / spec.contraction);
  return static_cast<int>(std::floor(log2_limit + 1e-12));
}

BetaFit decay_exponent_fit(const DiscreteMeasure& mu, const DecayOptions& options) {
  return moment_decay_check(mu, 0, 0, options).front().fit;
}

DiscreteMeasure moment_measure(const DiscreteMeasure& mu, int j) {
  if (j < 0 || j > 8) throw DomainError("moment order must lie in [0, 8]");
  DiscreteMeasure out = mu;
  for (std::size_t a = 0; a < out.size(); ++a) out.masses[a] *= std::pow(out.atoms[a], j);
  return out;
}

std::vector<MomentDecayRow> moment_decay_check(const DiscreteMeasure& mu, int j_lo, int j_hi,
                                               const DecayOptions& options) {
  if (j_lo < 0 || j_hi > 8 || j_lo > j_hi) throw DomainError("moment range must lie in [0, 8]");
  const std::vector<int> ks = fit_window(mu.spec, options);
  std::vector<std::vector<double>> weights;
  for (int j = j_lo; j <= j_hi; ++j) weights.push_back(moment_measure(mu, j).masses);
  const std::size_t sets = weights.size();

  std::vector<std::vector<double>> sups(sets);
  for (int k : ks) {
    const double lo = std::ldexp(1.0, k);
    const auto n = static_cast<std::size_t>(std::ceil(lo / options.spacing));
    const auto s = uniform_grid_sups(mu.atoms, weights, lo, options.spacing, n, options.threads);
    for (std::size_t i = 0; i < sets; ++i) sups[i].push_back(s[i]);
  }
  std::vector<MomentDecayRow> rows;
  for (std::size_t i = 0; i < sets; ++i) {
    MomentDecayRow row;
    row.j = j_lo + static_cast<int>(i);
    double at_zero = 0.0;
    for (double w : weights[i]) at_zero += w;
    row.sup_norm = std::max(std::abs(at_zero), *std::max_element(sups[i].begin(), sups[i].end()));
    row.fit = fit_sups(ks, sups[i]);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace decaylab
