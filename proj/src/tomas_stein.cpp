#include "decaylab/tomas_stein.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "decaylab/bessel.hpp"
#include "decaylab/errors.hpp"
#include "decaylab/quad_core.hpp"
#include "decaylab/sphere_transform.hpp"

namespace decaylab {

namespace {

constexpr double kPi = std::numbers::pi;

double h_exp(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

void check_dimension(int d) {
  if (d != 2 && d != 3) throw UnsupportedDimension(d);
}

// Fourier coefficients c_n, n in [-(a+b), a+b], of cos^a(t) sin^b(t).
std::vector<std::complex<double>> trig_monomial_modes(int a, int b) {
  const int deg = a + b;
  std::vector<std::complex<double>> c(static_cast<std::size_t>(2 * deg + 1), 0.0);
  c[static_cast<std::size_t>(deg)] = 1.0;
  const auto multiply = [&](std::complex<double> plus, std::complex<double> minus) {
    std::vector<std::complex<double>> next(c.size(), 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c[i] == 0.0) continue;
      if (i + 1 < c.size()) next[i + 1] += c[i] * plus;
      if (i >= 1) next[i - 1] += c[i] * minus;
    }
    c = std::move(next);
  };
  for (int i = 0; i < a; ++i) multiply(0.5, 0.5);
  for (int i = 0; i < b; ++i) multiply(std::complex<double>(0.0, -0.5), std::complex<double>(0.0, 0.5));
  return c;
}

// Radial nodes covering the support of phi_k.
Grid1D kernel_radial_grid(int k) {
  const DyadicPartition part{2, std::max(k, 2)};
  const auto [lo, hi] = part.support(k);
  const int panels = std::max(8, static_cast<int>(std::ceil((hi - lo) / 0.5)));
  return composite_gauss_legendre(lo, hi, panels, 16);
}

struct ModeTerm {
  int n = 0;                      // Bessel order |n|
  std::complex<double> weight;    // coefficient times angular factor
  int theta_mode = 0;             // e^{i n theta_x}
  std::vector<double> radial;     // per radial node: w * phi_k * rho^{1+|mono|} * f_s
};

// Expansion of M(x) = int phi_k(xi) d^alpha S(xi) e^{-i x.xi} dxi for d = 2
// into sum over (term, mode) of weight e^{i n theta_x} int radial(rho) J_|n|(rho t).
std::vector<ModeTerm> planar_modes(std::span<const int> alpha, int k, const Grid1D& grid) {
  const DyadicPartition part{2, std::max(k, 2)};
  const double scale = 2.0 * kPi;  // (2 pi)^{d/2}, d = 2
  std::vector<ModeTerm> out;
  for (const auto& term : radial_partial_expansion(alpha)) {
    const int a = term.monomial[0], b = term.monomial[1];
    const auto modes = trig_monomial_modes(a, b);
    std::vector<double> radial(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double rho = grid.nodes[i];
      radial[i] = grid.weights[i] * part.member(k, rho) * std::pow(rho, 1 + a + b) *
                  f_eval(static_cast<double>(term.shift), rho);
    }
    const int deg = a + b;
    for (int n = -deg; n <= deg; ++n) {
      const std::complex<double> c = modes[static_cast<std::size_t>(n + deg)];
      if (std::abs(c) < 1e-15) continue;
      const int an = std::abs(n);
      std::complex<double> phase = 1.0;
      for (int i = 0; i < an; ++i) phase *= std::complex<double>(0.0, -1.0);
      out.push_back({an, scale * static_cast<double>(term.coefficient) * c * 2.0 * kPi * phase, n, radial});
    }
  }
  return out;
}

double radial_bessel_sum(const std::vector<double>& radial, const Grid1D& grid, int n, double t) {
  double s = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    s += radial[i] * bessel_j_fast(n, grid.nodes[i] * t);
  return s;
}

// Graded Gauss-Legendre integral of g over [0, hi] refined geometrically
// towards 0 down to scale `fine`.
double graded_integral(const ScalarFn& g, double hi, double fine) {
  double total = integrate_panels(g, 0.0, std::min(fine, hi), 1, 16);
  for (double lo = fine; lo < hi; lo *= 2.0) total += integrate_panels(g, lo, std::min(2.0 * lo, hi), 2, 16);
  return total;
}

}  // namespace

MultiIndex::MultiIndex(std::vector<int> e) : entries(std::move(e)) {
  for (int v : entries)
    if (v < 0) throw DomainError("multi-index entries must be nonnegative");
}

MultiIndex MultiIndex::unit(int d, int i) {
  MultiIndex m = zero(d);
  m.entries.at(static_cast<std::size_t>(i)) = 1;
  return m;
}

int MultiIndex::order() const noexcept {
  int s = 0;
  for (int v : entries) s += v;
  return s;
}

bool MultiIndex::contained_in(const MultiIndex& other) const {
  if (other.entries.size() != entries.size()) return false;
  for (std::size_t i = 0; i < entries.size(); ++i)
    if (entries[i] > other.entries[i]) return false;
  return true;
}

std::string to_string(const MultiIndex& a) {
  std::string s = "(";
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(a.entries[i]);
  }
  return s + ")";
}

double plateau(double s) {
  if (s <= 1.0) return 1.0;
  if (s >= 2.0) return 0.0;
  const double up = h_exp(2.0 - s);
  return up / (up + h_exp(s - 1.0));
}

double DyadicPartition::phi(double r) const { return plateau(r) - plateau(2.0 * r); }

double DyadicPartition::member(int k, double r) const {
  if (k < 0) throw DomainError("partition index must be >= 0");
  if (k == 0) return plateau(r);
  return phi(std::ldexp(r, -k));
}

double DyadicPartition::sum(double r) const {
  double s = 0.0;
  for (int k = 0; k <= k_max; ++k) s += member(k, r);
  return s;
}

std::pair<double, double> DyadicPartition::support(int k) const {
  if (k == 0) return {0.0, 2.0};
  return {std::ldexp(1.0, k - 1), std::ldexp(1.0, k + 1)};
}

DyadicPartition build_partition(int d, int k_max) {
  if (d < 1) throw UnsupportedDimension(d);
  if (k_max < 2 || k_max > 14) throw DomainError("build_partition: k_max must lie in [2, 14]");
  return {d, k_max};
}

DyadicKernel build_kernel(int d, std::span<const int> alpha, int k, const KernelGrid& grid) {
  check_dimension(d);
  if (static_cast<int>(alpha.size()) != d) throw DomainError("build_kernel: multi-index length must equal d");
  const DyadicPartition part{d, std::max(k, 2)};
  const auto terms = radial_partial_expansion(alpha);
  const double scale = std::pow(2.0 * kPi, 0.5 * d);
  const double m = sphere_order(d);
  const bool radial = std::all_of(alpha.begin(), alpha.end(), [](int v) { return v == 0; });

  std::vector<std::vector<double>> directions;
  if (radial) {
    std::vector<double> e(static_cast<std::size_t>(d), 0.0);
    e[0] = 1.0;
    directions.push_back(e);
  } else if (d == 2) {
    for (int i = 0; i < grid.angles; ++i) {
      const double t = 2.0 * kPi * i / grid.angles;
      directions.push_back({std::cos(t), std::sin(t)});
    }
  } else {
    const SphereQuadrature rule = sphere_rule(3, 8);
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const auto p = rule.point(i);
      directions.emplace_back(p.begin(), p.end());
    }
  }

  DyadicKernel kernel;
  kernel.dimension = d;
  kernel.alpha.assign(alpha.begin(), alpha.end());
  kernel.k = k;
  const auto [lo, hi_support] = part.support(k);
  const double hi = std::min(hi_support, grid.max_radius);
  if (hi < lo) return kernel;
  const int steps = static_cast<int>(std::floor((hi - lo) / grid.radial_step));
  std::vector<double> xi(static_cast<std::size_t>(d));
  for (int s = 0; s <= steps; ++s) {
    const double r = lo + s * grid.radial_step;
    const double w = part.member(k, r);
    if (w == 0.0) continue;
    for (const auto& dir : directions) {
      for (int i = 0; i < d; ++i) xi[static_cast<std::size_t>(i)] = r * dir[static_cast<std::size_t>(i)];
      kernel.points.insert(kernel.points.end(), xi.begin(), xi.end());
      kernel.values.push_back(w * scale * radial_partial_eval(m, terms, xi));
    }
  }
  return kernel;
}

double op_norm_1_inf(const DyadicKernel& kernel) {
  double best = 0.0;
  for (double v : kernel.values) best = std::max(best, std::abs(v));
  return best;
}

std::complex<double> dyadic_multiplier_transform(int d, std::span<const int> alpha, int k,
                                                 std::span<const double> x) {
  check_dimension(d);
  if (static_cast<int>(alpha.size()) != d || static_cast<int>(x.size()) != d)
    throw DomainError("dyadic_multiplier_transform: length mismatch");
  const Grid1D grid = kernel_radial_grid(k);
  double t2 = 0.0;
  for (double v : x) t2 += v * v;
  const double t = std::sqrt(t2);
  if (d == 3) {
    if (std::any_of(alpha.begin(), alpha.end(), [](int v) { return v != 0; }))
      throw DomainError("dyadic_multiplier_transform: d = 3 supports alpha = 0 only");
    const DyadicPartition part{3, std::max(k, 2)};
    double s = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double rho = grid.nodes[i];
      const double sinc = t == 0.0 ? 1.0 : std::sin(rho * t) / (rho * t);
      s += grid.weights[i] * part.member(k, rho) * sigma_hat_exact(3, rho) * 4.0 * kPi * sinc * rho * rho;
    }
    return s;
  }
  const double theta = std::atan2(x[1], x[0]);
  std::complex<double> total = 0.0;
  for (const auto& mode : planar_modes(alpha, k, grid))
    total += mode.weight * std::polar(1.0, mode.theta_mode * theta) *
             radial_bessel_sum(mode.radial, grid, mode.n, t);
  return total;
}

OpNormResult op_norm_2_2(int d, std::span<const int> alpha, int k, double resolution) {
  check_dimension(d);
  if (static_cast<int>(alpha.size()) != d) throw DomainError("op_norm_2_2: multi-index length must equal d");
  if (k < 0) throw DomainError("op_norm_2_2: k must be >= 0");
  const bool radial = std::all_of(alpha.begin(), alpha.end(), [](int v) { return v == 0; });
  if (d == 3 && !radial) throw DomainError("op_norm_2_2: d = 3 supports alpha = 0 only");
  const double needed = std::ldexp(1.0, k + 2);
  if (resolution <= 0.0) resolution = needed;
  if (resolution < needed)
    throw CapacityError("op_norm_2_2: resolution " + std::to_string(resolution) +
                        " cannot resolve scale 2^-" + std::to_string(k) + " (need >= " +
                        std::to_string(needed) + ")");

  const Grid1D grid = kernel_radial_grid(k);
  const DyadicPartition part{d, std::max(k, 2)};

  // Value as a function of (t, theta) with the radial factors cached.
  std::vector<ModeTerm> modes;
  std::vector<double> radial3;
  if (d == 2) {
    modes = planar_modes(alpha, k, grid);
  } else {
    radial3.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double rho = grid.nodes[i];
      radial3[i] = grid.weights[i] * part.member(k, rho) * sigma_hat_exact(3, rho) * 4.0 * kPi * rho * rho;
    }
  }
  constexpr int kThetaSamples = 64;
  struct Sample {
    double value = 0.0;
    double theta = 0.0;
  };
  const auto evaluate = [&](double t) -> Sample {
    if (d == 3) {
      double s = 0.0;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const double z = grid.nodes[i] * t;
        s += radial3[i] * (z == 0.0 ? 1.0 : std::sin(z) / z);
      }
      return {std::abs(s), 0.0};
    }
    std::vector<std::complex<double>> parts(modes.size());
    for (std::size_t j = 0; j < modes.size(); ++j)
      parts[j] = modes[j].weight * radial_bessel_sum(modes[j].radial, grid, modes[j].n, t);
    Sample best;
    const int thetas = radial ? 1 : kThetaSamples;
    for (int a = 0; a < thetas; ++a) {
      const double th = 2.0 * kPi * a / thetas;
      std::complex<double> v = 0.0;
      for (std::size_t j = 0; j < modes.size(); ++j) v += parts[j] * std::polar(1.0, modes[j].theta_mode * th);
      if (std::abs(v) > best.value) best = {std::abs(v), th};
    }
    return best;
  };

  const double half = std::ldexp(1.0, 3 - k);
  const double lo = std::max(0.0, 1.0 - half);
  const double hi = 1.0 + half;
  const int n = std::max(3, static_cast<int>(std::ceil((hi - lo) * resolution)));
  double best_t = lo;
  Sample best;
  for (int i = 0; i <= n; ++i) {
    const double t = lo + (hi - lo) * i / n;
    const Sample s = evaluate(t);
    if (s.value > best.value) {
      best = s;
      best_t = t;
    }
  }
  // Golden-section refinement inside the bracketing cell.
  const double cell = (hi - lo) / n;
  double a = std::max(lo, best_t - cell), b = std::min(hi, best_t + cell);
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a), e = a + g * (b - a);
  Sample fc = evaluate(c), fe = evaluate(e);
  for (int it = 0; it < 40 && b - a > 1e-3 * cell; ++it) {
    if (fc.value > fe.value) {
      b = e;
      e = c;
      fe = fc;
      c = b - g * (b - a);
      fc = evaluate(c);
    } else {
      a = c;
      c = e;
      fc = fe;
      e = a + g * (b - a);
      fe = evaluate(e);
    }
  }
  const Sample& refined = fc.value > fe.value ? fc : fe;
  const double refined_t = fc.value > fe.value ? c : e;
  if (refined.value > best.value) {
    best = refined;
    best_t = refined_t;
  }

  OpNormResult result;
  result.value = best.value;
  result.argmax.assign(static_cast<std::size_t>(d), 0.0);
  result.argmax[0] = best_t * std::cos(best.theta);
  result.argmax[1] = best_t * std::sin(best.theta);
  result.distance_to_sphere = std::abs(best_t - 1.0);
  return result;
}

double annulus_integral(int d, int k, int N) {
  check_dimension(d);
  if (N < d) throw DomainError("annulus_integral: N must be >= d");
  const double scale = std::ldexp(1.0, k);
  const double fine = std::min(1.0, 1.0 / scale);
  if (d == 2) {
    // Arc length parameter theta in [0, pi], doubled by symmetry.
    const ScalarFn g = [&](double th) { return std::pow(1.0 + scale * 2.0 * std::sin(0.5 * th), -N); };
    return 2.0 * graded_integral(g, kPi, fine);
  }
  // Chordal distance s in [0, 2]: dsigma = 2 pi s ds.
  const ScalarFn g = [&](double s) { return 2.0 * kPi * s * std::pow(1.0 + scale * s, -N); };
  return graded_integral(g, 2.0, fine);
}

double interpolation_exponent(int d, double p, ExponentVariant variant) {
  if (d < 2) throw UnsupportedDimension(d);
  if (!(p >= 1.0 && p <= 2.0)) throw DomainError("interpolation_exponent: p must lie in [1, 2]");
  const double num = 2.0 * (d + 1) - p * (d + 3);
  return variant == ExponentVariant::Stated ? num / p : num / (2.0 * p);
}

double restriction_threshold(int d) {
  if (d < 2) throw UnsupportedDimension(d);
  return 2.0 * (d + 1) / (d + 3.0);
}

double salem_threshold(double alpha, double beta) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("salem_threshold: alpha must lie in (0, 1)");
  if (!(beta > 0.0 && beta <= 2.0 * alpha)) throw DomainError("salem_threshold: beta must lie in (0, 2 alpha]");
  return 2.0 * (2.0 - 2.0 * alpha + beta) / (4.0 * (1.0 - alpha) + beta);
}

Rational salem_threshold(const Rational& alpha, const Rational& beta) {
  if (!(alpha > 0 && alpha < 1)) throw DomainError("salem_threshold: alpha must lie in (0, 1)");
  if (!(beta > 0 && beta <= 2 * alpha)) throw DomainError("salem_threshold: beta must lie in (0, 2 alpha]");
  return Rational(2) * (Rational(2) - 2 * alpha + beta) / (Rational(4) * (Rational(1) - alpha) + beta);
}

TrialFunction gaussian_trial(double eta1, double eta2) {
  TrialFunction t;
  t.label = (eta1 == 0.0 && eta2 == 0.0) ? "gaussian" : "modulated_gaussian";
  t.f = [eta1, eta2](double x1, double x2) {
    return std::polar(std::exp(-0.5 * (x1 * x1 + x2 * x2)), eta1 * x1 + eta2 * x2);
  };
  t.spectral_center1 = eta1;
  t.spectral_center2 = eta2;
  return t;
}

TrialFunction knapp_trial(double delta) {
  if (!(delta > 0.0 && delta <= 1.0)) throw DomainError("knapp_trial: delta must lie in (0, 1]");
  TrialFunction t;
  t.label = "knapp_" + std::to_string(delta);
  const double d2 = delta * delta;
  t.f = [delta, d2](double x1, double x2) {
    const double u = d2 * x1, v = delta * x2;
    return std::polar(std::exp(-0.5 * (u * u + v * v)), x1);
  };
  t.scale1 = 1.0 / d2;
  t.scale2 = 1.0 / delta;
  t.spectral_center1 = 1.0;
  t.spectral_width1 = d2;
  t.spectral_width2 = delta;
  return t;
}

double TrialEvaluation::lp_norm(double p) const {
  if (!(p >= 1.0)) throw DomainError("lp_norm: p must be >= 1");
  double s = 0.0;
  for (double m : magnitudes) s += std::pow(m, p);
  return std::pow(cell_area * s, 1.0 / p);
}

TrialEvaluation evaluate_trial(const TrialFunction& trial, const TrialGrid& grid) {
  const int n = grid.points_per_axis;
  if (n < 16) throw CapacityError("evaluate_trial: at least 16 points per axis required");
  const double half1 = grid.box_sigmas * trial.scale1;
  const double half2 = grid.box_sigmas * trial.scale2;
  const double h1 = 2.0 * half1 / n, h2 = 2.0 * half2 / n;
  const auto check_alias = [&](double h, double center, double width, const char* axis) {
    const double reach = std::abs(center) + grid.box_sigmas * width;
    if (2.0 * kPi / h - reach <= 1.0)
      throw CapacityError(std::string("evaluate_trial: grid too coarse on axis ") + axis + " for " + trial.label);
  };
  check_alias(h1, trial.spectral_center1, trial.spectral_width1, "1");
  check_alias(h2, trial.spectral_center2, trial.spectral_width2, "2");

  std::vector<double> x1(static_cast<std::size_t>(n)), x2(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    x1[static_cast<std::size_t>(i)] = -half1 + (i + 0.5) * h1;
    x2[static_cast<std::size_t>(i)] = -half2 + (i + 0.5) * h2;
  }
  Eigen::MatrixXcd F(n, n);
  TrialEvaluation out;
  out.label = trial.label;
  out.cell_area = h1 * h2;
  out.magnitudes.resize(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const auto v = trial.f(x1[static_cast<std::size_t>(i)], x2[static_cast<std::size_t>(j)]);
      F(i, j) = v;
      out.magnitudes[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)] = std::abs(v);
    }

  const double w_min = std::min(trial.spectral_width1, trial.spectral_width2);
  const int nodes = std::max(grid.min_sphere_nodes, static_cast<int>(std::ceil(4.0 * kPi / w_min)));
  out.sphere_nodes = nodes;
  Eigen::MatrixXcd A(nodes, n), B(n, nodes);
  for (int s = 0; s < nodes; ++s) {
    const double th = 2.0 * kPi * s / nodes;
    const double c = std::cos(th), sn = std::sin(th);
    for (int i = 0; i < n; ++i) A(s, i) = std::polar(1.0, -x1[static_cast<std::size_t>(i)] * c);
    for (int j = 0; j < n; ++j) B(j, s) = std::polar(1.0, -x2[static_cast<std::size_t>(j)] * sn);
  }
  const Eigen::MatrixXcd FB = F * B;
  const double w = 2.0 * kPi / nodes;
  double l2 = 0.0;
  for (int s = 0; s < nodes; ++s) {
    const std::complex<double> fhat = (A.row(s) * FB.col(s)).value() * out.cell_area;
    l2 += w * std::norm(fhat);
  }
  out.sphere_l2 = std::sqrt(l2);
  return out;
}

RestrictionResult restriction_empirical(int d, double p, std::span<const TrialFunction> trials,
                                        const TrialGrid& grid) {
  if (d != 2) throw UnsupportedDimension(d);
  if (trials.empty()) throw DomainError("restriction_empirical: empty trial dictionary");
  RestrictionResult r;
  r.p = p;
  for (const auto& t : trials) {
    const double v = evaluate_trial(t, grid).ratio(p);
    r.ratios.push_back(v);
    if (v > r.max_ratio) {
      r.max_ratio = v;
      r.argmax = t.label;
    }
  }
  return r;
}

}  // namespace decaylab
