#include "decaylab/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "decaylab/bessel.hpp"
#include "decaylab/cantor.hpp"
#include "decaylab/decay_probe.hpp"
#include "decaylab/errors.hpp"
#include "decaylab/fbi.hpp"
#include "decaylab/parallel.hpp"
#include "decaylab/sphere_transform.hpp"
#include "decaylab/tomas_stein.hpp"

namespace decaylab {

namespace {

struct Outcome {
  bool passed = true;
  std::ostringstream detail;

  void require(bool ok) { passed = passed && ok; }
  Outcome& put(const std::string& key, double v) {
    if (detail.tellp() > 0) detail << ' ';
    detail << key << '=' << format_real(v);
    return *this;
  }
  Outcome& note(const std::string& s) {
    if (detail.tellp() > 0) detail << ' ';
    detail << s;
    return *this;
  }
};

double round_to(double x, int digits) {
  const double scale = std::pow(10.0, digits);
  return std::round(x * scale) / scale;
}

// --- 1: coefficient exactness ----------------------------------------------

void coefficient_exactness(Outcome& out) {
  const CoeffTable t = coeff_tables(40);
  int bad = 0;
  for (int k = 0; k <= 40; ++k) {
    if (t.a(k, k) != 1 || t.b(k, k) != 1) ++bad;
    if (k >= 1 && t.a(0, k) != t.b(0, k - 1)) ++bad;
    for (int j = 0; j <= k; ++j)
      if (t.a(j, k) <= 0 || t.b(j, k) <= 0) ++bad;
  }
  out.require(bad == 0);
  out.put("violations", bad);
}

// --- 2: derivative correctness ---------------------------------------------

using HighPrecision = boost::multiprecision::cpp_bin_float_100;

// Central n-th difference of f_m in 100-digit arithmetic. With h = 1e-8 the
// truncation error is O(h^2) and h^n leaves at least 36 digits for n <= 8.
double extended_difference(double m, int n, double r) {
  const HighPrecision h("1e-8");
  const HighPrecision mm(m);
  HighPrecision sum = 0;
  HighPrecision binom = 1;
  for (int i = 0; i <= n; ++i) {
    const HighPrecision x = HighPrecision(r) + (HighPrecision(n) / 2 - i) * h;
    const HighPrecision f = boost::math::cyl_bessel_j(mm, x) / pow(x, mm);
    sum += (i % 2 ? -binom : binom) * f;
    binom = binom * (n - i) / (i + 1);
  }
  return static_cast<double>(sum / pow(h, n));
}

void derivative_correctness(Outcome& out, const Tolerances& tol) {
  const CoeffTable t = coeff_tables(8);
  double worst = 0.0;
  std::string where;
  for (double m : {0.0, 0.5, 1.0, 1.5, 2.0})
    for (int n = 0; n <= 8; ++n)
      for (double r : {0.5, 1.0, 2.0, 5.0, 10.0, 30.0}) {
        const double oracle = extended_difference(m, n, r);
        const double err = std::abs(f_deriv(m, n, r, t) - oracle) / std::abs(oracle);
        if (!(err <= worst)) {
          worst = err;
          where = "m=" + format_real(m) + ",n=" + std::to_string(n) + ",r=" + format_real(r);
        }
      }
  out.require(worst < tol.deriv_rel);
  out.put("worst_rel", worst).note("at " + where);
}

// --- 3: coefficient growth -------------------------------------------------

void coefficient_growth(Outcome& out, const Tolerances& tol) {
  const CoeffTable t = coeff_tables(40);
  const FitResult fit = coeff_growth_check(t);
  const double a = std::exp(fit.slope);
  double max_ratio = 0.0;
  for (int k = 8; k <= 40; ++k) max_ratio = std::max(max_ratio, coeff_growth_ratio(t, k));
  out.require(fit.r_squared > tol.growth_r_squared);
  out.require(max_ratio <= tol.growth_slack * a);
  out.put("A", a).put("max_ratio", max_ratio).put("r2", fit.r_squared);
}

// --- 4: Bessel asymptotic residual -----------------------------------------

void bessel_asymptotic(Outcome& out, const Tolerances& tol) {
  for (double m : {0.0, 0.5, 1.0}) {
    const auto env =
        annulus_envelope([m](double r) { return bessel_j(m, r) - bessel_j_leading(m, r); }, 20.0, 2000.0);
    const FitResult fit = fit_envelope(env);
    out.require(std::abs(fit.slope - tol.bessel_slope) <= tol.bessel_slope_tol);
    out.put("slope_m" + format_real(m), fit.slope);
  }
}

// --- 5: L^q threshold ------------------------------------------------------

void lq_threshold(Outcome& out, int threads) {
  LqScanOptions opts;
  opts.threads = threads;
  struct Case {
    int d;
    std::vector<double> divergent;
    std::vector<double> convergent;
  };
  for (const Case& c : {Case{2, {3.0, 3.5}, {4.5, 5.0, 6.0}}, Case{3, {2.5}, {3.5}}}) {
    std::vector<double> grid = c.divergent;
    grid.insert(grid.end(), c.convergent.begin(), c.convergent.end());
    const auto rows = lq_threshold_scan(c.d, grid, opts);
    for (const auto& row : rows) {
      const bool want_div =
          std::find(c.divergent.begin(), c.divergent.end(), row.q) != c.divergent.end();
      const LqClass want = want_div ? LqClass::Divergent : LqClass::Convergent;
      out.require(row.classification == want);
      out.note("d" + std::to_string(c.d) + "q" + format_real(row.q) + "=" + to_string(row.classification));
    }
  }
}

// --- 6: Gevrey-1 growth ----------------------------------------------------

void gevrey_growth(Outcome& out, const Tolerances& tol, int threads) {
  GevreyOptions opts;
  opts.threads = threads;
  const GevreyFit fit = gevrey_norm_sequence(2, 5.0, 8, coeff_tables(12), opts);
  const double base = fit.ratios[4];
  double tail_max = 0.0;
  for (std::size_t k = 4; k < fit.ratios.size(); ++k) tail_max = std::max(tail_max, fit.ratios[k]);
  out.require(fit.s <= tol.gevrey_s_max);
  out.require(std::isfinite(tail_max) && tail_max <= tol.gevrey_ratio_slack * base);
  out.put("s", fit.s).put("ratio_k4", base).put("ratio_max_k4_8", tail_max);
}

// --- 7: dyadic bounds ------------------------------------------------------

void dyadic_bounds(Outcome& out, const Tolerances& tol, Tier tier, int threads) {
  const int zero[2] = {0, 0};
  const int k_lo = 4, k_hi = 12;
  const int k_hi_22 = tier == Tier::Quick ? 10 : 12;
  std::vector<double> xs, n1, ann;
  for (int k = k_lo; k <= k_hi; ++k) xs.push_back(std::ldexp(1.0, k));
  n1.resize(xs.size());
  ann.resize(xs.size());
  parallel_for(
      xs.size(),
      [&](std::size_t i) {
        const int k = k_lo + static_cast<int>(i);
        n1[i] = op_norm_1_inf(build_kernel(2, zero, k));
        ann[i] = annulus_integral(2, k, 2);
      },
      threads);
  std::vector<double> xs22(xs.begin(), xs.begin() + (k_hi_22 - k_lo + 1));
  std::vector<double> n22(xs22.size());
  parallel_for(
      xs22.size(), [&](std::size_t i) { n22[i] = op_norm_2_2(2, zero, k_lo + static_cast<int>(i)).value; },
      threads);
  const double s1 = fit_loglog(xs, n1).slope;
  const double sa = fit_loglog(xs, ann).slope;
  const double s22 = fit_loglog(xs22, n22).slope;
  out.require(std::abs(s1 - tol.norm_1_inf_slope) <= tol.norm_1_inf_tol);
  out.require(std::abs(sa - tol.annulus_slope) <= tol.annulus_tol);
  out.require(s22 <= tol.norm_2_2_slope_max);
  out.put("slope_1_inf", s1).put("slope_annulus", sa).put("slope_2_2", s22);
  out.note("k_2_2=4.." + std::to_string(k_hi_22));
}

// --- 8: threshold consistency ----------------------------------------------

double exponent_root(int d, ExponentVariant v) {
  auto f = [d, v](double p) { return interpolation_exponent(d, p, v); };
  std::uintmax_t iters = 200;
  const auto tol = boost::math::tools::eps_tolerance<double>(52);
  const auto [lo, hi] = boost::math::tools::toms748_solve(f, 1.0, 2.0, tol, iters);
  return 0.5 * (lo + hi);
}

void threshold_consistency(Outcome& out, const Tolerances& tol) {
  double worst = 0.0;
  for (int d = 2; d <= 10; ++d) {
    const double target = 2.0 * (d + 1) / (d + 3);
    const double stated = exponent_root(d, ExponentVariant::Stated);
    const double direct = exponent_root(d, ExponentVariant::Direct);
    worst = std::max({worst, std::abs(stated - target), std::abs(direct - target), std::abs(stated - direct)});
  }
  const Rational salem = salem_threshold(Rational(1, 2), Rational(1, 2));
  out.require(worst < tol.threshold_root_tol);
  out.require(salem == Rational(6, 5));
  out.put("worst_root_gap", worst);
  out.note("salem=" + std::to_string(salem.numerator()) + "/" + std::to_string(salem.denominator()));
}

// --- 9: Knapp dichotomy ----------------------------------------------------

void knapp_dichotomy(Outcome& out, const Tolerances& tol, Tier tier) {
  const double deltas[] = {0.5, 0.5 / std::numbers::sqrt2, 0.25, 0.25 / std::numbers::sqrt2, 0.125};
  std::vector<TrialFunction> trials;
  std::vector<double> inv;
  for (double d : deltas) {
    trials.push_back(knapp_trial(d));
    inv.push_back(1.0 / d);
  }
  TrialGrid grid;
  if (tier == Tier::Quick) grid.points_per_axis = 384;
  const RestrictionResult below = restriction_empirical(2, 1.1, trials, grid);
  const RestrictionResult above = restriction_empirical(2, 1.35, trials, grid);
  const double slope_below = fit_loglog(inv, below.ratios).slope;
  const double slope_above = fit_loglog(inv, above.ratios).slope;
  bool increasing = true;
  for (std::size_t i = 1; i < above.ratios.size(); ++i) increasing = increasing && above.ratios[i] > above.ratios[i - 1];
  out.require(slope_below <= tol.knapp_bounded_slope);
  out.require(increasing && slope_above > 0.0);
  out.put("slope_p1.1", slope_below).put("slope_p1.35", slope_above);
  out.note(increasing ? "increasing" : "not_increasing");
  out.put("grid", grid.points_per_axis);
}

// --- 10: Cantor / Salem decay ----------------------------------------------

void cantor_decay(Outcome& out, const Tolerances& tol, Tier tier, std::uint64_t seed, int threads) {
  const DecayOptions opts{8, 14, 0.5, threads};
  const double mid = decay_exponent_fit(build_cantor(middle_thirds_spec(12)), opts).beta_hat;
  const double uni = decay_exponent_fit(build_cantor(uniform_spec(16)), {4, 11, 0.5, threads}).beta_hat;
  const int seeds = tier == Tier::Quick ? 6 : 20;
  std::vector<double> avg(5, 0.0);
  for (int s = 0; s < seeds; ++s) {
    const auto mu = build_cantor(random_spec(4, 1.0 / 16.0, 5, seed + static_cast<std::uint64_t>(s)));
    const auto rows = moment_decay_check(mu, 0, 4, opts);
    for (std::size_t j = 0; j < rows.size(); ++j) avg[j] += rows[j].fit.beta_hat / seeds;
  }
  double shift = 0.0;
  for (std::size_t j = 1; j < avg.size(); ++j) shift = std::max(shift, std::abs(avg[j] - avg[0]));
  out.require(mid <= tol.middle_thirds_beta_max);
  out.require(std::abs(uni / 2.0 - 1.0) <= tol.uniform_half_beta_tol);
  out.require(avg[0] >= tol.random_beta_lo && avg[0] <= tol.random_beta_hi);
  out.require(shift < tol.moment_beta_shift);
  out.put("beta_middle_thirds", mid).put("half_beta_uniform", uni / 2.0);
  out.put("beta_random", avg[0]).put("max_moment_shift", shift).put("seeds", seeds);
}

// --- 11: wavefront exemplars -----------------------------------------------

void wavefront_exemplars(Outcome& out, int threads) {
  const ParameterPair p = full_parameter_pair(2, 1, 2.0);
  const auto dirs = standard_directions(2, 8);
  const std::string zero = Direction::zero().label();
  DecayProbeOptions opts;
  opts.threads = threads;
  struct Case {
    std::string name;
    DistributionRep t;
    std::vector<std::string> expected;
  };
  const std::vector<Case> cases{{"x1", coordinate_distribution(2, 0), {zero}},
                                {"one", constant_one(2), {zero}},
                                {"gaussian", gaussian_distribution(2), {}}};
  for (double deg : {10.0, 30.0, 60.0}) {
    for (const auto& c : cases) {
      const WavefrontSet wf = wavefront_scan(c.t, p, dirs, deg * std::numbers::pi / 180.0, opts);
      const bool ok = wf.flagged == c.expected && wf.undecided.empty();
      out.require(ok);
      std::string flagged;
      for (const auto& f : wf.flagged) flagged += (flagged.empty() ? "" : "+") + f;
      out.note(c.name + "@" + format_real(deg) + "={" + flagged + "}" + (wf.undecided.empty() ? "" : "?"));
    }
  }
}

// --- 12: FBI x-independence ------------------------------------------------

void fbi_independence(Outcome& out, const Tolerances& tol, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> box(-10.0, 10.0);
  double worst = 0.0, worst_numeric = 0.0;
  const PointFn one = [](std::span<const double>) { return Complex(1.0); };
  for (int t = 0; t < 100; ++t) {
    for (int d = 1; d <= 2; ++d) {
      std::vector<double> x(d), xi(d), origin(d, 0.0);
      for (int i = 0; i < d; ++i) {
        x[i] = box(gen);
        xi[i] = box(gen) / 3.0;
      }
      const Complex c = fbi_constant(x, xi);
      worst = std::max(worst, std::abs(c - fbi_constant(origin, xi)));
      if (t < 10) worst_numeric = std::max(worst_numeric, std::abs(fbi_numeric(one, x, xi) - c));
    }
  }
  out.require(worst < tol.fbi_x_independence);
  out.require(worst_numeric < tol.fbi_numeric);
  out.put("x_residual", worst).put("numeric_residual", worst_numeric);
}

struct Descriptor {
  const char* name;
  const char* anchor;
  double budget;
};

const Descriptor kDescriptors[kCriterionCount] = {
    {"coefficient exactness", "Bessel quotient derivative recurrences", 1.0},
    {"derivative correctness", "Bessel quotient derivative formula", 30.0},
    {"coefficient growth", "factorial-geometric coefficient bound", 0.0},
    {"Bessel asymptotic", "Bessel large-argument remainder", 10.0},
    {"L^q threshold", "sphere transform L^q threshold 2d/(d-1)", 120.0},
    {"Gevrey-1 growth", "sphere transform Gevrey-1 membership", 300.0},
    {"dyadic bounds", "dyadic kernel estimates in the restriction proof", 180.0},
    {"threshold consistency", "restriction exponent 2(d+1)/(d+3) and Salem threshold", 0.0},
    {"Knapp dichotomy", "sharpness of the restriction exponent", 600.0},
    {"Cantor decay", "Fourier decay of Cantor and Salem measures", 300.0},
    {"wavefront exemplars", "wavefront regularity at xi and at 0", 60.0},
    {"FBI x-independence", "FBI constant independent of x", 60.0},
    {"determinism", "reproducible verify-all output", 0.0},
};

}  // namespace

Json Tolerances::to_json() const {
  return Json{{"deriv_rel", deriv_rel},
              {"growth_r_squared", growth_r_squared},
              {"growth_slack", growth_slack},
              {"bessel_slope", bessel_slope},
              {"bessel_slope_tol", bessel_slope_tol},
              {"gevrey_s_max", gevrey_s_max},
              {"gevrey_ratio_slack", gevrey_ratio_slack},
              {"norm_1_inf_slope", norm_1_inf_slope},
              {"norm_1_inf_tol", norm_1_inf_tol},
              {"annulus_slope", annulus_slope},
              {"annulus_tol", annulus_tol},
              {"norm_2_2_slope_max", norm_2_2_slope_max},
              {"threshold_root_tol", threshold_root_tol},
              {"knapp_bounded_slope", knapp_bounded_slope},
              {"middle_thirds_beta_max", middle_thirds_beta_max},
              {"uniform_half_beta_tol", uniform_half_beta_tol},
              {"random_beta_lo", random_beta_lo},
              {"random_beta_hi", random_beta_hi},
              {"moment_beta_shift", moment_beta_shift},
              {"fbi_x_independence", fbi_x_independence},
              {"fbi_numeric", fbi_numeric}};
}

CriterionResult describe_criterion(int id) {
  if (id < 1 || id > kCriterionCount) throw DomainError("criterion id must lie in [1, 13]");
  const Descriptor& d = kDescriptors[id - 1];
  CriterionResult r;
  r.id = id;
  r.name = d.name;
  r.anchor = d.anchor;
  r.budget = d.budget;
  return r;
}

CriterionResult run_criterion(int id, const AcceptanceOptions& options) {
  if (id < 1 || id > kLibraryCriteria) throw DomainError("library criteria are 1..12");
  CriterionResult r = describe_criterion(id);
  const Tolerances& tol = options.tol;
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    switch (id) {
      case 1: coefficient_exactness(out); break;
      case 2: derivative_correctness(out, tol); break;
      case 3: coefficient_growth(out, tol); break;
      case 4: bessel_asymptotic(out, tol); break;
      case 5: lq_threshold(out, options.threads); break;
      case 6: gevrey_growth(out, tol, options.threads); break;
      case 7: dyadic_bounds(out, tol, options.tier, options.threads); break;
      case 8: threshold_consistency(out, tol); break;
      case 9: knapp_dichotomy(out, tol, options.tier); break;
      case 10: cantor_decay(out, tol, options.tier, options.seed, options.threads); break;
      case 11: wavefront_exemplars(out, options.threads); break;
      case 12: fbi_independence(out, tol, options.seed); break;
    }
  } catch (const std::exception& e) {
    out.passed = false;
    out.note(std::string("error: ") + e.what());
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.passed = out.passed;
  if (r.budget > 0.0 && r.seconds >= r.budget) {
    r.passed = false;
    out.note("over budget " + format_real(r.budget) + " s");
  }
  r.detail = out.detail.str();
  return r;
}

std::string format_line(const CriterionResult& r) {
  std::ostringstream s;
  s << (r.passed ? "PASS " : "FAIL ") << (r.id < 10 ? " " : "") << r.id << ' ' << r.name << ": "
    << r.detail << " (" << format_real(round_to(r.seconds, 2)) << " s)";
  return s.str();
}

Table results_table(const std::vector<CriterionResult>& results) {
  Table t;
  t.columns = {"id", "name", "anchor", "passed", "detail"};
  for (const auto& r : results)
    t.add_row({static_cast<long long>(r.id), r.name, r.anchor, r.passed, r.detail});
  return t;
}

}  // namespace decaylab
