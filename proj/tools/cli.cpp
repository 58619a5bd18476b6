#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#include <unistd.h>

#include "CLI11.hpp"
#include "decaylab/acceptance.hpp"
#include "decaylab/bessel.hpp"
#include "decaylab/cantor.hpp"
#include "decaylab/decay_probe.hpp"
#include "decaylab/errors.hpp"
#include "decaylab/fbi.hpp"
#include "decaylab/io.hpp"
#include "decaylab/parallel.hpp"
#include "decaylab/sphere_transform.hpp"
#include "decaylab/tomas_stein.hpp"

#ifndef DECAYLAB_VERSION
#define DECAYLAB_VERSION "unknown"
#endif

namespace decaylab::cli {

namespace {

/// Bad configuration values; reported with exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string out;
  std::string format = "csv";
  std::uint64_t seed = 0;
  int threads = default_thread_count();
  bool quick = false;
  bool full = false;

  Tier tier() const { return quick ? Tier::Quick : Tier::Full; }
};

struct Output {
  std::string anchor;
  Json config = Json::object();
  Table table;
  Json summary;
  std::vector<std::pair<std::string, Table>> extra;
  std::vector<CheckResult> checks;

  void check(const std::string& name, bool ok, const std::string& detail = {}) {
    checks.push_back({name, ok, detail});
  }
};

std::vector<int> parse_multi_index(const std::string& text, int d) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || v < 0)
      throw ConfigError("--alpha: entry '" + item + "' is not a non-negative integer");
    out.push_back(v);
  }
  if (out.empty()) out.assign(static_cast<std::size_t>(d), 0);
  if (static_cast<int>(out.size()) != d)
    throw ConfigError("--alpha: expected " + std::to_string(d) + " entries, got " + std::to_string(out.size()));
  return out;
}

Json common_config(const Common& c) {
  return Json{{"format", c.format}, {"tier", c.quick ? "quick" : "full"}, {"threads", c.threads}};
}

// --- bessel-table ------------------------------------------------------------

Output bessel_table(int k_max) {
  if (k_max < 0 || k_max > kMaxTableOrder)
    throw ConfigError("--kmax must lie in [0, " + std::to_string(kMaxTableOrder) + "]");
  Output o;
  o.anchor = "Bessel quotient derivative recurrences";
  o.config["kmax"] = k_max;
  const CoeffTable t = coeff_tables(k_max);
  o.table.columns = {"j", "k", "a", "b"};
  Json a = Json::array(), b = Json::array();
  bool diagonal = true, boundary = true, positive = true;
  for (int j = 0; j <= k_max; ++j) {
    Json ra = Json::array(), rb = Json::array();
    for (int k = 0; k <= k_max; ++k) {
      ra.push_back(k >= j ? t.a(j, k).str() : "0");
      rb.push_back(k >= j ? t.b(j, k).str() : "0");
      if (k < j) continue;
      o.table.add_row({static_cast<long long>(j), static_cast<long long>(k), t.a(j, k).str(), t.b(j, k).str()});
      positive = positive && t.a(j, k) > 0 && t.b(j, k) > 0;
    }
    a.push_back(std::move(ra));
    b.push_back(std::move(rb));
  }
  for (int k = 0; k <= k_max; ++k) {
    diagonal = diagonal && t.a(k, k) == 1 && t.b(k, k) == 1;
    if (k >= 1) boundary = boundary && t.a(0, k) == t.b(0, k - 1);
  }
  o.summary = Json{{"k_max", k_max}, {"a", std::move(a)}, {"b", std::move(b)}};
  o.check("diagonal_ones", diagonal);
  o.check("a0k_equals_b0k-1", boundary);
  o.check("positive", positive);
  return o;
}

// --- sphere-ft ---------------------------------------------------------------

Output sphere_ft(int d, double rho_max, int samples) {
  if (d < 2) throw ConfigError("--d must be >= 2");
  if (!(rho_max > 0.0) || samples < 2) throw ConfigError("--rho-max must be positive and --samples >= 2");
  Output o;
  o.anchor = "sphere transform as a Bessel quotient";
  o.config.update({{"d", d}, {"rho_max", rho_max}, {"samples", samples}});
  o.table.columns = {"rho", "value"};
  for (int i = 0; i < samples; ++i) {
    const double rho = rho_max * i / (samples - 1);
    o.table.add_row({rho, sigma_hat(d, rho)});
  }
  const double area = surface_area(d);
  const double at_zero = sigma_hat_exact(d, 0.0);
  o.check("value_at_zero_is_area", std::abs(at_zero - area) <= 1e-12 * area,
          "exact(0)=" + format_real(at_zero) + " area=" + format_real(area));
  const double ratio = sigma_hat(d, 1.0) / sigma_hat_exact(d, 1.0);
  const double expected = std::pow(2.0, 1.0 - 0.5 * d);
  o.summary = Json{{"normalization_ratio", ratio}};
  o.check("constant_ratio_2^(1-d/2)", std::abs(ratio - expected) <= 1e-12 * expected, format_real(ratio));
  return o;
}

// --- lq-scan -----------------------------------------------------------------

Output lq_scan(int d, std::vector<double> qs, int threads) {
  if (d < 2 || d > 3) throw UnsupportedDimension(d);
  const double thr = lq_threshold(d);
  if (qs.empty()) qs = {thr - 1.0, thr - 0.5, thr, thr + 0.5, thr + 1.0, thr + 2.0};
  for (double q : qs)
    if (!(q >= 1.0)) throw ConfigError("--q: entries must be >= 1");
  Output o;
  o.anchor = "sphere transform L^q threshold 2d/(d-1)";
  o.config.update({{"d", d}, {"q", qs}});
  LqScanOptions opts;
  opts.threads = threads;
  const auto rows = lq_threshold_scan(d, qs, opts);
  o.table.columns = {"q", "classification", "growth_exponent"};
  for (const auto& r : rows) {
    o.table.add_row({r.q, to_string(r.classification), r.growth_exponent});
    const LqClass want = r.q <= thr ? LqClass::Divergent : LqClass::Convergent;
    o.check("q=" + format_real(r.q) + " " + to_string(want), r.classification == want);
  }
  o.summary = Json{{"threshold", thr}};
  return o;
}

// --- gevrey-fit --------------------------------------------------------------

Output gevrey_fit(int d, double q, int k_max, int threads) {
  if (d < 2 || d > 3) throw UnsupportedDimension(d);
  if (k_max < 4 || k_max > 12) throw ConfigError("--kmax must lie in [4, 12]");
  Output o;
  o.anchor = "sphere transform Gevrey-1 membership";
  o.config.update({{"d", d}, {"q", q}, {"kmax", k_max}});
  GevreyOptions opts;
  opts.threads = threads;
  const GevreyFit fit = gevrey_norm_sequence(d, q, k_max, coeff_tables(k_max + 4), opts);
  o.table.columns = {"k", "norm", "ratio"};
  for (std::size_t k = 0; k < fit.norms.size(); ++k)
    o.table.add_row({static_cast<long long>(k), fit.norms[k], k == 0 ? std::nan("") : fit.ratios[k]});
  o.summary = Json{{"C", fit.C}, {"A", fit.A}, {"s", fit.s}, {"first_k", fit.first_k}};
  o.check("s_at_most_1.15", fit.s <= 1.15, "s=" + format_real(fit.s));
  return o;
}

// --- dyadic-norms ------------------------------------------------------------

Output dyadic_norms(int d, const std::vector<int>& alpha, int k_max, int threads) {
  if (d < 2 || d > 3) throw UnsupportedDimension(d);
  if (k_max < 6 || k_max > 14) throw ConfigError("--kmax must lie in [6, 14]");
  Output o;
  o.anchor = "dyadic kernel estimates in the restriction proof";
  o.config.update({{"d", d}, {"alpha", alpha}, {"kmax", k_max}});
  const int k_lo = 4;
  const std::size_t n = static_cast<std::size_t>(k_max - k_lo + 1);
  std::vector<double> xs(n), n1(n), n22(n), ann(n);
  parallel_for(
      n,
      [&](std::size_t i) {
        const int k = k_lo + static_cast<int>(i);
        xs[i] = std::ldexp(1.0, k);
        n1[i] = op_norm_1_inf(build_kernel(d, alpha, k));
        n22[i] = op_norm_2_2(d, alpha, k).value;
        ann[i] = annulus_integral(d, k, d);
      },
      threads);
  o.table.columns = {"k", "norm_1_inf", "norm_2_2", "annulus_value"};
  for (std::size_t i = 0; i < n; ++i) o.table.add_row({static_cast<long long>(k_lo + i), n1[i], n22[i], ann[i]});
  const double s1 = fit_loglog(xs, n1).slope, s22 = fit_loglog(xs, n22).slope, sa = fit_loglog(xs, ann).slope;
  o.summary = Json{{"slope_1_inf", s1}, {"slope_2_2", s22}, {"slope_annulus", sa}};
  if (std::all_of(alpha.begin(), alpha.end(), [](int a) { return a == 0; })) {
    const double half = 0.5 * (d - 1);
    o.check("slope_1_inf", std::abs(s1 + half) <= 0.07, format_real(s1));
    o.check("slope_annulus", std::abs(sa + 2.0 * half) <= 0.05, format_real(sa));
    o.check("slope_2_2", s22 <= 1.1, format_real(s22));
  }
  return o;
}

// --- restriction-scan --------------------------------------------------------

Output restriction_scan(int d, std::vector<double> ps, Tier tier) {
  if (d != 2) throw UnsupportedDimension(d);
  if (ps.empty()) ps = {1.05, 1.1, 1.15, 1.25, 1.35};
  for (double p : ps)
    if (!(p >= 1.0 && p <= 2.0)) throw ConfigError("--p: entries must lie in [1, 2]");
  Output o;
  o.anchor = "sharpness of the restriction exponent";
  o.config.update({{"d", d}, {"p", ps}});
  std::vector<TrialFunction> trials{gaussian_trial()};
  for (double delta : {0.5, 0.25, 0.125}) trials.push_back(knapp_trial(delta));
  TrialGrid grid;
  if (tier == Tier::Quick) grid.points_per_axis = 384;
  o.table.columns = {"p", "empirical_ratio_max", "exponent_stated", "exponent_direct", "summable"};
  bool agree = true;
  for (double p : ps) {
    const RestrictionResult r = restriction_empirical(d, p, trials, grid);
    const double ep = interpolation_exponent(d, p, ExponentVariant::Stated);
    const double ed = interpolation_exponent(d, p, ExponentVariant::Direct);
    agree = agree && ((ep > 0.0) == (ed > 0.0));
    o.table.add_row({p, r.max_ratio, ep, ed, ed > 0.0});
  }
  o.summary = Json{{"threshold", restriction_threshold(d)}, {"grid", grid.points_per_axis}};
  o.check("exponent_signs_agree", agree);
  return o;
}

// --- salem-build / salem-decay -------------------------------------------------

struct CantorArgs {
  std::string kind = "random";
  std::string offsets = "per-interval";
  int branching = 4;
  double contraction = 1.0 / 16.0;
  int depth = 0;
};

CantorSpec cantor_spec(const CantorArgs& a, std::uint64_t seed) {
  if (a.kind == "middle-thirds") return middle_thirds_spec(a.depth > 0 ? a.depth : 12);
  if (a.kind == "uniform") return uniform_spec(a.depth > 0 ? a.depth : 16);
  const OffsetMode mode = a.offsets == "per-level" ? OffsetMode::RandomPerLevel : OffsetMode::RandomPerInterval;
  return random_spec(a.branching, a.contraction, a.depth > 0 ? a.depth : 5, seed, mode);
}

Json cantor_config(const CantorArgs& a, const CantorSpec& s) {
  return Json{{"kind", a.kind},         {"offsets", a.offsets},   {"branching", s.branching},
              {"contraction", s.contraction}, {"depth", s.depth}};
}

Output salem_build(const CantorArgs& a, std::uint64_t seed) {
  const CantorSpec spec = cantor_spec(a, seed);
  if (spec.depth > 24 || std::pow(spec.branching, spec.depth) > 2e7)
    throw ConfigError("--depth: more than 2e7 atoms requested");
  const DiscreteMeasure mu = build_cantor(spec);
  Output o;
  o.anchor = "Cantor and Salem measures";
  o.config = cantor_config(a, spec);
  o.table.columns = {"index", "atom", "mass"};
  bool inside = true;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    o.table.add_row({static_cast<long long>(i), mu.atoms[i], mu.masses[i]});
    inside = inside && mu.atoms[i] >= 0.0 && mu.atoms[i] <= 1.0;
  }
  o.summary = Json{{"atoms", std::to_string(mu.size())}, {"dimension", spec.dimension()}};
  o.check("total_mass_one", std::abs(mu.total_mass() - 1.0) < 1e-12, format_real(mu.total_mass()));
  o.check("atoms_in_unit_interval", inside);
  return o;
}

Output salem_decay(const CantorArgs& a, std::uint64_t seed, int k_lo, int k_hi, int threads) {
  const CantorSpec spec = cantor_spec(a, seed);
  const DiscreteMeasure mu = build_cantor(spec);
  const BetaFit fit = decay_exponent_fit(mu, {k_lo, k_hi, 0.5, threads});
  Output o;
  o.anchor = "Fourier decay of Cantor and Salem measures";
  o.config = cantor_config(a, spec);
  o.config.update({{"kmin", k_lo}, {"kmax", k_hi}});
  o.table.columns = {"k", "annulus_sup", "beta_hat"};
  for (std::size_t i = 0; i < fit.ks.size(); ++i)
    o.table.add_row({static_cast<long long>(fit.ks[i]), fit.sups[i], fit.beta_hat});
  const double alpha = spec.dimension();
  o.summary = Json{{"dimension", alpha},
                   {"beta_hat", fit.beta_hat},
                   {"beta_lo", fit.beta_lo},
                   {"beta_hi", fit.beta_hi},
                   {"r_squared", fit.fit.r_squared},
                   {"validity_limit", validity_limit(spec)}};
  if (fit.beta_hat > 0.0 && alpha < 1.0 && fit.beta_hat <= 2.0 * alpha) {
    const double p_max = salem_threshold(alpha, fit.beta_hat);
    o.summary["p_max"] = p_max;
    o.check("p_max_in_(1,2]", p_max > 1.0 && p_max <= 2.0, format_real(p_max));
  } else {
    o.summary["p_max"] = nullptr;
    o.summary["p_max_note"] = "beta_hat outside (0, 2 alpha] or alpha = 1";
  }
  return o;
}

// --- decay-probe -------------------------------------------------------------

[[noreturn]] void spec_fail(const std::string& where, const std::string& what) {
  throw ConfigError("decay-probe spec " + where + ": " + what);
}

void allow_keys(const Json& obj, const std::string& where, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) spec_fail(where, "expected an object");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* k : keys) known = known || item.key() == k;
    if (!known) spec_fail(where + "." + item.key(), "unknown key");
  }
}

template <class T>
T get_or(const Json& obj, const std::string& where, const char* key, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    spec_fail(where + "." + key, "wrong type");
  }
}

Json load_spec(const std::string& text_or_path) {
  std::string text = text_or_path;
  if (!text.empty() && text.front() != '{') {
    std::ifstream in(text_or_path);
    if (!in) throw ConfigError("decay-probe: cannot read spec file " + text_or_path);
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError("decay-probe spec: parse error at line " + std::to_string(line) + ", column " +
                      std::to_string(col));
  }
}

DistributionRep build_distribution(const Json& j) {
  const std::string w = "distribution";
  allow_keys(j, w, {"variant", "dimension", "a", "index", "resolution", "location", "gamma", "scale", "cantor"});
  const std::string variant = get_or<std::string>(j, w, "variant", "");
  const int d = get_or<int>(j, w, "dimension", 2);
  if (variant == "gaussian") return gaussian_distribution(d, get_or<double>(j, w, "a", 1.0));
  if (variant == "constant_one") return constant_one(d);
  if (variant == "coordinate") return coordinate_distribution(d, get_or<int>(j, w, "index", 0));
  if (variant == "lorentzian") return lorentzian_distribution();
  if (variant == "surface") return surface_measure(d, get_or<int>(j, w, "resolution", 96));
  if (variant == "point_mass") {
    auto location = get_or<std::vector<double>>(j, w, "location", std::vector<double>(d, 0.0));
    auto gamma = get_or<std::vector<int>>(j, w, "gamma", std::vector<int>(d, 0));
    auto scale = get_or<std::vector<double>>(j, w, "scale", {1.0, 0.0});
    if (scale.size() != 2) spec_fail(w + ".scale", "expected [re, im]");
    return point_mass_derivative(std::move(location), MultiIndex(std::move(gamma)), Complex(scale[0], scale[1]));
  }
  if (variant == "cantor") {
    const Json c = j.value("cantor", Json::object());
    allow_keys(c, w + ".cantor", {"kind", "depth", "seed"});
    CantorArgs a;
    a.kind = get_or<std::string>(c, w + ".cantor", "kind", "middle-thirds");
    a.depth = get_or<int>(c, w + ".cantor", "depth", 10);
    return cantor_distribution(build_cantor(cantor_spec(a, get_or<std::uint64_t>(c, w + ".cantor", "seed", 0))));
  }
  spec_fail(w + ".variant", "unknown variant '" + variant + "'");
}

Output decay_probe(const std::string& spec_text, int threads) {
  const Json spec = load_spec(spec_text);
  allow_keys(spec, "root", {"distribution", "pair", "directions", "apertures_deg", "expect"});
  if (!spec.contains("distribution")) spec_fail("root", "missing 'distribution'");
  const DistributionRep t = build_distribution(spec["distribution"]);
  const int d = t.dimension();

  const Json pj = spec.value("pair", Json::object());
  allow_keys(pj, "pair", {"max_order", "q", "A"});
  const ParameterPair pair = full_parameter_pair(d, get_or<int>(pj, "pair", "max_order", 1),
                                                 get_or<double>(pj, "pair", "q", 2.0),
                                                 get_or<double>(pj, "pair", "A", 1.0));

  std::vector<Direction> dirs;
  const Json dj = spec.value("directions", Json(8));
  if (dj.is_number_integer()) {
    dirs = standard_directions(d, dj.get<int>());
  } else if (dj.is_array()) {
    for (std::size_t i = 0; i < dj.size(); ++i) {
      const std::string where = "directions[" + std::to_string(i) + "]";
      if (dj[i].is_string() && dj[i] == "zero") {
        dirs.push_back(Direction::zero());
        continue;
      }
      std::vector<double> v;
      try {
        v = dj[i].get<std::vector<double>>();
      } catch (const nlohmann::json::exception&) {
        spec_fail(where, "expected \"zero\" or a vector");
      }
      double n = 0.0;
      for (double x : v) n += x * x;
      if (static_cast<int>(v.size()) != d || !(n > 0.0)) spec_fail(where, "need a nonzero vector of length d");
      for (double& x : v) x /= std::sqrt(n);
      dirs.push_back(Direction{v});
    }
  } else {
    spec_fail("directions", "expected a count or a list");
  }
  const auto apertures = get_or<std::vector<double>>(spec, "root", "apertures_deg", {30.0});

  Output o;
  o.anchor = "Fourier wavefront set of a distribution with decay";
  o.config = spec;
  o.table.columns = {"aperture_deg", "direction", "verdict", "slope", "r_squared"};
  DecayProbeOptions opts;
  opts.threads = threads;
  Json fits = Json::array();
  for (double deg : apertures) {
    if (!(deg > 0.0 && deg < 180.0)) spec_fail("apertures_deg", "entries must lie in (0, 180)");
    const WavefrontSet wf = wavefront_scan(t, pair, dirs, deg * std::numbers::pi / 180.0, opts);
    for (const auto& f : wf.fits) {
      o.table.add_row({deg, f.direction, to_string(f.verdict.verdict), f.verdict.fit.slope, f.verdict.fit.r_squared});
      fits.push_back({{"aperture_deg", deg},
                      {"direction", f.direction},
                      {"scales", f.scales},
                      {"aggregate", f.aggregate},
                      {"norm_exponent", f.norm_exponent}});
    }
    Json flagged = wf.flagged;
    o.summary["flagged"][format_real(deg)] = flagged;
    o.summary["undecided"][format_real(deg)] = wf.undecided;
    if (spec.contains("expect")) {
      std::vector<std::string> expect;
      try {
        expect = spec["expect"].get<std::vector<std::string>>();
      } catch (const nlohmann::json::exception&) {
        spec_fail("expect", "expected a list of direction labels");
      }
      o.check("flagged@" + format_real(deg), wf.flagged == expect && wf.undecided.empty());
    }
  }
  o.summary["fits"] = std::move(fits);
  return o;
}

// --- fbi-check ---------------------------------------------------------------

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + format_real(v[i]);
  return s;
}

Output fbi_check(int d_only, int samples, std::uint64_t seed) {
  if (d_only != 0 && d_only != 1 && d_only != 2) throw UnsupportedDimension(d_only);
  if (samples < 1 || samples > 100000) throw ConfigError("--samples must lie in [1, 100000]");
  Output o;
  o.anchor = "FBI constant independent of x";
  o.config.update({{"d", d_only}, {"samples", samples}});
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> box(-10.0, 10.0);
  const PointFn one = [](std::span<const double>) { return Complex(1.0); };
  o.table.columns = {"sample", "d", "x", "xi", "residual", "numeric_residual"};
  double worst = 0.0, worst_numeric = 0.0;
  for (int s = 0; s < samples; ++s) {
    for (int d = 1; d <= 2; ++d) {
      std::vector<double> x(d), xi(d), origin(d, 0.0);
      for (int i = 0; i < d; ++i) {
        x[i] = box(gen);
        xi[i] = box(gen) / 3.0;
      }
      if (d_only != 0 && d != d_only) continue;
      const Complex c = fbi_constant(x, xi);
      const double res = std::abs(c - fbi_constant(origin, xi));
      const double num = s < 10 ? std::abs(fbi_numeric(one, x, xi) - c) : std::nan("");
      worst = std::max(worst, res);
      if (s < 10) worst_numeric = std::max(worst_numeric, num);
      o.table.add_row({static_cast<long long>(s), static_cast<long long>(d), join(x), join(xi), res, num});
    }
  }
  o.check("x_independence_below_1e-12", worst < 1e-12, format_real(worst));
  o.check("numeric_below_1e-6", worst_numeric < 1e-6, format_real(worst_numeric));

  Table curve;
  curve.columns = {"t", "associated_value", "argmax"};
  const WeightSequence m = power_weights(64);
  for (int i = 1; i <= 16; ++i) {
    const double t = std::exp(0.25 * i);
    const AssociatedValue v = associated_function(m, t, 60);
    curve.add_row({t, v.value, static_cast<long long>(v.argmax)});
  }
  o.extra.emplace_back("associated", std::move(curve));
  o.summary = Json{{"max_residual", worst}, {"max_numeric_residual", worst_numeric}, {"weights", "p^p"}};
  return o;
}

// --- verify-all --------------------------------------------------------------

Output verify_all(const Common& c, std::vector<int> ids) {
  const int last = c.quick ? kLibraryCriteria : kCriterionCount;
  if (ids.empty())
    for (int i = 1; i <= last; ++i) ids.push_back(i);
  for (int id : ids)
    if (id < 1 || id > last)
      throw ConfigError("--criterion " + std::to_string(id) + " outside 1.." + std::to_string(last));
  AcceptanceOptions opts;
  opts.tier = c.tier();
  opts.threads = c.threads;
  opts.seed = c.seed;
  Output o;
  o.anchor = "acceptance criteria";
  o.config.update({{"criteria", ids}, {"tolerances", opts.tol.to_json()}});
  std::vector<CriterionResult> results;
  for (int id : ids) {
    CriterionResult r = id == kCriterionCount ? determinism_check(c.threads) : run_criterion(id, opts);
    std::cerr << format_line(r) << '\n';
    o.check("criterion " + std::to_string(id) + " " + r.name, r.passed, r.detail);
    results.push_back(std::move(r));
  }
  o.table = results_table(results);
  return o;
}

// --- emit --------------------------------------------------------------------

std::string sibling(const std::string& out, const std::string& suffix) { return out + "." + suffix; }

int emit(const std::string& subcommand, const Common& c, Output o, double seconds) {
  RunManifest m;
  m.tool_version = DECAYLAB_VERSION;
  m.subcommand = subcommand;
  m.anchor = o.anchor;
  m.config = std::move(o.config);
  const Json common = common_config(c);
  for (const auto& item : common.items()) m.config[item.key()] = item.value();
  m.seed = c.seed;
  m.checks = o.checks;
  m.wall_seconds = seconds;

  if (c.format == "json") {
    Json summary = o.summary;
    for (const auto& [name, table] : o.extra) summary["tables"][name] = to_json(table);
    write_text(c.out, to_json_document(m, &o.table, summary));
  } else {
    const bool to_stdout = c.out.empty() || c.out == "-";
    std::string body = to_csv(o.table);
    for (const auto& [name, table] : o.extra) {
      if (to_stdout) body += "\n" + to_csv(table);
      else write_text(sibling(c.out, name + ".csv"), to_csv(table));
    }
    write_text(c.out, body);
    const std::string doc = to_json_document(m, nullptr, o.summary);
    if (to_stdout) std::cerr << doc;
    else write_text(sibling(c.out, "manifest.json"), doc);
  }
  std::cerr << subcommand << ": wall time " << format_real(std::round(seconds * 1000.0) / 1000.0) << " s\n";
  const auto failed = m.failed();
  for (const auto& f : failed) std::cerr << "failed check: " << f << '\n';
  return failed.empty() ? 0 : 2;
}

void add_common(CLI::App* sub, Common& c, bool tiers) {
  sub->add_option("--out", c.out, "Output path; '-' or empty for standard output");
  sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  sub->add_option("--seed", c.seed, "64-bit seed")->capture_default_str();
  sub->add_option("--threads", c.threads, "Worker threads")->check(CLI::Range(1, 1024))->capture_default_str();
  if (tiers) {
    auto* q = sub->add_flag("--quick", c.quick, "Reduced resolution");
    auto* f = sub->add_flag("--full", c.full, "Full resolution (default)");
    q->excludes(f);
  }
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"decaylab: numerical experiments on restriction with moments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", DECAYLAB_VERSION);

  Common c;
  int d = 2;
  double q = 5.0;
  std::vector<double> qs, ps;
  std::string alpha;
  int k_max = -1, k_min = 8, samples = 0, fbi_d = 0;
  double rho_max = 50.0;
  std::string spec;
  std::vector<int> criteria;
  CantorArgs cantor;

  auto* bt = app.add_subcommand("bessel-table", "Exact derivative coefficient tables a_jk, b_jk");
  bt->add_option("--kmax", k_max, "Largest k (default 10)");
  add_common(bt, c, false);

  auto* sf = app.add_subcommand("sphere-ft", "Transform of the sphere surface measure on a radial grid");
  sf->add_option("--d", d)->capture_default_str();
  sf->add_option("--rho-max", rho_max)->capture_default_str();
  sf->add_option("--samples", samples, "Grid points (default 201)");
  add_common(sf, c, false);

  auto* lq = app.add_subcommand("lq-scan", "Classify the L^q integrability of the sphere transform");
  lq->add_option("--d", d)->capture_default_str();
  lq->add_option("--q", qs, "Exponents (comma list)")->delimiter(',');
  add_common(lq, c, false);

  auto* gf = app.add_subcommand("gevrey-fit", "Fit C A^k k^{ks} to the L^q derivative norms");
  gf->add_option("--d", d)->capture_default_str();
  gf->add_option("--q", q)->capture_default_str();
  gf->add_option("--kmax", k_max, "Largest derivative order (default 8)");
  add_common(gf, c, false);

  auto* dn = app.add_subcommand("dyadic-norms", "Operator norms of the dyadic restriction kernels");
  dn->add_option("--d", d)->capture_default_str();
  dn->add_option("--alpha", alpha, "Multi-index as a comma list (default zero)");
  dn->add_option("--kmax", k_max, "Largest scale (default 12, quick 10)");
  add_common(dn, c, true);

  auto* rs = app.add_subcommand("restriction-scan", "Empirical restriction ratios and interpolation exponents");
  rs->add_option("--d", d)->capture_default_str();
  rs->add_option("--p", ps, "Exponents (comma list)")->delimiter(',');
  add_common(rs, c, true);

  auto add_cantor = [&](CLI::App* sub) {
    sub->add_option("--kind", cantor.kind)->check(CLI::IsMember({"middle-thirds", "uniform", "random"}))->capture_default_str();
    sub->add_option("--offsets", cantor.offsets)->check(CLI::IsMember({"per-interval", "per-level"}))->capture_default_str();
    sub->add_option("--branching", cantor.branching)->check(CLI::Range(2, 64))->capture_default_str();
    sub->add_option("--contraction", cantor.contraction)->capture_default_str();
    sub->add_option("--depth", cantor.depth, "Construction depth (default by kind: 12, 16, 5)");
  };
  auto* sb = app.add_subcommand("salem-build", "Atoms and masses of a Cantor-type measure");
  add_cantor(sb);
  add_common(sb, c, false);

  auto* sd = app.add_subcommand("salem-decay", "Fourier decay exponent of a Cantor-type measure");
  add_cantor(sd);
  sd->add_option("--kmin", k_min)->capture_default_str();
  sd->add_option("--kmax", k_max, "Last dyadic annulus (default 14)");
  add_common(sd, c, false);

  auto* dp = app.add_subcommand("decay-probe", "Directional decay verdicts and wavefront scan");
  dp->add_option("--spec", spec, "JSON spec: inline object or file path")->required();
  add_common(dp, c, false);

  auto* fc = app.add_subcommand("fbi-check", "FBI constant x-independence and associated function");
  fc->add_option("--d", fbi_d, "1, 2, or 0 for both")->capture_default_str();
  fc->add_option("--samples", samples, "Random (x, xi) pairs (default 100)");
  add_common(fc, c, false);

  auto* va = app.add_subcommand("verify-all", "Run the acceptance criteria");
  va->add_option("--criterion", criteria, "Restrict to these criteria (comma list)")->delimiter(',');
  add_common(va, c, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, std::cout, std::cerr);
    return code == 0 ? 0 : 1;
  }

  const auto start = std::chrono::steady_clock::now();
  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  try {
    Output o;
    if (sub == bt) o = bessel_table(k_max < 0 ? 10 : k_max);
    else if (sub == sf) o = sphere_ft(d, rho_max, samples > 0 ? samples : 201);
    else if (sub == lq) o = lq_scan(d, qs, c.threads);
    else if (sub == gf) o = gevrey_fit(d, q, k_max < 0 ? 8 : k_max, c.threads);
    else if (sub == dn)
      o = dyadic_norms(d, parse_multi_index(alpha, d), k_max < 0 ? (c.quick ? 10 : 12) : k_max, c.threads);
    else if (sub == rs) o = restriction_scan(d, ps, c.tier());
    else if (sub == sb) o = salem_build(cantor, c.seed);
    else if (sub == sd) o = salem_decay(cantor, c.seed, k_min, k_max < 0 ? 14 : k_max, c.threads);
    else if (sub == dp) o = decay_probe(spec, c.threads);
    else if (sub == fc) o = fbi_check(fbi_d, samples > 0 ? samples : 100, c.seed);
    else o = verify_all(c, criteria);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return emit(name, c, std::move(o), seconds);
  } catch (const ConfigError& e) {
    std::cerr << name << ": " << e.what() << '\n';
    return 1;
  } catch (const SpecError& e) {
    std::cerr << name << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << name << ": error: " << e.what() << '\n';
    return 1;
  }
}

int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"decaylab"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

CriterionResult determinism_check(int threads) {
  CriterionResult r = describe_criterion(kCriterionCount);
  const auto start = std::chrono::steady_clock::now();
  const auto dir = std::filesystem::temp_directory_path();
  const std::string stem = "decaylab-determinism-" + std::to_string(::getpid());
  std::string bytes[2];
  int codes[2] = {0, 0};
  for (int i = 0; i < 2; ++i) {
    const std::string path = (dir / (stem + "-" + std::to_string(i) + ".json")).string();
    codes[i] = run({"verify-all", "--quick", "--seed", "0", "--format", "json", "--threads",
                    std::to_string(threads), "--out", path});
    std::ifstream in(path, std::ios::binary);
    bytes[i].assign(std::istreambuf_iterator<char>(in), {});
    std::filesystem::remove(path);
  }
  r.passed = !bytes[0].empty() && bytes[0] == bytes[1] && codes[0] == codes[1] && codes[0] != 1;
  r.detail = "bytes=" + std::to_string(bytes[0].size()) + "/" + std::to_string(bytes[1].size()) +
             (bytes[0] == bytes[1] ? " identical" : " differ") + " exit=" + std::to_string(codes[0]) + "/" +
             std::to_string(codes[1]);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace decaylab::cli
