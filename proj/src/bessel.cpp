#include "decaylab/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/factorials.hpp>

#include "decaylab/errors.hpp"

namespace decaylab {

namespace {

using DoublePolicy = boost::math::policies::policy<boost::math::policies::promote_double<false>>;

void check_order_and_radius(double m, double r) {
  if (!(m >= 0.0)) throw DomainError("Bessel order must be >= 0");
  if (!(r >= 0.0)) throw DomainError("Bessel argument must be >= 0");
}

// Neumaier-compensated sum of sum_j (-1)^j (r/2)^{2j} / (j! Gamma(j+m+1)),
// scaled by `lead`.
double quotient_series(double m, double r, double lead) {
  const double x = 0.25 * r * r;
  double term = lead;
  double sum = term;
  double comp = 0.0;
  for (int j = 1; j < 500; ++j) {
    term *= -x / (j * (j + m));
    const double t = sum + term;
    if (std::abs(sum) >= std::abs(term))
      comp += (sum - t) + term;
    else
      comp += (term - t) + sum;
    sum = t;
    if (std::abs(term) < 1e-18 * std::abs(sum) && j > x) break;
  }
  return sum + comp;
}

double quotient_at_zero(double m) { return std::exp(-m * std::numbers::ln2 - std::lgamma(m + 1.0)); }

}  // namespace

double bessel_j_series(double m, double r) {
  check_order_and_radius(m, r);
  if (r > kSeriesLimit)
    throw CapacityError("bessel_j_series: r=" + std::to_string(r) +
                        " exceeds the series limit; use bessel_j_asymptotic");
  if (r == 0.0) return m == 0.0 ? 1.0 : 0.0;
  // (r/2)^m / Gamma(m+1) folded into the leading term.
  const double lead = std::exp(m * std::log(0.5 * r) - std::lgamma(m + 1.0));
  return quotient_series(m, r, lead);
}

double bessel_j(double m, double r) {
  check_order_and_radius(m, r);
  if (r <= kSeriesSwitch) return bessel_j_series(m, r);
  return boost::math::cyl_bessel_j(m, r, DoublePolicy());
}

double bessel_j_fast(int n, double x) { return boost::math::cyl_bessel_j(n, x, DoublePolicy()); }

double bessel_j_leading(double m, double r) {
  if (!(r > 0.0)) throw DomainError("bessel_j_leading: r must be positive");
  const double w = r - 0.5 * m * std::numbers::pi - 0.25 * std::numbers::pi;
  return std::sqrt(2.0 / (std::numbers::pi * r)) * std::cos(w);
}

double bessel_j_asymptotic(double m, double r) {
  if (!(r > 0.0)) throw DomainError("bessel_j_asymptotic: r must be positive");
  const double w = r - 0.5 * m * std::numbers::pi - 0.25 * std::numbers::pi;
  const double mu = 4.0 * m * m;
  return std::sqrt(2.0 / (std::numbers::pi * r)) *
         (std::cos(w) - (mu - 1.0) / (8.0 * r) * std::sin(w));
}

double f_eval(double m, double r) {
  check_order_and_radius(m, r);
  if (r == 0.0) return quotient_at_zero(m);
  if (r <= kSeriesSwitch) return quotient_series(m, r, quotient_at_zero(m));
  return boost::math::cyl_bessel_j(m, r, DoublePolicy()) / std::pow(r, m);
}

CoeffTable::CoeffTable(int k_max) : k_max_(k_max) {
  if (k_max < 0 || k_max > kMaxTableOrder)
    throw DomainError("coeff_tables: k_max must lie in [0, " + std::to_string(kMaxTableOrder) + "]");
  a_.resize(static_cast<std::size_t>(k_max) + 1);
  b_.resize(static_cast<std::size_t>(k_max) + 1);
  for (int k = 0; k <= k_max; ++k) {
    auto& ak = a_[static_cast<std::size_t>(k)];
    auto& bk = b_[static_cast<std::size_t>(k)];
    ak.resize(static_cast<std::size_t>(k) + 1);
    bk.resize(static_cast<std::size_t>(k) + 1);
    if (k == 0) {
      ak[0] = 1;
    } else {
      const auto& prev = b_[static_cast<std::size_t>(k - 1)];
      ak[0] = prev[0];
      for (int j = 1; j < k; ++j)
        ak[static_cast<std::size_t>(j)] =
            (2 * j + 1) * prev[static_cast<std::size_t>(j)] + prev[static_cast<std::size_t>(j - 1)];
      ak[static_cast<std::size_t>(k)] = 1;
    }
    for (int j = 0; j < k; ++j)
      bk[static_cast<std::size_t>(j)] =
          2 * (j + 1) * ak[static_cast<std::size_t>(j + 1)] + ak[static_cast<std::size_t>(j)];
    bk[static_cast<std::size_t>(k)] = 1;
  }
}

const BigInt& CoeffTable::a(int j, int k) const {
  if (k < 0 || k > k_max_ || j < 0 || j > k) throw DomainError("CoeffTable::a index out of range");
  return a_[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
}

const BigInt& CoeffTable::b(int j, int k) const {
  if (k < 0 || k > k_max_ || j < 0 || j > k) throw DomainError("CoeffTable::b index out of range");
  return b_[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
}

CoeffTable coeff_tables(int k_max) { return CoeffTable(k_max); }

std::vector<DerivTerm> derivative_expansion(int n, const CoeffTable& table) {
  if (n < 0) throw DomainError("derivative order must be >= 0");
  if (n > 2 * table.k_max() + 1)
    throw CapacityError("derivative order " + std::to_string(n) + " needs k_max >= " +
                        std::to_string(n / 2) + ", table has " + std::to_string(table.k_max()));
  const int k = n / 2;
  std::vector<DerivTerm> terms;
  terms.reserve(static_cast<std::size_t>(k) + 1);
  for (int j = 0; j <= k; ++j) {
    DerivTerm t;
    if (n % 2 == 0) {
      t.sign = ((j + k) % 2 == 0) ? 1 : -1;
      t.coefficient = table.a(j, k);
      t.power = 2 * j;
      t.shift = k + j;
    } else {
      t.sign = ((j + k + 1) % 2 == 0) ? 1 : -1;
      t.coefficient = table.b(j, k);
      t.power = 2 * j + 1;
      t.shift = k + j + 1;
    }
    terms.push_back(std::move(t));
  }
  return terms;
}

double f_deriv(double m, std::span<const DerivTerm> terms, double r) {
  double sum = 0.0;
  for (const auto& t : terms) {
    const double c = t.coefficient.convert_to<double>();
    const double rp = t.power == 0 ? 1.0 : std::pow(r, t.power);
    sum += t.sign * c * rp * f_eval(m + t.shift, r);
  }
  return sum;
}

double f_deriv(double m, int n, double r, const CoeffTable& table) {
  const auto terms = derivative_expansion(n, table);
  return f_deriv(m, terms, r);
}

double coeff_column_max(const CoeffTable& table, int k) {
  BigInt best = 0;
  for (int j = 0; j <= k; ++j) best = std::max(best, table.a(j, k));
  return best.convert_to<double>();
}

double coeff_growth_ratio(const CoeffTable& table, int k) {
  if (k < 1) throw DomainError("coeff_growth_ratio: k must be >= 1");
  const double log_ratio = std::log(coeff_column_max(table, k)) - std::lgamma(k + 1.0);
  return std::exp(log_ratio / k);
}

FitResult coeff_growth_check(const CoeffTable& table) {
  if (table.k_max() < 10) throw CapacityError("coeff_growth_check needs k_max >= 10");
  std::vector<double> ks, logs;
  for (int k = 8; k <= table.k_max(); ++k) {
    ks.push_back(k);
    logs.push_back(std::log(coeff_column_max(table, k)) - std::lgamma(k + 1.0));
  }
  FitResult fit = fit_linear(ks, logs);
  fit.window = {8, static_cast<std::size_t>(table.k_max()) + 1};
  return fit;
}

std::vector<RadialPartialTerm> radial_partial_expansion(std::span<const int> alpha) {
  const std::size_t d = alpha.size();
  if (d == 0) throw DomainError("radial_partial_expansion: empty multi-index");
  using Key = std::pair<std::vector<int>, int>;
  std::map<Key, long long> current;
  current[{std::vector<int>(d, 0), 0}] = 1;
  for (std::size_t i = 0; i < d; ++i) {
    if (alpha[i] < 0) throw DomainError("radial_partial_expansion: negative multi-index entry");
    for (int step = 0; step < alpha[i]; ++step) {
      std::map<Key, long long> next;
      for (const auto& [key, c] : current) {
        const auto& [mono, shift] = key;
        if (mono[i] > 0) {
          auto lower = mono;
          lower[i] -= 1;
          next[{lower, shift}] += c * mono[i];
        }
        auto higher = mono;
        higher[i] += 1;
        next[{higher, shift + 1}] -= c;
      }
      std::erase_if(next, [](const auto& kv) { return kv.second == 0; });
      current = std::move(next);
    }
  }
  std::vector<RadialPartialTerm> out;
  out.reserve(current.size());
  for (const auto& [key, c] : current) out.push_back({c, key.first, key.second});
  return out;
}

double radial_partial_eval(double m, std::span<const RadialPartialTerm> terms,
                           std::span<const double> xi) {
  double r2 = 0.0;
  for (double x : xi) r2 += x * x;
  const double r = std::sqrt(r2);
  std::map<int, double> f_cache;
  double sum = 0.0;
  for (const auto& t : terms) {
    double mono = 1.0;
    for (std::size_t i = 0; i < t.monomial.size(); ++i)
      for (int p = 0; p < t.monomial[i]; ++p) mono *= xi[i];
    auto it = f_cache.find(t.shift);
    if (it == f_cache.end()) it = f_cache.emplace(t.shift, f_eval(m + t.shift, r)).first;
    sum += static_cast<double>(t.coefficient) * mono * it->second;
  }
  return sum;
}

}  // namespace decaylab
