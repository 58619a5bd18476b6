#pragma once

// Acceptance criteria 1..12 as pass/fail checks with pinned tolerances.
// Criterion 13 (byte determinism of verify-all) lives with the CLI.

#include <cstdint>
#include <string>
#include <vector>

#include "decaylab/io.hpp"

namespace decaylab {

enum class Tier { Quick, Full };

inline constexpr int kLibraryCriteria = 12;
inline constexpr int kCriterionCount = 13;

struct Tolerances {
  double deriv_rel = 1e-5;
  double growth_r_squared = 0.98;
  double growth_slack = 1.05;
  double bessel_slope = -1.5;
  double bessel_slope_tol = 0.1;
  double gevrey_s_max = 1.15;
  double gevrey_ratio_slack = 1.25;
  double norm_1_inf_slope = -0.5;
  double norm_1_inf_tol = 0.07;
  double annulus_slope = -1.0;
  double annulus_tol = 0.05;
  double norm_2_2_slope_max = 1.1;
  double threshold_root_tol = 1e-12;
  double knapp_bounded_slope = 0.05;
  double middle_thirds_beta_max = 0.05;
  double uniform_half_beta_tol = 0.05;
  double random_beta_lo = 0.35;
  double random_beta_hi = 0.6;
  double moment_beta_shift = 0.15;
  double fbi_x_independence = 1e-12;
  double fbi_numeric = 1e-6;

  Json to_json() const;
};

struct AcceptanceOptions {
  Tier tier = Tier::Full;
  int threads = 1;
  std::uint64_t seed = 0;
  Tolerances tol;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  std::string anchor;
  bool passed = false;
  std::string detail;
  /// Wall time; never serialized into run outputs.
  double seconds = 0.0;
  /// Runtime budget in seconds for the full tier.
  double budget = 0.0;
};

/// Name and anchor of criterion id in 1..13.
CriterionResult describe_criterion(int id);

/// Runs one of criteria 1..12. A criterion whose check throws is reported as
/// failed with the exception text.
CriterionResult run_criterion(int id, const AcceptanceOptions& options);

/// "PASS  3 name: detail (1.2 s)".
std::string format_line(const CriterionResult& r);

/// Table with columns (id, name, anchor, passed, detail).
Table results_table(const std::vector<CriterionResult>& results);

}  // namespace decaylab
