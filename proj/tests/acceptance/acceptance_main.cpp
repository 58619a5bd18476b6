// Acceptance runner: one PASS/FAIL line per criterion, exit 0 only when every
// selected criterion passes.

#include <iostream>
#include <vector>

#include "CLI11.hpp"
#include "cli.hpp"
#include "decaylab/acceptance.hpp"
#include "decaylab/parallel.hpp"

int main(int argc, char** argv) {
  CLI::App app{"decaylab acceptance criteria"};
  std::vector<int> ids;
  decaylab::AcceptanceOptions opts;
  bool quick = false;
  opts.threads = decaylab::default_thread_count();
  app.add_option("--criterion", ids, "Criteria to run (default all)")
      ->delimiter(',')
      ->check(CLI::Range(1, decaylab::kCriterionCount));
  app.add_flag("--quick", quick, "Reduced resolution");
  app.add_option("--threads", opts.threads)->check(CLI::Range(1, 1024));
  app.add_option("--seed", opts.seed);
  CLI11_PARSE(app, argc, argv);
  opts.tier = quick ? decaylab::Tier::Quick : decaylab::Tier::Full;
  if (ids.empty())
    for (int i = 1; i <= decaylab::kCriterionCount; ++i) ids.push_back(i);

  int failures = 0;
  for (int id : ids) {
    const decaylab::CriterionResult r = id == decaylab::kCriterionCount
                                            ? decaylab::cli::determinism_check(opts.threads)
                                            : decaylab::run_criterion(id, opts);
    std::cout << decaylab::format_line(r) << std::endl;
    if (!r.passed) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
