#pragma once

#include <string>
#include <vector>

#include "decaylab/acceptance.hpp"

namespace decaylab::cli {

/// Exit codes: 0 success, 2 failed checks, 1 usage or configuration error.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);

/// Runs `verify-all --quick --seed 0` twice in-process and compares the
/// JSON outputs byte for byte.
CriterionResult determinism_check(int threads);

}  // namespace decaylab::cli
