#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fcoord/theorems.hpp"

namespace fcoord {

struct SuiteOptions {
  std::uint64_t seed = 7;
  /// Grid size for the fourier and derivative suites.
  std::optional<int> n;
  /// Keyed "suite.label"; replaces the default tolerance of that residual.
  std::map<std::string, double> tolerance_overrides;
};

/// Suite ids in the order `all` runs them.
const std::vector<std::string>& suite_ids();
bool is_suite_id(const std::string& id);

/// Runs one suite. Library errors raised inside a suite are recorded as a
/// failing "error" residual with the message in the notes.
VerificationReport run_suite(const std::string& id, const SuiteOptions& options = {});

/// Overrides keyed "<suite>.<label>" replace tolerances of `report`.
void apply_tolerance_overrides(VerificationReport& report, const std::string& suite,
                               const std::map<std::string, double>& overrides);

}  // namespace fcoord
