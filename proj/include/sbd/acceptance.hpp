#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

namespace sbd {

/// Outcome of one acceptance criterion: pinned tolerances, observed
/// statistics and pass/fail. Details are free-form but deterministic
/// given the seed (no timing, no machine state), so suite reports can be
/// compared byte for byte.
struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  nlohmann::json details;
};

struct SuiteResult {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<CriterionResult> criteria;
  bool all_pass = false;
};

inline constexpr std::uint64_t kDefaultAcceptanceSeed = 42;

/// Criterion ids of a named suite ("all", "quick", "c1".."c12", "gg",
/// "torus-lg", "interval", "coupling", "one-sided", "determinism").
/// Throws std::invalid_argument on unknown names.
std::vector<int> suite_criteria(const std::string& suite);

/// Runs the suite. Progress lines ("[PASS]/[FAIL] c<k> ...") go to
/// `progress` when given; the returned result serializes to the report.
SuiteResult run_suite(const std::string& suite, std::uint64_t seed, int workers,
                      std::ostream* progress);

nlohmann::json suite_result_to_json(const SuiteResult& result);

}  // namespace sbd
