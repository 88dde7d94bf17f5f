#pragma once

// Verification suites. Every suite is deterministic given its configuration
// and seed, whatever the number of worker threads.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace linset {

struct SuiteConfig {
  std::optional<int> p, e, h, k, w;
  std::string scope = "exhaustive";  // exhaustive | sample | construction
  std::uint64_t seed = 1;
  std::optional<std::uint64_t> budget;   // search nodes per field; default_search_budget() if unset
  std::optional<std::uint64_t> samples;  // suite-specific default when unset
  int jobs = 0;                          // 0: hardware concurrency
};

struct SuiteReport {
  std::string suite;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  std::uint64_t seed = 0;
  std::uint64_t visited = 0;
  std::uint64_t expected = 0;  // closed-form count of objects, when one exists
  std::vector<std::string> violations;
  std::map<std::string, std::uint64_t> histogram;
  nlohmann::ordered_json details = nlohmann::ordered_json::object();
  double wall_time = 0;

  bool passed() const { return violations.empty(); }
};

const std::vector<std::string>& suite_names();
// Throws UnknownSuite, InvalidParams or InfeasibleScope.
SuiteReport run_suite(const std::string& name, const SuiteConfig& config);
nlohmann::ordered_json to_json(const SuiteReport& report, bool with_time);

SuiteReport verify_orbits(const SuiteConfig& c);
SuiteReport verify_weights(const SuiteConfig& c);
SuiteReport verify_prop2(const SuiteConfig& c);
SuiteReport verify_trichotomy(const SuiteConfig& c);
SuiteReport verify_regulus(const SuiteConfig& c);
SuiteReport verify_construction(const SuiteConfig& c);
SuiteReport verify_lower_bound(const SuiteConfig& c);
SuiteReport verify_main_theorem(const SuiteConfig& c);

}  // namespace linset
