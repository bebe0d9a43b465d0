#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

namespace greedygraph {

enum class Profile { kQuick, kFull };

/// Parses "quick" or "full"; throws std::invalid_argument otherwise.
Profile parse_profile(const std::string& name);
std::string to_string(Profile profile);

struct AcceptanceOptions {
  Profile profile = Profile::kQuick;
  std::uint64_t seed = 1;
  unsigned jobs = 1;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  double seconds = 0.0;
  double time_limit = 0.0;  // seconds
  std::string summary;      // one line of headline numbers
  nlohmann::json details;
};

/// Criterion ids run by a profile, in order. Quick: 1 2 4 5 6 7 8 9 14.
/// Full adds 3 and 10-13.
std::vector<int> criteria_for(Profile profile);

/// Number of acceptance criteria (ids are 1..count).
int criterion_count();

/// Runs one criterion. A criterion passes only if every check holds and it
/// finished inside its time limit. Throws std::out_of_range on unknown ids.
CriterionResult run_criterion(int id, const AcceptanceOptions& options);

/// Runs the profile's criteria in order, reporting each as it completes.
/// Criteria 12 and 13 share one simulation campaign.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options,
                                            const std::function<void(const CriterionResult&)>& on_result = {});

/// "PASS  3 oracle-n5  tv=0.0012 <= 0.01  (12.3 s)"
std::string format_line(const CriterionResult& result);

nlohmann::json results_to_json(const std::vector<CriterionResult>& results);

}  // namespace greedygraph
