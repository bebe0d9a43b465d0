// Acceptance driver: one PASS/FAIL line per criterion, exit 1 on any failure.
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "greedygraph/acceptance.hpp"

int main(int argc, char** argv) {
  CLI::App app{"greedygraph acceptance suite"};
  std::optional<int> only;
  std::string profile = "full";
  greedygraph::AcceptanceOptions options;
  app.add_option("--only", only, "run a single criterion")->check(CLI::Range(1, greedygraph::criterion_count()));
  app.add_option("--profile", profile, "quick or full")->check(CLI::IsMember({"quick", "full"}));
  app.add_option("--seed", options.seed, "base seed");
  app.add_option("--jobs", options.jobs, "trial workers")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  options.profile = greedygraph::parse_profile(profile);
  bool all_passed = true;
  auto report = [&](const greedygraph::CriterionResult& r) {
    std::cout << greedygraph::format_line(r) << std::endl;
    all_passed = all_passed && r.passed;
  };
  if (only) {
    report(greedygraph::run_criterion(*only, options));
  } else {
    greedygraph::run_acceptance(options, report);
  }
  return all_passed ? 0 : 1;
}
