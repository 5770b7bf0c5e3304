#pragma once

// Acceptance suite shared by the `acceptance_suite` test binary and
// `monadforge selftest`.

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace monadforge::acceptance {

struct Outcome {
  bool passed = false;
  std::string detail;
};

struct Criterion {
  std::string id;
  std::string title;
  double budget_seconds = 0.0;
  std::function<Outcome()> run;
};

struct CriterionResult {
  std::string id;
  std::string title;
  bool passed = false;
  bool within_budget = false;
  double seconds = 0.0;
  double budget_seconds = 0.0;
  std::string detail;
};

const std::vector<Criterion>& criteria();

/// Runs the selected criteria (all when `only` is empty), printing one
/// PASS/FAIL line per criterion to `out`. A criterion passes only when its
/// checks pass within its time budget.
std::vector<CriterionResult> run(std::ostream& out, const std::vector<std::string>& only = {});

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace monadforge::acceptance
