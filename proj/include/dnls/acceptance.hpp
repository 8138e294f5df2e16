#pragma once

// The acceptance property suite on the built-in configurations. Each check
// runs its own simulations and reports a single pass/fail line.

#include <functional>
#include <string>
#include <vector>

namespace dnls {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

struct AcceptanceOptions {
  /// Criterion ids to run; empty runs all of them.
  std::vector<int> only;
  unsigned max_workers = 0;
  /// Called as each criterion finishes.
  std::function<void(const CriterionResult&)> on_result;
};

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options = {});

std::string format_result(const CriterionResult& result);

}  // namespace dnls
