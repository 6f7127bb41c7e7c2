#pragma once

#include <string>
#include <vector>

namespace evalpres::accept {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;   // deterministic summary (no timings)
  double seconds = 0.0; // not part of the machine-readable report
};

std::vector<int> all_criteria();

// Runs one acceptance criterion at its pinned tolerances.
CriterionResult run_criterion(int id);

// Deterministic machine-readable report (timings excluded).
std::string report_json(const std::vector<CriterionResult>& results);

}  // namespace evalpres::accept
