// Acceptance suite: one pass/fail line per criterion, pinned tolerances.

#include <cstdio>
#include <string>
#include <vector>

#include "accept.hpp"

int main(int argc, char** argv) {
  std::vector<int> ids;
  if (argc > 1) {
    for (int i = 1; i < argc; ++i) ids.push_back(std::atoi(argv[i]));
  } else {
    ids = evalpres::accept::all_criteria();
  }
  std::vector<evalpres::accept::CriterionResult> results;
  bool all = true;
  for (int id : ids) {
    evalpres::accept::CriterionResult r = evalpres::accept::run_criterion(id);
    results.push_back(r);
    all = all && r.passed;
    std::printf("[%s] criterion %d (%s): %s  [%.1fs]\n", r.passed ? "PASS" : "FAIL", r.id,
                r.name.c_str(), r.detail.c_str(), r.seconds);
    std::fflush(stdout);
  }
  std::printf("%s\n", evalpres::accept::report_json(results).c_str());
  return all ? 0 : 1;
}
