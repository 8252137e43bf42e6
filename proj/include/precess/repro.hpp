#pragma once

#include <string>
#include <vector>

namespace precess::repro {

struct CriterionResult {
  int id;
  std::string name;
  bool pass;
  std::string detail;
  double seconds;
};

// Runs the full reproduction suite; one entry per criterion.
std::vector<CriterionResult> run_all(int threads = 0);

// Formats a pass/fail table, one line per criterion.
std::string format_table(const std::vector<CriterionResult>& results);

}  // namespace precess::repro
