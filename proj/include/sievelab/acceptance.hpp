#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sievelab::acceptance {

struct CriterionResult {
  std::string id;
  bool pass = false;
  bool hard = true;  // observational criteria never gate the suite
  std::string detail;
  double ms = 0.0;
};

struct Options {
  int threads = 0;  // 0 = hardware concurrency
};

// Runs every criterion, printing one pass/fail line per criterion to `log`
// as it completes. Results come back in order A1..A11.
std::vector<CriterionResult> run_all(const Options& opt, std::ostream& log);

bool all_hard_passed(const std::vector<CriterionResult>& results);

}  // namespace sievelab::acceptance
