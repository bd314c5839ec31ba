#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace levymech::verify {

enum class Suite { Fast, Full };

struct CriterionResult {
  std::string id;
  std::string description;
  bool passed = false;
  double value = 0.0;      // measured quantity (worst case over sub-checks)
  double threshold = 0.0;  // pinned acceptance bound
  double seconds = 0.0;
  std::string detail;
};

/// Runs the acceptance criteria (identities only for Fast; Monte Carlo suites
/// included for Full), printing one PASS/FAIL line per criterion to `log`.
std::vector<CriterionResult> run_acceptance(Suite suite, std::ostream& log,
                                            std::uint64_t seed);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace levymech::verify
