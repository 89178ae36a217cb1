#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace scout {

// Reference verification suites exposed by the CLI. Suite names are part of
// the command-line contract: submodularity, lemma1, lemma2, greedy-ratio,
// posterior, or all.
struct VerifySuiteResult {
  std::string suite;
  int checks = 0;
  int failures = 0;
  double worst_gap = 0.0;
  uint64_t first_failing_seed = 0;
};

std::vector<VerifySuiteResult> run_verify_suites(const std::string& suite,
                                                 int count, uint64_t seed);

void print_verify_results(const std::vector<VerifySuiteResult>& results,
                          std::ostream& out);
bool all_passed(const std::vector<VerifySuiteResult>& results);

}  // namespace scout
