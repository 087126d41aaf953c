#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace markov_id {

struct OracleCheck {
  std::string name;
  std::size_t cases = 0;
  double worst = 0.0;  // largest observed deviation
  double tolerance = 0.0;
  std::size_t failures = 0;

  bool passed() const noexcept { return failures == 0; }
};

struct OracleReport {
  std::vector<OracleCheck> checks;
  bool passed() const noexcept;
};

// Randomized sweep of the exact identities behind the reduction:
// contrast preservation under the symmetrizer, symmetry and uniform law of
// the embedded reference, lumping as a retraction of embedding, the
// path-law morphism identity and Renyi-1/2 equality on embedded paths.
// `trials` random reference pairs; the path-enumeration checks use
// min(trials, 50) smaller cases.
OracleReport run_oracle_suite(std::size_t trials, std::uint64_t seed);

std::string format_report(const OracleReport& report);

}  // namespace markov_id
