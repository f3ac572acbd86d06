#pragma once

// Randomized battery of the exact structural properties: automorphism action
// on half-cubes, encoding bijection and sign-switch invariance, witness
// soundness, gentle-map symmetry/closeness, and solver backend agreement.
// Every check is exact; a single failure fails the suite.

#include <cstdint>
#include <string>
#include <vector>

#include "perclab/parallel.hpp"

namespace perclab {

/// Deliberate defects used to confirm the suite can fail.
enum class Mutation { kNone, kSignSwitch, kDecode, kWitness, kGentle };

const char* to_string(Mutation m);
Mutation parse_mutation(const std::string& name);

struct LemmaSuiteConfig {
  std::uint64_t cases = 1000;
  std::uint64_t seed = 1;
  unsigned n_max = 64;       // vector checks
  unsigned n_enum_max = 12;  // checks that enumerate the whole cube
  unsigned k_max = 5;
  double c2 = 4.0;
  unsigned threads = default_threads();
  Mutation mutation = Mutation::kNone;
};

struct LemmaCheckRow {
  std::string check;
  std::uint64_t cases;
  std::uint64_t failures;
};

struct LemmaSuiteReport {
  std::vector<LemmaCheckRow> rows;
  [[nodiscard]] bool all_passed() const;
};

void validate(const LemmaSuiteConfig& config);
LemmaSuiteReport run_lemma_suite(const LemmaSuiteConfig& config);

}  // namespace perclab
