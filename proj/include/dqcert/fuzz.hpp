#ifndef DQCERT_FUZZ_HPP
#define DQCERT_FUZZ_HPP

#include "dqcert/dqbf.hpp"
#include "dqcert/oracle.hpp"

#include <functional>
#include <optional>
#include <string>

namespace dqcert {

/// Upper bounds for one fuzzing batch. Every seed draws its own instance
/// sizes uniformly within the bounds; fixing them instead would starve the
/// batch of TRUE instances once the clause count grows.
struct FuzzProfile {
  int max_universals = 4;
  int max_existentials = 3;
  int max_clauses = 12;
  int max_clause_len = 3;
};

/// Deterministic instance sizes for one seed within a profile.
RandomDqbfParams sample_params(const FuzzProfile &profile, uint32_t seed);

struct FuzzOptions {
  FuzzProfile profile;
  uint32_t first_seed = 1; // instance i runs with first_seed + i
  int count = 100;
  /// Fault injection for harness self-tests: reports the basic-mode verdict
  /// inverted, which every healthy batch must flag as a divergence.
  bool flip_basic_verdict = false;
};

struct Divergence {
  uint32_t seed = 0;
  std::string detail;    // one line: which stages disagreed and how
  Dqbf reproducer;       // greedily minimized instance
  Dqbf original;         // as generated
};

struct FuzzReport {
  int instances = 0;
  int n_true = 0;  // by the brute-force verdict
  int n_false = 0;
  std::optional<Divergence> divergence; // first one found, if any
};

/// Differential check of one instance: brute force fixes the expected
/// verdict, both engine modes must match it, and every TRUE verdict must
/// survive the full certification round trip (emit, parse, validate,
/// enumerate). Returns a diagnostic line on failure, nothing on agreement.
/// Solver exceptions count as failures and are folded into the diagnostic.
std::optional<std::string> check_instance(const Dqbf &f,
                                          bool flip_basic_verdict = false);

/// Greedy instance shrinking: drops matrix clauses, then variables that no
/// longer occur, as long as still_failing keeps reporting a failure.
Dqbf minimize_instance(const Dqbf &f,
                       const std::function<bool(const Dqbf &)> &still_failing);

/// Runs the batch sequentially in seed order and stops at the first
/// divergence, which comes back minimized. Deterministic in the options.
FuzzReport run_fuzz(const FuzzOptions &opt);

} // namespace dqcert

#endif
