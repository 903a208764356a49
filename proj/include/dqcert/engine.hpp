#ifndef DQCERT_ENGINE_HPP
#define DQCERT_ENGINE_HPP

#include "dqcert/certify.hpp"
#include "dqcert/definability.hpp"
#include "dqcert/dqbf.hpp"
#include "dqcert/satsolver.hpp"
#include "dqcert/synth.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>

namespace dqcert {

enum class SolveMode { Basic, Cegis };
enum class UnateMode { Off, Syntactic, Semantic };

struct EngineConfig {
  SolveMode mode = SolveMode::Cegis;
  /// Value assumed for existentials no constraint decides.
  bool default_value = false;
  UnateMode unate = UnateMode::Off;
  InterpolationSystem interpolation = InterpolationSystem::McMillan;
  /// Hard bound on main-loop passes; exceeding it throws InvariantError,
  /// since the algorithms terminate unless an invariant broke.
  uint64_t max_iterations = 1'000'000;
  /// Track visited conflict states and fail loudly on a repeat.
  bool check_invariants = true;
};

struct EngineStats {
  uint64_t iterations = 0;
  uint64_t arbiter_vars = 0;
  uint64_t arbiter_pairs = 0;          // defining clause pairs
  uint64_t arbiter_solver_clauses = 0; // learned conflict clauses
  uint64_t forcing_clauses = 0;
  uint64_t definability_queries = 0;
  uint64_t definitions_found = 0;
  uint64_t default_retractions = 0;
  uint64_t consistency_checks = 0;
  uint64_t unate_literals = 0;
};

struct Verdict {
  bool is_true = false;
  std::optional<SkolemModel> model; // always present when is_true
  EngineStats stats;
};

/// One solving context over a fixed formula, usable for a single solve().
///
/// Basic mode first makes every existential defined over its dependencies
/// plus the arbiters (growing arbiters from definability witnesses), then
/// searches arbiter assignments against an incremental validity check.
///
/// Cegis mode interleaves: sweep for new definitions, test the current
/// arbiter assignment with defaults for undefined variables, and on a
/// counterexample either record forcing clauses (when the formula entails
/// the opposite of a counterexample literal) or introduce arbiters and learn
/// a conflict clause over them. FALSE exactly when the learned clauses
/// become unsatisfiable.
class DqbfSolver {
public:
  explicit DqbfSolver(const Dqbf &f, EngineConfig cfg = {});

  Verdict solve();

  // Introspection (valid after solve, or between test-driven steps).
  const ArbiterRegistry &registry() const { return registry_; }
  const CNF &arbiter_clauses() const { return arbiter_conflicts_; }
  const CNF &forcing_clauses() const { return forcing_; }
  const std::map<Var, Circuit> &definitions() const { return defs_; }
  const Assignment &arbiter_assignment() const { return tau_; }
  const EngineStats &stats() const { return stats_; }
  const CNF &working_matrix() const { return phi_; }

private:
  friend struct DqbfSolverTestAccess;

  struct CheckResult {
    bool valid = false;
    Assignment counterexample; // over U u E, or over U from consistency
  };
  enum class ConflictOutcome { ForcingProgress, ArbiterClauseAdded };

  /// One-time setup shared by both modes: unate fixing, then the reason
  /// solver over the working matrix.
  void prepare();
  /// Appends unate existential literals to the working matrix as units.
  void detect_unates();
  bool semantically_unate(Lit cand, const std::vector<Lit> &fixed) const;
  /// Pulls freshly created arbiter pairs and forcing clauses into the
  /// incremental reason solver.
  void sync_reason_solver();

  Verdict solve_basic();
  Verdict solve_cegis();

  /// Cegis sweep: query undefined existentials in definability order against
  /// the working matrix plus arbiter and forcing clauses; the support is the
  /// dependency set, all arbiters, and earlier defined existentials with
  /// contained dependency sets. Generation stamps skip queries whose inputs
  /// have not changed.
  void find_definitions();
  /// Solves not-matrix ^ definitions ^ forcing ^ arbiter clauses under tau,
  /// assuming the default literal for each undefined existential. Defaults
  /// are retractable: on UNSAT, failed default assumptions are dropped and
  /// the solve repeats, so only real conflicts reach the consistency check.
  CheckResult check_arbiter_assignment();
  /// Requires formula ^ arbiter pairs ^ forcing ^ sigma ^ tau unsatisfiable.
  ConflictOutcome analyze_conflict(const Assignment &sigma);
  /// False when the learned clauses admit no arbiter assignment.
  bool find_new_arbiter_assignment();

  Verdict make_true_verdict();
  Verdict make_false_verdict();

  const Dqbf *f_;
  EngineConfig cfg_;
  CNF phi_; // working matrix: input clauses plus unate units
  ArbiterRegistry registry_;
  CNF forcing_;           // creation order
  CNF arbiter_conflicts_; // learned clauses over arbiter variables
  std::map<Var, Circuit> defs_;
  std::map<Var, size_t> last_query_; // generation stamp per existential
  Assignment tau_;
  SatSolver reason_solver_;  // working matrix ^ arbiter pairs ^ forcing
  SatSolver arbiter_solver_; // learned conflict clauses only
  size_t forcing_synced_ = 0;
  std::set<std::pair<std::string, std::string>> seen_conflicts_;
  EngineStats stats_;
  bool prepared_ = false;
  bool solved_ = false;
};

Verdict solve_dqbf(const Dqbf &f, const EngineConfig &cfg = {});

} // namespace dqcert

#endif
