#ifndef DQCERT_SATSOLVER_HPP
#define DQCERT_SATSOLVER_HPP

#include "dqcert/proof.hpp"
#include "dqcert/types.hpp"

namespace dqcert {

enum class SolveStatus { Sat, Unsat };

/// Incremental CDCL solver: two watched literals, first-UIP learning without
/// clause minimization, activity-driven decisions with smallest-variable
/// tie-break, Luby restarts, phase saving seeded from per-variable default
/// polarities. Fully deterministic: identical call sequences produce
/// identical models, cores, and proofs.
///
/// With a ProofRecorder attached, every added clause becomes a proof leaf,
/// every learned clause records its resolution chain, and a final empty
/// clause is derived on refutation. Proof-logged solves reject assumptions
/// (callers encode them as unit clauses, which keeps every leaf a real input
/// clause); learned clauses retain literals already false at level zero so
/// each recorded chain resolves to exactly the clause learned.
class SatSolver {
public:
  explicit SatSolver(ProofRecorder *proof = nullptr);

  /// Allocates and returns the next unused variable.
  Var new_var();
  /// Grows the variable range to include v.
  void ensure_var(Var v);
  Var max_var() const { return static_cast<Var>(nvars_); }

  /// Adds a clause. Duplicate literals are removed; tautologies are ignored
  /// (and never reach an attached proof). Adding the empty clause makes the
  /// solver permanently unsatisfiable.
  void add_clause(Clause c);

  /// Selects the proof partition tag for subsequently added clauses
  /// (meaningful only with an attached recorder; defaults to the A side).
  void set_proof_partition(bool in_a) { adding_to_a_ = in_a; }

  /// Solves under the given assumption literals.
  SolveStatus solve(const std::vector<Lit> &assumptions = {});

  /// After Sat: total assignment over variables 1..max_var().
  const Assignment &model() const { return model_; }

  /// After Unsat: subset rho of the assumptions with clauses ^ rho
  /// unsatisfiable (empty when the clause set alone is unsatisfiable).
  const std::vector<Lit> &failed_assumptions() const { return failed_; }

  /// Initial decision phase for v, also resetting its saved phase. Defaults
  /// to false.
  void set_default_polarity(Var v, bool value);

  /// False once the clause set alone has been refuted.
  bool okay() const { return ok_; }

  uint64_t num_conflicts() const { return stats_conflicts_; }
  uint64_t num_decisions() const { return stats_decisions_; }
  uint64_t num_propagations() const { return stats_propagations_; }
  size_t num_input_clauses() const { return stats_input_clauses_; }
  size_t num_learned_clauses() const { return stats_learned_clauses_; }

private:
  struct ClauseData {
    std::vector<Lit> lits;
    int32_t proof_step = -1;
    bool learned = false;
  };
  struct Watcher {
    int32_t cref;
    Lit blocker;
  };

  using lbool = int8_t; // 1 true, -1 false, 0 unassigned

  lbool value(Var v) const { return assigns_[v]; }
  lbool value(Lit l) const {
    lbool v = assigns_[l.var()];
    return l.negated() ? static_cast<lbool>(-v) : v;
  }
  int decision_level() const { return static_cast<int>(trail_lim_.size()); }

  void enqueue(Lit p, int32_t from);
  int32_t propagate();
  void attach(int32_t cref);
  void cancel_until(int level);
  void new_decision_level() { trail_lim_.push_back(trail_.size()); }
  Var pick_branch_var();
  void bump(Var v);
  void decay() { var_inc_ /= kVarDecay; }
  // Resolution chain entries: the trail literal resolved on and the clause
  // index of its reason.
  using Chain = std::vector<std::pair<Lit, int32_t>>;
  void analyze(int32_t confl, Clause &learnt, int &bt_level, Chain &chain);
  std::vector<Lit> analyze_final(Lit failed);
  int32_t learn_clause(Clause learnt, const Chain &chain, int32_t confl);
  // Derives the empty clause from a conflict with all literals false at
  // level zero; returns its proof step.
  int32_t derive_empty(int32_t confl);
  int32_t chain_resolve_levelzero(int32_t start_step, Clause cur);
  int32_t proof_step_of(int32_t cref) const {
    return clauses_[cref].proof_step;
  }
  void mark_unsat(int32_t empty_step);

  static constexpr double kVarDecay = 0.95;
  static constexpr int kRestartBase = 100;

  ProofRecorder *proof_;
  bool adding_to_a_ = true;
  bool ok_ = true;
  size_t nvars_ = 0;

  std::vector<ClauseData> clauses_;
  std::vector<std::vector<Watcher>> watches_; // indexed by Lit::code()
  std::vector<lbool> assigns_;                // indexed by Var
  std::vector<int32_t> level_;
  std::vector<int32_t> reason_; // clause index, -1 for decisions
  std::vector<Lit> trail_;
  std::vector<size_t> trail_lim_;
  size_t qhead_ = 0;

  std::vector<double> activity_;
  double var_inc_ = 1.0;
  std::vector<uint8_t> polarity_; // saved phase
  std::vector<uint8_t> default_pol_;
  std::vector<uint8_t> seen_; // scratch for analyze

  Assignment model_;
  std::vector<Lit> failed_;

  uint64_t stats_conflicts_ = 0, stats_decisions_ = 0,
           stats_propagations_ = 0;
  size_t stats_input_clauses_ = 0, stats_learned_clauses_ = 0;
};

/// Locally minimized unsatisfiable core: a subset of `assumptions` that is
/// unsatisfiable with the solver's clauses together with all of `fixed`.
/// Single deletion pass in ascending variable order, shrinking through the
/// failed-assumption set after every successful deletion. The `fixed`
/// literals accompany every solve but are never candidates and never
/// returned. Throws ContractError if clauses ^ fixed ^ assumptions is
/// satisfiable. Result sorted ascending by variable.
std::vector<Lit> get_core(SatSolver &s, const std::vector<Lit> &assumptions,
                          const std::vector<Lit> &fixed = {});

/// Convenience form over a throwaway solver for the given formula.
std::vector<Lit> get_core(const CNF &phi, const std::vector<Lit> &assumptions);

/// Refutation (or model) of A u B with every leaf tagged by its partition.
struct ProofSolveResult {
  SolveStatus status;
  Assignment model;     // Sat only
  ResolutionProof proof; // Unsat only
};

ProofSolveResult solve_with_proof(const CNF &a, const CNF &b);

} // namespace dqcert

#endif
