#ifndef DQCERT_SYNTH_HPP
#define DQCERT_SYNTH_HPP

#include "dqcert/dqbf.hpp"
#include "dqcert/satsolver.hpp"

#include <map>
#include <utility>

namespace dqcert {

/// One arbiter variable: a fresh existential standing for the value its
/// target takes under one fixed assignment of the target's dependencies.
struct ArbiterInfo {
  Var var;        // the arbiter variable
  Var target;     // existential it arbitrates
  Assignment key; // total assignment of deps(target)
};

/// Allocates arbiter variables and their defining clauses on demand.
///
/// arbiter(e, sigma) keys on sigma restricted to deps(e) and ties the fresh
/// variable a to e with the clause pair
///   (a | ~key | ~e)   (~a | ~key | e)
/// so e and a agree under every universal assignment extending the key.
/// Equal keys share one arbiter, so a target with d dependencies can never
/// have more than 2^d arbiters; capacity() is the resulting global bound.
class ArbiterRegistry {
public:
  explicit ArbiterRegistry(const Dqbf &f)
      : formula_(&f), next_var_(f.max_var() + 1) {}

  /// Arbiter variable for target e under sigma restricted to deps(e);
  /// allocates the variable and its clause pair on first use. sigma must
  /// cover deps(e).
  Var arbiter(Var e, const Assignment &sigma);

  bool has_arbiter(Var e, const Assignment &sigma) const;
  bool is_arbiter(Var v) const { return by_var_.count(v) != 0; }
  const ArbiterInfo &info(Var v) const;

  /// All arbiter variables, ascending (equals allocation order).
  VarSet arbiter_vars() const;
  const std::vector<ArbiterInfo> &arbiters() const { return infos_; }

  /// Every defining clause so far, two per arbiter, in creation order.
  const CNF &clauses() const { return clauses_; }

  /// Clauses created since the previous drain; each clause is handed out
  /// exactly once, so incremental callers stay in sync.
  CNF drain_new_clauses();

  size_t count() const { return infos_.size(); }
  size_t count_for(Var e) const;

  /// Global arbiter bound sum over targets of 2^|deps|, saturating.
  size_t capacity() const;

  /// First variable above the formula and all arbiters; temporary encodings
  /// may allocate upward from here.
  Var first_free_var() const { return next_var_; }

  /// For each listed arbiter, the literal giving it the value rho gives its
  /// target; rho must assign every target.
  std::vector<Lit> matching_literals(const std::vector<Var> &arbiter_vars,
                                     const Assignment &rho) const;

private:
  const Dqbf *formula_;
  Var next_var_;
  std::map<std::pair<Var, Assignment>, Var> index_; // (target, key) -> var
  std::vector<ArbiterInfo> infos_;                  // allocation order
  std::map<Var, size_t> by_var_;                    // var -> index in infos_
  CNF clauses_;
  size_t drained_ = 0;
};

/// Clause recording that `forced` holds whenever the context does: requires
/// the solver's clauses together with context and ~forced to be
/// unsatisfiable. The context is shrunk to an unsatisfiable core (with
/// ~forced pinned), restricted to keep_vars, and negated into the clause
/// (~premise | forced). Sorted ascending by variable.
Clause forcing_clause(SatSolver &solver, const std::vector<Lit> &context,
                      Lit forced, const VarSet &keep_vars);

struct ConsistencyResult {
  bool consistent = true;
  /// Total universal assignment forcing complementary values on some
  /// existential (set only when inconsistent).
  Assignment counterexample;
};

/// Decides whether clauses ^ tau leaves every total universal assignment a
/// way to value the existentials. Each clause must carry exactly one
/// existential literal besides universal and arbiter literals; under tau a
/// clause is either satisfied (some arbiter literal true) or the implication
/// "universal term -> existential literal". The set is inconsistent exactly
/// when two implications with non-clashing terms force complementary
/// literals; the counterexample extends the union of those terms by false.
ConsistencyResult check_consistency(const Dqbf &f, const CNF &clauses,
                                    const Assignment &tau,
                                    const VarSet &arbiter_vars);

} // namespace dqcert

#endif
