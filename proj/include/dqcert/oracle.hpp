#ifndef DQCERT_ORACLE_HPP
#define DQCERT_ORACLE_HPP

#include "dqcert/dqbf.hpp"
#include "dqcert/synth.hpp"

#include <map>
#include <utility>

namespace dqcert {

/// Interns annotated existential variables. An annotated variable is a base
/// existential together with a total assignment of its dependencies; equal
/// pairs share one propositional variable, distinct annotations never do.
class AnnotationContext {
public:
  explicit AnnotationContext(const Dqbf &f)
      : formula_(&f), next_(f.max_var() + 1) {}
  AnnotationContext(const Dqbf &f, Var first_free)
      : formula_(&f), next_(first_free) {}

  /// Variable for e annotated with sigma restricted to deps(e); sigma must
  /// cover deps(e). Interns on first use.
  Var annotated(Var e, const Assignment &sigma);

  std::optional<Var> lookup(Var e, const Assignment &sigma) const;

  /// Base existential and annotation of an interned variable.
  const std::pair<Var, Assignment> &info(Var annotated_var) const;

  size_t count() const { return reverse_.size(); }
  Var first_free_var() const { return next_; }

private:
  const Dqbf *formula_;
  Var next_;
  std::map<std::pair<Var, Assignment>, Var> index_;
  std::map<Var, std::pair<Var, Assignment>> reverse_;
};

/// Instantiation of the matrix by a total universal assignment: keeps exactly
/// the clauses whose universal literals sigma all falsifies (a satisfied
/// universal literal satisfies its clause), and annotates each surviving
/// existential literal with sigma restricted to the literal's dependencies.
/// A clause of universal literals only becomes the empty clause.
CNF instantiate(const Dqbf &f, const Assignment &sigma,
                AnnotationContext &ctx);

/// Annotated image of a term over arbiter literals under a total universal
/// assignment rho: keeps exactly the literals whose arbiter key rho
/// satisfies, mapped onto the annotated variable of the arbiter's target.
/// Sorted ascending by variable.
std::vector<Lit> annotate_term(const std::vector<Lit> &term,
                               const Assignment &rho,
                               const ArbiterRegistry &arbiters,
                               AnnotationContext &ctx);

/// Skolem truth tables: per existential, the value on each total assignment
/// of its dependency set. Missing rows default to false.
using ModelTables = std::map<Var, std::map<Assignment, bool>>;

struct OracleVerdict {
  bool is_true = false;
  ModelTables tables; // populated only when is_true
};

/// Ground-truth decision by full universal expansion: conjoins the
/// instantiations over every total universal assignment and SAT-checks the
/// result; a satisfying assignment is read back as explicit Skolem tables.
/// Exponential in |U|; refuses more than max_universals of them.
OracleVerdict brute_solve(const Dqbf &f, int max_universals = 14);

/// True iff the tables satisfy the matrix under every total universal
/// assignment (rows missing from a table read as false).
bool tables_satisfy(const Dqbf &f, const ModelTables &tables);

struct RandomDqbfParams {
  int n_universals = 3;
  int n_existentials = 2;
  int max_deps = 3;   // dependency sets sample at most this many universals
  int n_clauses = 8;
  int clause_len = 3; // clauses sample 1..clause_len distinct variables
};

/// Seeded random instance: universals 1..nU, existentials nU+1..nU+nE with
/// uniform random dependency subsets of size <= max_deps, clauses over
/// distinct variables with coin-flip polarities (so never tautologous).
/// Deterministic in (params, seed).
Dqbf random_dqbf(const RandomDqbfParams &params, uint32_t seed);

} // namespace dqcert

#endif
