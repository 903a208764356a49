#ifndef DQCERT_CERTIFY_HPP
#define DQCERT_CERTIFY_HPP

#include "dqcert/circuit.hpp"
#include "dqcert/dqbf.hpp"
#include "dqcert/synth.hpp"

#include <map>
#include <string>

namespace dqcert {

/// Total Skolem model: one circuit per existential in a shared store, closed
/// over universal inputs with support inside the variable's dependency set.
struct SkolemModel {
  std::shared_ptr<CircuitStore> store;
  std::map<Var, NodeId> functions;

  Circuit function(Var e) const { return Circuit(store, functions.at(e)); }
  bool evaluate(Var e, const Assignment &sigma) const {
    return store->evaluate(functions.at(e), sigma);
  }
};

/// Everything the assembly needs from a finished solver run. The arbiter
/// assignment must be total over the registry's arbiters.
struct AssemblyInputs {
  const Dqbf *formula = nullptr;
  const ArbiterRegistry *registry = nullptr;
  const std::map<Var, Circuit> *definitions = nullptr;
  const CNF *forcing = nullptr; // creation order
  const Assignment *tau = nullptr;
  bool default_value = false;
};

/// Builds the model in definability order. A defined variable takes its
/// definition with arbiter leaves fixed to their tau constants and
/// existential leaves replaced by the circuits assembled before it. An
/// undefined variable becomes a decision list: its arbiter entries in
/// creation order, then the forcing entries active under tau in creation
/// order, then the default constant; the consistency check run before any
/// TRUE verdict guarantees overlapping entries agree, so the fixed order
/// only shapes the circuit. Throws ContractError if any assembled support
/// escapes the dependency set.
SkolemModel assemble_model(const AssemblyInputs &in);

/// True iff sigma extended by the model's functions satisfies the matrix;
/// sigma must cover the universals.
bool model_satisfies(const Dqbf &f, const SkolemModel &m,
                     const Assignment &sigma);

/// Exhaustive circuit-level check over every universal assignment.
/// Exponential; refuses more than max_universals universals.
bool model_satisfies_everywhere(const Dqbf &f, const SkolemModel &m,
                                int max_universals = 14);

/// Renders the model file. Layout: per existential (declaration order) the
/// two header comments
///   c skolem <e> depends <d1> ... 0
///   c aux-range <first> <last>
/// then one `p cnf <maxvar> <#clauses>` line and the clauses of e <-> f_e in
/// Tseitin form. Every auxiliary is private to its function block; an empty
/// range is written with first > last. The existential variable itself is
/// the function output.
std::string emit_model(const Dqbf &f, const SkolemModel &m);

struct ParsedModel {
  CNF clauses;
  std::map<Var, VarSet> depends;                 // header order irrelevant
  std::map<Var, std::pair<Var, Var>> aux_range;  // first > last when empty
  Var max_var = 0;                               // from the p line
};

/// Parses the emit_model format. Strict: every skolem header is immediately
/// followed by its aux-range line, headers precede the p line, and the
/// clause count must match. Throws ParseError on violations.
ParsedModel parse_model_file(const std::string &text);

struct ValidationReport {
  bool valid = true;
  std::string reason;            // single-line diagnostic when invalid
  int failing_clause = -1;       // matrix clause index, -1 if none
  Assignment witness;            // over U u E when a clause check fails
  std::vector<double> clause_seconds; // per matrix clause, entail check only
};

/// Independent model validation: structural pass (every existential has a
/// function block; declared dependencies inside the formula's; auxiliary
/// ranges fresh and disjoint; every clause in exactly one block whose cone
/// stays within output, own auxiliaries, and declared dependencies), then
/// one incremental SAT solver proving model ^ ~C unsatisfiable for every
/// matrix clause C. The first failure is reported with a witness.
ValidationReport validate_model(const Dqbf &f, const ParsedModel &m);

/// File-level enumeration check: for every total universal assignment the
/// model clauses must be satisfiable and the induced total assignment must
/// satisfy the matrix. Exponential; refuses more than max_universals.
bool enumerate_model_check(const Dqbf &f, const ParsedModel &m,
                           int max_universals = 14);

} // namespace dqcert

#endif
