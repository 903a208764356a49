#ifndef DQCERT_DEFINABILITY_HPP
#define DQCERT_DEFINABILITY_HPP

#include "dqcert/dqbf.hpp"
#include "dqcert/interpolate.hpp"

#include <map>

namespace dqcert {

/// Outcome of one definability query. When `defined`, `definition` is a
/// circuit over the support set whose value equals x in every satisfying
/// assignment of the formula. Otherwise `witness` assigns the support set a
/// pattern under which both values of x extend to satisfying assignments
/// (support variables the formula leaves unconstrained default to false).
struct DefinitionCheck {
  bool defined = false;
  Circuit definition;
  Assignment witness;
};

/// Decides definability of x by s in phi and, in the same solver run,
/// produces the definition (by interpolation from the refutation) or the
/// witness (from the model). The encoding conjoins phi ^ x with a copy of
/// phi where every variable outside s is replaced by a fresh prime, ^ ~x';
/// clauses entirely over s enter once. x in s short-circuits to the
/// identity circuit. With verify set, the interpolant contract is re-checked
/// by two independent SAT calls.
DefinitionCheck
try_get_definition(Var x, const VarSet &s, const CNF &phi,
                   InterpolationSystem sys = InterpolationSystem::McMillan,
                   bool verify = false);

/// Definability decision alone; witness meaningful when undefined.
std::pair<bool, Assignment> is_defined(Var x, const VarSet &s,
                                       const CNF &phi);

/// Extraction alone; throws ContractError when x is not defined by s.
Circuit get_definition(Var x, const VarSet &s, const CNF &phi,
                       InterpolationSystem sys = InterpolationSystem::McMillan);

/// Processing order for definition sweeps and model assembly: arbiters
/// first ascending, then existentials by ascending dependency-set size with
/// variable-index tie-break. ext(e) is the dependency set extended with
/// every earlier variable whose dependency set is contained in e's.
struct DefinabilityOrder {
  std::vector<Var> order;
  std::map<Var, VarSet> ext;
};

DefinabilityOrder definability_order(const Dqbf &f, const VarSet &arbiters);

} // namespace dqcert

#endif
