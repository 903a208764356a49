#include "dqcert/dqbf.hpp"

#include <algorithm>

namespace dqcert {

void Dqbf::add_universal(Var v) {
  DQCERT_CHECK(v > 0, "variable must be positive");
  if (is_declared(v))
    throw ContractError("variable " + std::to_string(v) + " quantified twice");
  universal_order_.push_back(v);
  universals_.insert(
      std::lower_bound(universals_.begin(), universals_.end(), v), v);
  max_var_ = std::max(max_var_, v);
}

void Dqbf::add_existential(Var v, VarSet deps) {
  DQCERT_CHECK(v > 0, "variable must be positive");
  if (is_declared(v))
    throw ContractError("variable " + std::to_string(v) + " quantified twice");
  vs_normalize(deps);
  for (Var u : deps)
    if (!is_universal(u))
      throw ContractError("dependency " + std::to_string(u) + " of " +
                          std::to_string(v) + " is not a universal variable");
  existential_order_.push_back(v);
  deps_.emplace(v, std::move(deps));
  max_var_ = std::max(max_var_, v);
}

bool Dqbf::add_clause(Clause c) {
  for (Lit l : c) {
    if (!is_declared(l.var()))
      throw ContractError("clause literal over undeclared variable " +
                          std::to_string(l.var()));
    max_var_ = std::max(max_var_, l.var());
  }
  auto norm = normalize_clause(std::move(c));
  if (!norm)
    return false; // tautology
  matrix_.push_back(std::move(*norm));
  return true;
}

const VarSet &Dqbf::deps(Var e) const {
  auto it = deps_.find(e);
  DQCERT_CHECK(it != deps_.end(), "deps() of non-existential variable");
  return it->second;
}

} // namespace dqcert
