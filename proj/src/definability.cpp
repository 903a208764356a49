#include "dqcert/definability.hpp"

#include "dqcert/satsolver.hpp"

#include <algorithm>

namespace dqcert {

DefinitionCheck try_get_definition(Var x, const VarSet &s, const CNF &phi,
                                   InterpolationSystem sys, bool verify) {
  DefinitionCheck out;
  if (vs_contains(s, x)) {
    auto store = std::make_shared<CircuitStore>();
    out.defined = true;
    out.definition = Circuit(store, store->input(x));
    return out;
  }

  Var top = cnf_max_var(phi);
  top = std::max(top, x);
  if (!s.empty())
    top = std::max(top, s.back());

  // Primes for every variable outside the shared set, x included.
  std::map<Var, Var> prime;
  Var next = top;
  auto prime_of = [&](Var v) {
    auto it = prime.find(v);
    if (it != prime.end())
      return it->second;
    return prime.emplace(v, ++next).first->second;
  };

  CNF a = phi;
  a.push_back({pos(x)});
  CNF b;
  for (const Clause &c : phi) {
    bool has_private = false;
    for (Lit l : c)
      if (!vs_contains(s, l.var())) {
        has_private = true;
        break;
      }
    if (!has_private)
      continue; // clauses entirely over s live once, on the A side
    Clause copy;
    for (Lit l : c)
      copy.push_back(vs_contains(s, l.var()) ? l
                                             : Lit(prime_of(l.var()),
                                                   l.negated()));
    b.push_back(std::move(copy));
  }
  b.push_back({neg(prime_of(x))});

  ProofSolveResult r = solve_with_proof(a, b);
  if (r.status == SolveStatus::Sat) {
    out.defined = false;
    out.witness = r.model.restrict_to(s);
    for (Var v : s)
      if (!out.witness.contains(v))
        out.witness.assign(v, false);
    return out;
  }
  out.defined = true;
  out.definition = interpolant(r.proof, sys);
  DQCERT_CHECK(vs_subset(out.definition.support(), s),
               "definition support escapes the candidate set");
  if (verify)
    verify_interpolant(r.proof, out.definition);
  return out;
}

std::pair<bool, Assignment> is_defined(Var x, const VarSet &s,
                                       const CNF &phi) {
  DefinitionCheck c = try_get_definition(x, s, phi);
  return {c.defined, c.witness};
}

Circuit get_definition(Var x, const VarSet &s, const CNF &phi,
                       InterpolationSystem sys) {
  DefinitionCheck c = try_get_definition(x, s, phi, sys);
  if (!c.defined)
    throw ContractError("variable " + std::to_string(x) +
                        " is not defined by the candidate support");
  return c.definition;
}

DefinabilityOrder definability_order(const Dqbf &f, const VarSet &arbiters) {
  DefinabilityOrder out;
  auto deps_of = [&](Var v) -> VarSet {
    if (f.is_existential(v))
      return f.deps(v);
    return {};
  };

  VarSet arbs = arbiters;
  vs_normalize(arbs);
  out.order.assign(arbs.begin(), arbs.end());
  std::vector<Var> rest(f.existential_order().begin(),
                        f.existential_order().end());
  std::sort(rest.begin(), rest.end(), [&](Var a, Var b) {
    size_t da = f.deps(a).size(), db = f.deps(b).size();
    if (da != db)
      return da < db;
    return a < b;
  });
  out.order.insert(out.order.end(), rest.begin(), rest.end());

  for (size_t i = 0; i < out.order.size(); ++i) {
    Var e = out.order[i];
    VarSet ext = deps_of(e);
    for (size_t j = 0; j < i; ++j) {
      Var x = out.order[j];
      if (vs_subset(deps_of(x), deps_of(e)))
        ext.push_back(x);
    }
    vs_normalize(ext);
    DQCERT_CHECK(!vs_contains(ext, e), "extended support contains its target");
    out.ext.emplace(e, std::move(ext));
  }
  return out;
}

} // namespace dqcert
