#include "doctest.h"

#include "dqcert/definability.hpp"
#include "dqcert/satsolver.hpp"

#include <random>

using namespace dqcert;

namespace {

std::vector<Assignment> all_models(const CNF &phi, const VarSet &vars) {
  std::vector<Assignment> out;
  size_t n = vars.size();
  REQUIRE(n <= 16);
  for (uint32_t bits = 0; bits < (1u << n); ++bits) {
    Assignment a;
    for (size_t i = 0; i < n; ++i)
      a.assign(vars[i], (bits >> i) & 1);
    if (evaluate_cnf(phi, a) == Truth::True)
      out.push_back(std::move(a));
  }
  return out;
}

// Definability by enumeration: no two models agreeing on s differ on x.
bool brute_defined(const CNF &phi, Var x, const VarSet &s,
                   const VarSet &vars) {
  auto models = all_models(phi, vars);
  std::map<std::string, bool> seen;
  for (const Assignment &m : models) {
    auto v = m.value(x);
    if (!v)
      continue;
    std::string key = m.restrict_to(s).to_string();
    auto [it, inserted] = seen.emplace(key, *v);
    if (!inserted && it->second != *v)
      return false;
  }
  return true;
}

CNF random_cnf(std::mt19937 &rng, int nvars, int nclauses, int width) {
  std::uniform_int_distribution<int> var(1, nvars);
  std::uniform_int_distribution<int> sign(0, 1);
  CNF out;
  for (int i = 0; i < nclauses; ++i) {
    Clause c;
    for (int j = 0; j < width; ++j)
      c.push_back(Lit(var(rng), sign(rng) == 1));
    out.push_back(c);
  }
  return out;
}

} // namespace

TEST_CASE("equivalence to a support variable is extracted") {
  CNF phi = {{neg(1), pos(2)}, {pos(1), neg(2)}}; // 2 == 1
  auto [defined, witness] = is_defined(2, {1}, phi);
  CHECK(defined);
  Circuit def = get_definition(2, {1}, phi);
  CHECK(vs_subset(def.support(), VarSet{1}));
  Assignment at_true, at_false;
  at_true.assign(1, true);
  at_false.assign(1, false);
  CHECK(def.evaluate(at_true));
  CHECK(!def.evaluate(at_false));
}

TEST_CASE("negated dependence is extracted") {
  CNF phi = {{neg(2), neg(1)}, {pos(2), pos(1)}}; // 2 == ~1
  Circuit def = get_definition(2, {1}, phi);
  Assignment at_true, at_false;
  at_true.assign(1, true);
  at_false.assign(1, false);
  CHECK(!def.evaluate(at_true));
  CHECK(def.evaluate(at_false));
}

TEST_CASE("unconstrained variable is undefined with a witness") {
  CNF phi = {{pos(1), pos(2)}}; // 2 free when 1 = 1
  auto r = try_get_definition(2, {}, phi);
  CHECK(!r.defined);
  CHECK(r.witness.empty());

  auto r2 = try_get_definition(2, {1}, phi);
  CHECK(!r2.defined);
  REQUIRE(r2.witness.contains(1));
  CHECK(r2.witness.value(1) == true); // both values of 2 extend only under 1=1
}

TEST_CASE("a variable in its own support is trivially defined") {
  CNF phi = {{pos(1), pos(2)}};
  auto r = try_get_definition(1, {1, 2}, phi);
  CHECK(r.defined);
  Assignment a;
  a.assign(1, true);
  a.assign(2, false);
  CHECK(r.definition.evaluate(a));
  a = Assignment();
  a.assign(1, false);
  a.assign(2, true);
  CHECK(!r.definition.evaluate(a));
}

TEST_CASE("forced-support formula leaves target undefined") {
  // (~2 | 1) ^ (2 | 1) forces 1 = true and leaves 2 free
  CNF phi = {{neg(2), pos(1)}, {pos(2), pos(1)}};
  auto r = try_get_definition(2, {1}, phi);
  CHECK(!r.defined);
  CHECK(r.witness.value(1) == true);
}

TEST_CASE("unsatisfiable formula defines everything vacuously") {
  CNF phi = {{pos(1)}, {neg(1)}};
  auto r = try_get_definition(2, {}, phi, InterpolationSystem::McMillan, true);
  CHECK(r.defined);
}

TEST_CASE("extraction on an undefined target is a contract violation") {
  CNF phi = {{pos(1), pos(2)}};
  CHECK_THROWS_AS(get_definition(2, {1}, phi), ContractError);
}

TEST_CASE("definitions survive clause additions") {
  CNF phi = {{neg(1), pos(2)}, {pos(1), neg(2)}};
  Circuit def = get_definition(2, {1}, phi);
  phi.push_back({pos(1), pos(3)});
  // still a definition in the grown formula: every model m has m(2)=def(m)
  VarSet vars = cnf_vars(phi);
  for (uint32_t bits = 0; bits < 8; ++bits) {
    Assignment a;
    for (size_t i = 0; i < vars.size(); ++i)
      a.assign(vars[i], (bits >> i) & 1);
    if (evaluate_cnf(phi, a) != Truth::True)
      continue;
    CHECK(a.value(2) == def.evaluate(a.restrict_to(def.support())));
  }
}

TEST_CASE("agrees with the enumeration oracle on fuzzed formulas") {
  std::mt19937 meta(42);
  int checked = 0;
  for (uint32_t seed = 1; checked < 200; ++seed) {
    REQUIRE(seed <= 400);
    std::mt19937 rng(seed);
    int nvars = 4 + static_cast<int>(rng() % 6); // 4..9
    CNF phi = random_cnf(rng, nvars, 4 + rng() % 10, 1 + rng() % 3);
    VarSet vars = cnf_vars(phi);
    if (vars.empty())
      continue;
    Var x = vars[rng() % vars.size()];
    VarSet s;
    for (Var v : vars)
      if (v != x && rng() % 2)
        s.push_back(v);
    ++checked;
    CAPTURE(seed);
    auto r = try_get_definition(x, s, phi, InterpolationSystem::McMillan,
                                true);
    CHECK(r.defined == brute_defined(phi, x, s, vars));
    if (r.defined) {
      CHECK(vs_subset(r.definition.support(), s));
      // semantic check on every model
      for (const Assignment &m : all_models(phi, vars))
        CHECK(m.value(x) ==
              r.definition.evaluate(m.restrict_to(r.definition.support())));
    } else {
      // witness extends to models with both values of x
      CNF with = phi;
      SatSolver s1, s2;
      for (const Clause &c : with) {
        s1.add_clause(c);
        s2.add_clause(c);
      }
      std::vector<Lit> base = r.witness.literals();
      auto a1 = base;
      a1.push_back(pos(x));
      auto a2 = base;
      a2.push_back(neg(x));
      s1.ensure_var(x);
      s2.ensure_var(x);
      CHECK(s1.solve(a1) == SolveStatus::Sat);
      CHECK(s2.solve(a2) == SolveStatus::Sat);
    }
  }
}

TEST_CASE("processing order sorts by dependency size then index") {
  Dqbf f;
  f.add_universal(1);
  f.add_universal(2);
  f.add_existential(3, {1, 2});
  f.add_existential(4, {1});
  f.add_clause({pos(3), pos(4)});

  DefinabilityOrder ord = definability_order(f, {});
  CHECK(ord.order == std::vector<Var>{4, 3});
  CHECK(ord.ext.at(4) == VarSet{1});
  CHECK(ord.ext.at(3) == VarSet{1, 2, 4}); // deps(4) subset of deps(3)
}

TEST_CASE("arbiters precede every existential in the order") {
  Dqbf f;
  f.add_existential(1, {});
  DefinabilityOrder ord = definability_order(f, {7, 5});
  CHECK(ord.order == std::vector<Var>{5, 7, 1});
  CHECK(ord.ext.at(5).empty());
  CHECK(ord.ext.at(7) == VarSet{5});
  CHECK(ord.ext.at(1) == VarSet{5, 7});
}

TEST_CASE("incomparable dependency sets do not extend each other") {
  Dqbf f;
  f.add_universal(1);
  f.add_universal(2);
  f.add_existential(3, {1});
  f.add_existential(4, {2});
  DefinabilityOrder ord = definability_order(f, {});
  CHECK(ord.order == std::vector<Var>{3, 4});
  CHECK(ord.ext.at(3) == VarSet{1});
  CHECK(ord.ext.at(4) == VarSet{2}); // deps(3) not within deps(4)
}
