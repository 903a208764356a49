#include "dqcert/oracle.hpp"

#include "dqcert/satsolver.hpp"

#include <algorithm>
#include <random>

namespace dqcert {

Var AnnotationContext::annotated(Var e, const Assignment &sigma) {
  if (!formula_->is_existential(e))
    throw ContractError("annotated base " + std::to_string(e) +
                        " is not an existential variable");
  Assignment key = sigma.restrict_to(formula_->deps(e));
  if (!key.total_over(formula_->deps(e)))
    throw ContractError("annotation must assign every dependency of " +
                        std::to_string(e));
  auto it = index_.find({e, key});
  if (it != index_.end())
    return it->second;
  Var v = next_++;
  index_.emplace(std::make_pair(e, key), v);
  reverse_.emplace(v, std::make_pair(e, std::move(key)));
  return v;
}

std::optional<Var> AnnotationContext::lookup(Var e,
                                             const Assignment &sigma) const {
  Assignment key = sigma.restrict_to(formula_->deps(e));
  auto it = index_.find({e, key});
  if (it == index_.end())
    return std::nullopt;
  return it->second;
}

const std::pair<Var, Assignment> &
AnnotationContext::info(Var annotated_var) const {
  auto it = reverse_.find(annotated_var);
  if (it == reverse_.end())
    throw ContractError("variable " + std::to_string(annotated_var) +
                        " is not an annotated variable");
  return it->second;
}

CNF instantiate(const Dqbf &f, const Assignment &sigma,
                AnnotationContext &ctx) {
  if (!sigma.total_over(f.universals()))
    throw ContractError("instantiation assignment must cover every universal");
  CNF out;
  for (const Clause &c : f.matrix()) {
    Clause mapped;
    bool satisfied = false;
    for (Lit l : c) {
      if (f.is_universal(l.var())) {
        if (*sigma.literal_value(l)) {
          satisfied = true;
          break;
        }
      } else {
        mapped.push_back(Lit(ctx.annotated(l.var(), sigma), l.negated()));
      }
    }
    if (satisfied)
      continue;
    std::sort(mapped.begin(), mapped.end());
    out.push_back(std::move(mapped));
  }
  return out;
}

std::vector<Lit> annotate_term(const std::vector<Lit> &term,
                               const Assignment &rho,
                               const ArbiterRegistry &arbiters,
                               AnnotationContext &ctx) {
  std::vector<Lit> out;
  for (Lit l : term) {
    const ArbiterInfo &ai = arbiters.info(l.var());
    bool key_holds = true;
    for (auto [u, val] : ai.key) {
      auto rv = rho.value(u);
      if (!rv)
        throw ContractError("assignment must cover every arbiter key");
      if (*rv != val) {
        key_holds = false;
        break;
      }
    }
    if (key_holds)
      out.push_back(Lit(ctx.annotated(ai.target, ai.key), l.negated()));
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

/// Total universal assignment for a bit pattern: universal with rank i (in
/// sorted order) reads bit i.
Assignment universal_bits(const VarSet &universals, uint64_t bits) {
  Assignment sigma;
  for (size_t i = 0; i < universals.size(); ++i)
    sigma.assign(universals[i], (bits >> i) & 1);
  return sigma;
}

} // namespace

OracleVerdict brute_solve(const Dqbf &f, int max_universals) {
  if (static_cast<int>(f.num_universals()) > max_universals)
    throw ContractError("expansion oracle refuses " +
                        std::to_string(f.num_universals()) +
                        " universals (cap " + std::to_string(max_universals) +
                        ")");

  AnnotationContext ctx(f);
  SatSolver solver;
  uint64_t count = uint64_t{1} << f.num_universals();
  for (uint64_t bits = 0; bits < count; ++bits) {
    Assignment sigma = universal_bits(f.universals(), bits);
    for (Clause &c : instantiate(f, sigma, ctx))
      solver.add_clause(std::move(c));
    if (!solver.okay())
      return {false, {}};
  }
  if (solver.solve() == SolveStatus::Unsat)
    return {false, {}};

  OracleVerdict v;
  v.is_true = true;
  for (Var e : f.existential_order()) {
    const VarSet &deps = f.deps(e);
    DQCERT_CHECK(deps.size() < 63, "dependency set too large to tabulate");
    std::map<Assignment, bool> table;
    for (uint64_t bits = 0; bits < (uint64_t{1} << deps.size()); ++bits) {
      Assignment row = universal_bits(deps, bits);
      auto av = ctx.lookup(e, row);
      // Interned but dropped-with-its-clause variables stay unconstrained.
      bool val = av ? solver.model().value(*av).value_or(false) : false;
      table.emplace(std::move(row), val);
    }
    v.tables.emplace(e, std::move(table));
  }
  return v;
}

bool tables_satisfy(const Dqbf &f, const ModelTables &tables) {
  uint64_t count = uint64_t{1} << f.num_universals();
  for (uint64_t bits = 0; bits < count; ++bits) {
    Assignment full = universal_bits(f.universals(), bits);
    for (Var e : f.existential_order()) {
      bool val = false;
      auto te = tables.find(e);
      if (te != tables.end()) {
        auto row = te->second.find(full.restrict_to(f.deps(e)));
        if (row != te->second.end())
          val = row->second;
      }
      full.assign(e, val);
    }
    if (!f.matrix_satisfied(full))
      return false;
  }
  return true;
}

Dqbf random_dqbf(const RandomDqbfParams &p, uint32_t seed) {
  if (p.n_universals < 0 || p.n_existentials < 0 || p.max_deps < 0 ||
      p.n_clauses < 0 || p.clause_len < 1)
    throw ContractError("random instance parameters out of range");
  int n_vars = p.n_universals + p.n_existentials;
  if (p.n_clauses > 0 && n_vars == 0)
    throw ContractError("cannot sample clauses without variables");

  std::mt19937 rng(seed);
  auto below = [&rng](int n) { return static_cast<int>(rng() % n); };

  Dqbf f;
  for (Var u = 1; u <= p.n_universals; ++u)
    f.add_universal(u);
  for (Var e = p.n_universals + 1; e <= n_vars; ++e) {
    int max_size = std::min(p.max_deps, p.n_universals);
    int size = max_size == 0 ? 0 : below(max_size + 1);
    std::vector<Var> pool(f.universals());
    for (int i = 0; i < size; ++i)
      std::swap(pool[i], pool[i + below(static_cast<int>(pool.size()) - i)]);
    VarSet deps(pool.begin(), pool.begin() + size);
    vs_normalize(deps);
    f.add_existential(e, std::move(deps));
  }

  for (int i = 0; i < p.n_clauses; ++i) {
    int len = 1 + below(std::min(p.clause_len, n_vars));
    std::vector<Var> pool(n_vars);
    for (int v = 0; v < n_vars; ++v)
      pool[v] = v + 1;
    Clause c;
    for (int j = 0; j < len; ++j) {
      std::swap(pool[j], pool[j + below(static_cast<int>(pool.size()) - j)]);
      c.push_back(Lit(pool[j], rng() % 2 == 0));
    }
    f.add_clause(std::move(c));
  }
  return f;
}

} // namespace dqcert
