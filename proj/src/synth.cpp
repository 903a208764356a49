#include "dqcert/synth.hpp"

#include <algorithm>
#include <array>
#include <cstddef>

namespace dqcert {

Var ArbiterRegistry::arbiter(Var e, const Assignment &sigma) {
  if (!formula_->is_existential(e))
    throw ContractError("arbiter target " + std::to_string(e) +
                        " is not an existential variable");
  Assignment key = sigma.restrict_to(formula_->deps(e));
  if (!key.total_over(formula_->deps(e)))
    throw ContractError("arbiter key must assign every dependency of " +
                        std::to_string(e));

  auto it = index_.find({e, key});
  if (it != index_.end())
    return it->second;

  Var a = next_var_++;
  index_.emplace(std::make_pair(e, key), a);
  by_var_.emplace(a, infos_.size());

  Clause c1{pos(a)}, c2{neg(a)};
  for (Lit l : key.literals()) {
    c1.push_back(~l);
    c2.push_back(~l);
  }
  c1.push_back(neg(e));
  c2.push_back(pos(e));
  clauses_.push_back(*normalize_clause(std::move(c1)));
  clauses_.push_back(*normalize_clause(std::move(c2)));

  infos_.push_back({a, e, std::move(key)});
  DQCERT_CHECK(count_for(e) <= (formula_->deps(e).size() >= 62
                                    ? SIZE_MAX
                                    : size_t{1} << formula_->deps(e).size()),
               "arbiter count for a target exceeds 2^|deps|");
  return a;
}

bool ArbiterRegistry::has_arbiter(Var e, const Assignment &sigma) const {
  if (!formula_->is_existential(e))
    return false;
  Assignment key = sigma.restrict_to(formula_->deps(e));
  return index_.count({e, key}) != 0;
}

const ArbiterInfo &ArbiterRegistry::info(Var v) const {
  auto it = by_var_.find(v);
  if (it == by_var_.end())
    throw ContractError("variable " + std::to_string(v) +
                        " is not an arbiter");
  return infos_[it->second];
}

VarSet ArbiterRegistry::arbiter_vars() const {
  VarSet out;
  out.reserve(infos_.size());
  for (const ArbiterInfo &a : infos_)
    out.push_back(a.var);
  return out; // allocation order is ascending
}

CNF ArbiterRegistry::drain_new_clauses() {
  CNF out(clauses_.begin() + static_cast<ptrdiff_t>(drained_), clauses_.end());
  drained_ = clauses_.size();
  return out;
}

size_t ArbiterRegistry::count_for(Var e) const {
  size_t n = 0;
  for (const ArbiterInfo &a : infos_)
    if (a.target == e)
      ++n;
  return n;
}

size_t ArbiterRegistry::capacity() const {
  size_t total = 0;
  for (Var e : formula_->existential_order()) {
    size_t d = formula_->deps(e).size();
    if (d >= 62)
      return SIZE_MAX;
    size_t term = size_t{1} << d;
    if (total > SIZE_MAX - term)
      return SIZE_MAX;
    total += term;
  }
  return total;
}

std::vector<Lit>
ArbiterRegistry::matching_literals(const std::vector<Var> &arbiter_vars,
                                   const Assignment &rho) const {
  std::vector<Lit> out;
  out.reserve(arbiter_vars.size());
  for (Var a : arbiter_vars) {
    const ArbiterInfo &ai = info(a);
    auto v = rho.value(ai.target);
    if (!v)
      throw ContractError("assignment does not cover arbiter target " +
                          std::to_string(ai.target));
    out.push_back(Lit(a, !*v));
  }
  return out;
}

Clause forcing_clause(SatSolver &solver, const std::vector<Lit> &context,
                      Lit forced, const VarSet &keep_vars) {
  for (Lit l : context)
    DQCERT_CHECK(l.var() != forced.var(),
                 "forced variable may not appear in the context");
  std::vector<Lit> core = get_core(solver, context, {~forced});
  Clause c;
  for (Lit l : core)
    if (vs_contains(keep_vars, l.var()))
      c.push_back(~l);
  c.push_back(forced);
  return *normalize_clause(std::move(c));
}

namespace {

/// Terms clash iff they assign some variable both values.
bool terms_compatible(const Assignment &a, const Assignment &b) {
  for (auto [v, val] : a) {
    auto other = b.value(v);
    if (other && *other != val)
      return false;
  }
  return true;
}

} // namespace

ConsistencyResult check_consistency(const Dqbf &f, const CNF &clauses,
                                    const Assignment &tau,
                                    const VarSet &arbiter_vars) {
  // Implications grouped by forced existential; [0] negative, [1] positive.
  std::map<Var, std::array<std::vector<Assignment>, 2>> groups;

  for (const Clause &c : clauses) {
    bool satisfied = false;
    Assignment term;
    std::optional<Lit> head;
    for (Lit l : c) {
      Var v = l.var();
      if (vs_contains(arbiter_vars, v)) {
        auto tv = tau.literal_value(l);
        DQCERT_CHECK(tv.has_value(),
                     "arbiter assignment misses an arbiter in the clauses");
        if (*tv) {
          satisfied = true;
          break;
        }
      } else if (f.is_universal(v)) {
        // The clause fires when l is false.
        term.assign(v, l.negated());
      } else {
        DQCERT_CHECK(f.is_existential(v),
                     "clause variable is neither quantified nor an arbiter");
        DQCERT_CHECK(!head.has_value(),
                     "clause carries two existential literals");
        head = l;
      }
    }
    if (satisfied)
      continue;
    DQCERT_CHECK(head.has_value(),
                 "unsatisfied clause carries no existential literal");
    groups[head->var()][head->negated() ? 0 : 1].push_back(std::move(term));
  }

  for (const auto &[e, lists] : groups) {
    for (const Assignment &tp : lists[1]) {
      for (const Assignment &tn : lists[0]) {
        if (!terms_compatible(tp, tn))
          continue;
        Assignment sigma = tp.unioned(tn);
        for (Var u : f.universals())
          if (!sigma.contains(u))
            sigma.assign(u, false);
        return {false, std::move(sigma)};
      }
    }
  }
  return {true, {}};
}

} // namespace dqcert
