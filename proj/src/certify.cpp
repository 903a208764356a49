#include "dqcert/certify.hpp"

#include "dqcert/definability.hpp"
#include "dqcert/satsolver.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <set>
#include <sstream>

namespace dqcert {

namespace {

/// Decision list for an undefined existential: arbiter entries first, then
/// the forcing entries whose arbiter part tau satisfies, then the default.
NodeId decision_list(Var e, const AssemblyInputs &in, CircuitStore &store) {
  const Dqbf &f = *in.formula;
  struct Entry {
    NodeId cond;
    bool value;
  };
  std::vector<Entry> entries;

  for (const ArbiterInfo &ai : in.registry->arbiters()) {
    if (ai.target != e)
      continue;
    auto v = in.tau->value(ai.var);
    DQCERT_CHECK(v.has_value(), "assembly needs a total arbiter assignment");
    entries.push_back({term_node(store, ai.key), *v});
  }

  for (const Clause &c : *in.forcing) {
    Lit head(0, false);
    bool found = false;
    Assignment premise;
    bool active = true;
    for (Lit l : c) {
      Var v = l.var();
      if (f.is_existential(v)) {
        DQCERT_CHECK(!found, "forcing clause with two existential literals");
        found = true;
        head = l;
      } else if (in.registry->is_arbiter(v)) {
        // The clause fires only when its arbiter disjuncts are all false.
        auto lv = in.tau->literal_value(l);
        DQCERT_CHECK(lv.has_value(), "tau misses an arbiter of a forcing clause");
        if (*lv) {
          active = false;
          break;
        }
      } else {
        DQCERT_CHECK(f.is_universal(v), "foreign variable in forcing clause");
        premise.assign(v, l.negated()); // premise literal is ~l
      }
    }
    if (!active)
      continue;
    DQCERT_CHECK(found, "forcing clause without existential literal");
    if (head.var() != e)
      continue;
    entries.push_back({term_node(store, premise), !head.negated()});
  }

  NodeId out = store.constant(in.default_value);
  for (auto it = entries.rbegin(); it != entries.rend(); ++it)
    out = store.make_ite(it->cond, store.constant(it->value), out);
  return out;
}

} // namespace

SkolemModel assemble_model(const AssemblyInputs &in) {
  DQCERT_CHECK(in.formula && in.registry && in.definitions && in.forcing &&
                   in.tau,
               "assembly inputs incomplete");
  const Dqbf &f = *in.formula;
  SkolemModel m;
  m.store = std::make_shared<CircuitStore>();

  DefinabilityOrder ord = definability_order(f, in.registry->arbiter_vars());
  std::map<Var, NodeId> built; // arbiters and existentials assembled so far
  for (Var v : ord.order) {
    if (in.registry->is_arbiter(v)) {
      auto tv = in.tau->value(v);
      DQCERT_CHECK(tv.has_value(), "assembly needs a total arbiter assignment");
      built[v] = m.store->constant(*tv);
      continue;
    }
    NodeId fn;
    auto def = in.definitions->find(v);
    if (def != in.definitions->end()) {
      const Circuit &c = def->second;
      std::map<Var, NodeId> leaf;
      for (Var s : c.support()) {
        if (f.is_universal(s))
          continue;
        auto b = built.find(s);
        DQCERT_CHECK(b != built.end(),
                     "definition leaf assembled out of order");
        leaf[s] = b->second;
      }
      fn = substitute(*c.store(), c.root(), leaf, *m.store);
    } else {
      fn = decision_list(v, in, *m.store);
    }
    if (!vs_subset(m.store->support(fn), f.deps(v)))
      throw ContractError("assembled function escapes the dependency set of " +
                          std::to_string(v));
    built[v] = fn;
    m.functions[v] = fn;
  }
  return m;
}

bool model_satisfies(const Dqbf &f, const SkolemModel &m,
                     const Assignment &sigma) {
  Assignment full = sigma;
  for (const auto &[e, fn] : m.functions)
    full.assign(e, m.store->evaluate(fn, sigma));
  return f.matrix_satisfied(full);
}

bool model_satisfies_everywhere(const Dqbf &f, const SkolemModel &m,
                                int max_universals) {
  const VarSet &us = f.universals();
  if (static_cast<int>(us.size()) > max_universals)
    throw ContractError("universal enumeration refused beyond " +
                        std::to_string(max_universals) + " variables");
  for (uint64_t bits = 0; bits < (uint64_t{1} << us.size()); ++bits) {
    Assignment sigma;
    for (size_t i = 0; i < us.size(); ++i)
      sigma.assign(us[i], (bits >> i) & 1);
    if (!model_satisfies(f, m, sigma))
      return false;
  }
  return true;
}

std::string emit_model(const Dqbf &f, const SkolemModel &m) {
  for (Var e : f.existential_order())
    DQCERT_CHECK(m.functions.count(e) != 0,
                 "model misses a function for an existential");

  Var next = f.max_var();
  auto alloc = [&next]() { return ++next; };

  std::ostringstream head, body;
  CNF clauses;
  for (Var e : f.existential_order()) {
    Var before = next;
    TseitinResult enc =
        tseitin_assert_equal(e, *m.store, m.functions.at(e), alloc);
    head << "c skolem " << e << " depends";
    for (Var d : f.deps(e))
      head << ' ' << d;
    head << " 0\n";
    head << "c aux-range " << (before + 1) << ' ' << next << "\n";
    for (Clause &c : enc.clauses)
      clauses.push_back(std::move(c));
  }
  for (const Clause &c : clauses) {
    for (Lit l : c)
      body << l.to_dimacs() << ' ';
    body << "0\n";
  }
  std::ostringstream out;
  out << head.str();
  out << "p cnf " << next << ' ' << clauses.size() << "\n";
  out << body.str();
  return out.str();
}

namespace {

[[noreturn]] void model_parse_error(const std::string &msg, int line) {
  throw ParseError(msg, line, 1);
}

} // namespace

ParsedModel parse_model_file(const std::string &text) {
  ParsedModel out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool have_p = false;
  size_t expect_clauses = 0;
  Var pending_skolem = 0; // nonzero while a skolem header awaits its range
  std::vector<int> partial; // literals of an unterminated clause

  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok))
      continue;
    if (tok == "c") {
      std::string kind;
      if (!(ls >> kind))
        continue;
      if (kind == "skolem") {
        if (pending_skolem != 0)
          model_parse_error("skolem header without aux-range", lineno);
        if (have_p)
          model_parse_error("skolem header after the p line", lineno);
        long long e;
        std::string dep;
        if (!(ls >> e) || e <= 0 || !(ls >> dep) || dep != "depends")
          model_parse_error("malformed skolem header", lineno);
        VarSet deps;
        long long d;
        bool closed = false;
        while (ls >> d) {
          if (d == 0) {
            closed = true;
            break;
          }
          if (d < 0)
            model_parse_error("negative variable in skolem header", lineno);
          deps.push_back(static_cast<Var>(d));
        }
        if (!closed)
          model_parse_error("skolem header missing terminating 0", lineno);
        vs_normalize(deps);
        if (out.depends.count(static_cast<Var>(e)))
          model_parse_error("duplicate skolem header", lineno);
        out.depends[static_cast<Var>(e)] = deps;
        pending_skolem = static_cast<Var>(e);
      } else if (kind == "aux-range") {
        if (pending_skolem == 0)
          model_parse_error("aux-range without preceding skolem header",
                            lineno);
        long long a, b;
        if (!(ls >> a >> b) || a <= 0 || b < 0)
          model_parse_error("malformed aux-range", lineno);
        out.aux_range[pending_skolem] = {static_cast<Var>(a),
                                         static_cast<Var>(b)};
        pending_skolem = 0;
      } else if (pending_skolem != 0) {
        model_parse_error("expected aux-range after skolem header", lineno);
      }
      continue;
    }
    if (pending_skolem != 0)
      model_parse_error("expected aux-range after skolem header", lineno);
    if (tok == "p") {
      std::string fmt;
      long long mv, nc;
      if (have_p)
        model_parse_error("second p line", lineno);
      if (!(ls >> fmt >> mv >> nc) || fmt != "cnf" || mv < 0 || nc < 0)
        model_parse_error("malformed p line", lineno);
      out.max_var = static_cast<Var>(mv);
      expect_clauses = static_cast<size_t>(nc);
      have_p = true;
      continue;
    }
    if (!have_p)
      model_parse_error("clause before the p line", lineno);
    // Clause literals; a clause may span lines and ends at 0.
    std::istringstream cs(line);
    long long v;
    while (cs >> v) {
      if (v == 0) {
        Clause c;
        for (int lit : partial)
          c.push_back(Lit::from_dimacs(lit));
        partial.clear();
        std::sort(c.begin(), c.end());
        out.clauses.push_back(std::move(c));
      } else {
        if (std::abs(v) > out.max_var)
          model_parse_error("literal beyond the declared maximum", lineno);
        partial.push_back(static_cast<int>(v));
      }
    }
    if (!cs.eof())
      model_parse_error("unexpected token in clause", lineno);
  }
  if (pending_skolem != 0)
    model_parse_error("skolem header without aux-range", lineno);
  if (!partial.empty())
    model_parse_error("unterminated clause", lineno);
  if (!have_p)
    model_parse_error("missing p line", lineno);
  if (out.clauses.size() != expect_clauses)
    model_parse_error("clause count does not match the p line", lineno);
  return out;
}

namespace {

ValidationReport invalid(std::string reason) {
  ValidationReport r;
  r.valid = false;
  r.reason = std::move(reason);
  return r;
}

} // namespace

ValidationReport validate_model(const Dqbf &f, const ParsedModel &m) {
  // Structural pass. Every existential owns a block; dependency claims must
  // stay within the formula's dependency sets.
  for (const auto &[e, deps] : m.depends) {
    if (!f.is_existential(e))
      return invalid("function header for non-existential variable " +
                     std::to_string(e));
    if (!vs_subset(deps, f.deps(e)))
      return invalid("declared dependencies of " + std::to_string(e) +
                     " exceed its dependency set");
    if (!m.aux_range.count(e))
      return invalid("missing aux-range for " + std::to_string(e));
  }
  for (Var e : f.existential_order())
    if (!m.depends.count(e))
      return invalid("missing function for existential " + std::to_string(e));

  // Auxiliary ranges must be fresh and pairwise disjoint.
  std::map<Var, Var> aux_owner; // aux var -> existential
  for (const auto &[e, r] : m.aux_range) {
    if (r.first > r.second)
      continue; // empty range
    if (r.first <= f.max_var())
      return invalid("auxiliary range of " + std::to_string(e) +
                     " overlaps formula variables");
    if (r.second > m.max_var)
      return invalid("auxiliary range of " + std::to_string(e) +
                     " exceeds the declared maximum");
    for (Var v = r.first; v <= r.second; ++v) {
      if (aux_owner.count(v))
        return invalid("auxiliary ranges overlap at " + std::to_string(v));
      aux_owner[v] = e;
    }
  }

  // Cone discipline: grow each block from its output through its own
  // auxiliaries; everything else must be a declared dependency. Each clause
  // must land in exactly one block.
  std::map<Var, std::vector<size_t>> by_var;
  for (size_t i = 0; i < m.clauses.size(); ++i)
    for (Lit l : m.clauses[i])
      by_var[l.var()].push_back(i);
  std::vector<Var> claimed(m.clauses.size(), 0);
  for (const auto &[e, deps] : m.depends) {
    std::vector<Var> stack{e};
    std::set<Var> cone{e};
    auto own_aux = [&, e = e](Var v) {
      auto r = m.aux_range.at(e);
      return v >= r.first && v <= r.second;
    };
    while (!stack.empty()) {
      Var v = stack.back();
      stack.pop_back();
      auto it = by_var.find(v);
      if (it == by_var.end())
        continue;
      for (size_t ci : it->second) {
        if (claimed[ci] == e)
          continue;
        if (claimed[ci] != 0)
          return invalid("clause " + std::to_string(ci) +
                         " belongs to two function blocks");
        claimed[ci] = e;
        for (Lit l : m.clauses[ci]) {
          Var w = l.var();
          if (w == e)
            continue;
          if (own_aux(w)) {
            if (cone.insert(w).second)
              stack.push_back(w);
            continue;
          }
          if (vs_contains(deps, w))
            continue;
          return invalid("block of " + std::to_string(e) +
                         " mentions variable " + std::to_string(w) +
                         " outside its dependencies");
        }
      }
    }
  }
  for (size_t i = 0; i < m.clauses.size(); ++i)
    if (claimed[i] == 0)
      return invalid("clause " + std::to_string(i) +
                     " outside every function block");

  // Semantic pass: one incremental solver; model ^ ~C must be unsatisfiable
  // for every matrix clause C.
  SatSolver solver;
  solver.ensure_var(std::max(f.max_var(), m.max_var));
  for (const Clause &c : m.clauses)
    solver.add_clause(c);
  if (solver.solve() != SolveStatus::Sat)
    return invalid("model clauses are unsatisfiable");

  VarSet ue = f.universals();
  for (Var e : f.existential_order())
    ue.push_back(e);
  vs_normalize(ue);

  ValidationReport rep;
  rep.clause_seconds.reserve(f.matrix().size());
  for (size_t i = 0; i < f.matrix().size(); ++i) {
    std::vector<Lit> assume;
    for (Lit l : f.matrix()[i])
      assume.push_back(~l);
    auto t0 = std::chrono::steady_clock::now();
    SolveStatus r = solver.solve(assume);
    auto t1 = std::chrono::steady_clock::now();
    rep.clause_seconds.push_back(
        std::chrono::duration<double>(t1 - t0).count());
    if (r == SolveStatus::Sat) {
      rep.valid = false;
      rep.reason = "matrix clause " + std::to_string(i) +
                   " is not entailed by the model";
      rep.failing_clause = static_cast<int>(i);
      rep.witness = solver.model().restrict_to(ue);
      return rep;
    }
  }
  return rep;
}

bool enumerate_model_check(const Dqbf &f, const ParsedModel &m,
                           int max_universals) {
  const VarSet &us = f.universals();
  if (static_cast<int>(us.size()) > max_universals)
    throw ContractError("universal enumeration refused beyond " +
                        std::to_string(max_universals) + " variables");
  SatSolver solver;
  solver.ensure_var(std::max(f.max_var(), m.max_var));
  for (const Clause &c : m.clauses)
    solver.add_clause(c);
  for (uint64_t bits = 0; bits < (uint64_t{1} << us.size()); ++bits) {
    Assignment sigma;
    for (size_t i = 0; i < us.size(); ++i)
      sigma.assign(us[i], (bits >> i) & 1);
    if (solver.solve(sigma.literals()) != SolveStatus::Sat)
      return false; // the model leaves sigma without a response
    Assignment full = sigma;
    for (Var e : f.existential_order())
      full.assign(e, solver.model().value(e).value_or(false));
    if (!f.matrix_satisfied(full))
      return false;
  }
  return true;
}

} // namespace dqcert
