#include "dqcert/engine.hpp"

#include <algorithm>

namespace dqcert {

namespace {

/// Tseitin clauses asserting the negation of the matrix, allocating
/// auxiliaries through alloc. An empty matrix yields the empty clause (the
/// negation is unsatisfiable); a matrix with an empty clause yields nothing
/// (the negation is a tautology).
void add_negated_matrix(SatSolver &solver, const CNF &phi,
                        const std::function<Var()> &alloc) {
  CircuitStore store;
  std::vector<NodeId> clause_nodes;
  clause_nodes.reserve(phi.size());
  for (const Clause &c : phi) {
    std::vector<NodeId> lits;
    lits.reserve(c.size());
    for (Lit l : c)
      lits.push_back(literal_node(store, l));
    clause_nodes.push_back(store.make_or(lits));
  }
  NodeId not_phi = store.make_not(store.make_and(clause_nodes));
  TseitinResult enc = tseitin_assert_true(store, not_phi, alloc);
  for (Clause &c : enc.clauses)
    solver.add_clause(std::move(c));
}

} // namespace

DqbfSolver::DqbfSolver(const Dqbf &f, EngineConfig cfg)
    : f_(&f), cfg_(cfg), phi_(f.matrix()), registry_(f) {}

void DqbfSolver::prepare() {
  if (prepared_)
    return;
  prepared_ = true;
  detect_unates();
  reason_solver_.ensure_var(f_->max_var());
  for (const Clause &c : phi_)
    reason_solver_.add_clause(c);
  sync_reason_solver();
}

void DqbfSolver::sync_reason_solver() {
  for (Clause &c : registry_.drain_new_clauses())
    reason_solver_.add_clause(std::move(c));
  for (; forcing_synced_ < forcing_.size(); ++forcing_synced_)
    reason_solver_.add_clause(forcing_[forcing_synced_]);
}

void DqbfSolver::detect_unates() {
  if (cfg_.unate == UnateMode::Off)
    return;
  std::map<Var, std::pair<size_t, size_t>> occ; // positive, negative counts
  for (const Clause &c : phi_)
    for (Lit l : c)
      if (f_->is_existential(l.var())) {
        auto &p = occ[l.var()];
        ++(l.negated() ? p.second : p.first);
      }
  std::vector<Lit> fixed;
  for (Var e : f_->existential_order()) {
    auto it = occ.find(e);
    size_t pos = it == occ.end() ? 0 : it->second.first;
    size_t neg = it == occ.end() ? 0 : it->second.second;
    if (neg == 0) {
      fixed.push_back(Lit(e, false)); // pure positive (or absent)
    } else if (pos == 0) {
      fixed.push_back(Lit(e, true));
    } else if (cfg_.unate == UnateMode::Semantic) {
      for (Lit cand : {Lit(e, false), Lit(e, true)}) {
        if (semantically_unate(cand, fixed)) {
          fixed.push_back(cand);
          break;
        }
      }
    }
  }
  for (Lit l : fixed)
    phi_.push_back(Clause{l});
  stats_.unate_literals = fixed.size();
}

bool DqbfSolver::semantically_unate(Lit cand,
                                    const std::vector<Lit> &fixed) const {
  // cand is unate iff the matrix restricted by ~cand entails the matrix
  // restricted by cand, checked clause by clause; literals already fixed
  // count as part of the matrix.
  CNF base = phi_;
  for (Lit l : fixed)
    base.push_back(Clause{l});
  Assignment hi_bind, lo_bind;
  hi_bind.assign(cand.var(), !cand.negated());
  lo_bind.assign(cand.var(), cand.negated());
  CNF hi = restrict_cnf(base, hi_bind);
  CNF lo = restrict_cnf(base, lo_bind);
  SatSolver solver;
  solver.ensure_var(f_->max_var());
  for (const Clause &c : lo)
    solver.add_clause(c);
  for (const Clause &c : hi) {
    std::vector<Lit> assume;
    assume.reserve(c.size());
    for (Lit l : c)
      assume.push_back(~l);
    if (solver.solve(assume) == SolveStatus::Sat)
      return false;
  }
  return true;
}

Verdict DqbfSolver::solve() {
  DQCERT_CHECK(!solved_, "solver contexts are single-use");
  solved_ = true;
  prepare();
  return cfg_.mode == SolveMode::Basic ? solve_basic() : solve_cegis();
}

Verdict DqbfSolver::solve_basic() {
  // Phase 1: grow arbiters until every existential is defined over its
  // dependencies plus the arbiters. Each witness names an unseen key, so the
  // per-variable loop runs at most 2^|deps| times.
  DefinabilityOrder ord = definability_order(*f_, {});
  for (Var e : ord.order) {
    while (true) {
      ++stats_.definability_queries;
      VarSet s = vs_union(f_->deps(e), registry_.arbiter_vars());
      CNF formula = phi_;
      const CNF &pairs = registry_.clauses();
      formula.insert(formula.end(), pairs.begin(), pairs.end());
      DefinitionCheck dc =
          try_get_definition(e, s, formula, cfg_.interpolation);
      if (dc.defined) {
        defs_.emplace(e, dc.definition);
        ++stats_.definitions_found;
        break;
      }
      Assignment key = dc.witness.restrict_to(f_->deps(e));
      DQCERT_CHECK(!registry_.has_arbiter(e, key),
                   "definability witness repeated an arbiter key");
      registry_.arbiter(e, key);
      ++stats_.arbiter_pairs;
      DQCERT_CHECK(registry_.count() <= registry_.capacity(),
                   "arbiter count exceeded its bound");
    }
  }
  sync_reason_solver();

  for (Var a : registry_.arbiter_vars()) {
    arbiter_solver_.ensure_var(a);
    arbiter_solver_.set_default_polarity(a, true); // initial tau all-true
  }

  // Validity check solver, built once: not-matrix ^ the definitions, solved
  // under tau. UNSAT means the definitions with tau substituted are a model.
  SatSolver validity;
  validity.ensure_var(registry_.first_free_var() - 1);
  Var next = registry_.first_free_var() - 1;
  auto alloc = [&next]() { return ++next; };
  add_negated_matrix(validity, phi_, alloc);
  for (const auto &[e, c] : defs_) {
    TseitinResult enc = tseitin_assert_equal(e, *c.store(), c.root(), alloc);
    for (Clause &cl : enc.clauses)
      validity.add_clause(std::move(cl));
  }

  std::set<std::string> seen_tau;
  while (true) {
    DQCERT_CHECK(++stats_.iterations <= cfg_.max_iterations,
                 "iteration cap exceeded");
    if (arbiter_solver_.solve() != SolveStatus::Sat)
      return make_false_verdict();
    tau_ = arbiter_solver_.model().restrict_to(registry_.arbiter_vars());
    if (cfg_.check_invariants)
      DQCERT_CHECK(seen_tau.insert(tau_.to_string()).second,
                   "arbiter assignment repeated");
    if (validity.solve(tau_.literals()) != SolveStatus::Sat)
      return make_true_verdict();
    Assignment sigma_u = validity.model().restrict_to(f_->universals());
    std::vector<Lit> assume = tau_.literals();
    for (Lit l : sigma_u.literals())
      assume.push_back(l);
    std::vector<Lit> rho = get_core(reason_solver_, assume);
    Clause learned;
    for (Lit l : rho)
      if (registry_.is_arbiter(l.var()))
        learned.push_back(~l);
    arbiter_solver_.add_clause(learned);
    arbiter_conflicts_.push_back(learned);
    ++stats_.arbiter_solver_clauses;
  }
}

Verdict DqbfSolver::solve_cegis() {
  while (true) {
    DQCERT_CHECK(++stats_.iterations <= cfg_.max_iterations,
                 "iteration cap exceeded");
    find_definitions();
    CheckResult cr = check_arbiter_assignment();
    if (cr.valid)
      return make_true_verdict();
    if (cfg_.check_invariants) {
      auto key =
          std::make_pair(cr.counterexample.to_string(), tau_.to_string());
      DQCERT_CHECK(seen_conflicts_.insert(key).second,
                   "conflict state repeated");
    }
    size_t forcing_before = forcing_.size();
    size_t learned_before = arbiter_conflicts_.size();
    ConflictOutcome out = analyze_conflict(cr.counterexample);
    DQCERT_CHECK(forcing_.size() > forcing_before ||
                     arbiter_conflicts_.size() > learned_before,
                 "conflict analysis made no progress");
    if (out == ConflictOutcome::ForcingProgress)
      continue;
    if (!find_new_arbiter_assignment())
      return make_false_verdict();
  }
}

void DqbfSolver::find_definitions() {
  // Anything that could change a query's result also changes this count.
  size_t gen = registry_.clauses().size() + forcing_.size() + defs_.size();
  DefinabilityOrder ord = definability_order(*f_, registry_.arbiter_vars());
  for (size_t i = 0; i < ord.order.size(); ++i) {
    Var e = ord.order[i];
    if (!f_->is_existential(e))
      continue; // arbiters lead the order
    if (defs_.count(e))
      continue;
    auto lq = last_query_.find(e);
    if (lq != last_query_.end() && lq->second == gen)
      continue;
    last_query_[e] = gen;
    ++stats_.definability_queries;
    VarSet s = vs_union(f_->deps(e), registry_.arbiter_vars());
    for (size_t j = 0; j < i; ++j) {
      Var x = ord.order[j];
      if (f_->is_existential(x) && defs_.count(x) &&
          vs_subset(f_->deps(x), f_->deps(e)))
        s.push_back(x);
    }
    vs_normalize(s);
    CNF formula = phi_;
    const CNF &pairs = registry_.clauses();
    formula.insert(formula.end(), pairs.begin(), pairs.end());
    formula.insert(formula.end(), forcing_.begin(), forcing_.end());
    DefinitionCheck dc = try_get_definition(e, s, formula, cfg_.interpolation);
    if (dc.defined) {
      defs_.emplace(e, dc.definition);
      ++stats_.definitions_found;
    }
  }
}

DqbfSolver::CheckResult DqbfSolver::check_arbiter_assignment() {
  // Fresh solver per check: not-matrix ^ definitions ^ forcing ^ arbiter
  // pairs, queried under tau plus default literals for the undefined.
  SatSolver checker;
  checker.ensure_var(registry_.first_free_var() - 1);
  Var next = registry_.first_free_var() - 1;
  auto alloc = [&next]() { return ++next; };
  add_negated_matrix(checker, phi_, alloc);
  for (const auto &[e, c] : defs_) {
    TseitinResult enc = tseitin_assert_equal(e, *c.store(), c.root(), alloc);
    for (Clause &cl : enc.clauses)
      checker.add_clause(std::move(cl));
  }
  for (const Clause &c : forcing_)
    checker.add_clause(c);
  for (const Clause &c : registry_.clauses())
    checker.add_clause(c);

  std::vector<Lit> defaults;
  for (Var e : f_->existential_order())
    if (!defs_.count(e))
      defaults.push_back(Lit(e, !cfg_.default_value));

  std::vector<Lit> tau_lits = tau_.literals();
  while (true) {
    std::vector<Lit> assume = tau_lits;
    assume.insert(assume.end(), defaults.begin(), defaults.end());
    if (checker.solve(assume) == SolveStatus::Sat) {
      VarSet ue = f_->universals();
      for (Var e : f_->existential_order())
        ue.push_back(e);
      vs_normalize(ue);
      return {false, checker.model().restrict_to(ue)};
    }
    // Defaults are guesses, not constraints: drop the ones the conflict
    // used and retry, so only conflicts among tau and real clauses remain.
    const std::vector<Lit> &failed = checker.failed_assumptions();
    std::set<Lit> failed_set(failed.begin(), failed.end());
    size_t before = defaults.size();
    defaults.erase(std::remove_if(defaults.begin(), defaults.end(),
                                  [&](Lit l) { return failed_set.count(l); }),
                   defaults.end());
    if (defaults.size() == before)
      break;
    stats_.default_retractions += before - defaults.size();
  }

  ++stats_.consistency_checks;
  CNF af = registry_.clauses();
  af.insert(af.end(), forcing_.begin(), forcing_.end());
  ConsistencyResult cons =
      check_consistency(*f_, af, tau_, registry_.arbiter_vars());
  if (cons.consistent)
    return {true, {}};
  return {false, cons.counterexample};
}

DqbfSolver::ConflictOutcome
DqbfSolver::analyze_conflict(const Assignment &sigma) {
  sync_reason_solver();
  Assignment sigma_u = sigma.restrict_to(f_->universals());
  DQCERT_CHECK(sigma_u.total_over(f_->universals()),
               "conflict assignment must cover the universals");
  std::vector<Lit> assume = sigma.literals();
  for (Lit l : tau_.literals())
    assume.push_back(l);
  std::vector<Lit> rho = get_core(reason_solver_, assume);
  std::vector<Lit> rho_e; // ascending variable order (cores are sorted)
  std::vector<Lit> rho_a;
  for (Lit l : rho) {
    if (f_->is_existential(l.var()))
      rho_e.push_back(l);
    else if (registry_.is_arbiter(l.var()))
      rho_a.push_back(l);
  }

  std::vector<Lit> context = sigma_u.literals();
  for (Lit l : tau_.literals())
    context.push_back(l);

  bool opposite_forced = false;
  std::vector<Lit> not_forced;
  for (Lit l : rho_e) {
    std::vector<Lit> probe = context;
    probe.push_back(~l);
    if (reason_solver_.solve(probe) == SolveStatus::Unsat) {
      // The formula already entails l here; remember which part of tau the
      // entailment rests on.
      for (Lit rl : get_core(reason_solver_, context, {~l}))
        if (registry_.is_arbiter(rl.var()))
          rho_a.push_back(rl);
      continue;
    }
    probe.back() = l;
    if (reason_solver_.solve(probe) == SolveStatus::Unsat) {
      // The counterexample value of l is refuted: record the opposite as a
      // forcing clause over the variable's dependencies and the arbiters.
      VarSet keep = vs_union(f_->deps(l.var()), registry_.arbiter_vars());
      Clause fc = forcing_clause(reason_solver_, context, ~l, keep);
      forcing_.push_back(fc);
      reason_solver_.add_clause(fc);
      ++forcing_synced_;
      ++stats_.forcing_clauses;
      opposite_forced = true;
      continue;
    }
    not_forced.push_back(l);
  }
  if (opposite_forced)
    return ConflictOutcome::ForcingProgress;

  // No literal was newly forced: pin each undetermined one with an arbiter
  // keyed by this universal assignment, then learn the minimized arbiter
  // reason as a conflict clause.
  std::vector<Var> fresh;
  Assignment values;
  for (Lit l : not_forced) {
    DQCERT_CHECK(!registry_.has_arbiter(l.var(), sigma_u),
                 "existing arbiter left its literal unforced");
    Var a = registry_.arbiter(l.var(), sigma_u);
    fresh.push_back(a);
    values.assign(l.var(), !l.negated());
    arbiter_solver_.ensure_var(a);
    arbiter_solver_.set_default_polarity(a, true);
    ++stats_.arbiter_pairs;
    DQCERT_CHECK(registry_.count() <= registry_.capacity(),
                 "arbiter count exceeded its bound");
  }
  sync_reason_solver();
  for (Lit ml : registry_.matching_literals(fresh, values))
    rho_a.push_back(ml);

  std::sort(rho_a.begin(), rho_a.end());
  rho_a.erase(std::unique(rho_a.begin(), rho_a.end()), rho_a.end());
  std::vector<Lit> cand = sigma_u.literals();
  cand.insert(cand.end(), rho_a.begin(), rho_a.end());
  Clause learned;
  for (Lit l : get_core(reason_solver_, cand))
    if (registry_.is_arbiter(l.var()))
      learned.push_back(~l);
  arbiter_solver_.add_clause(learned);
  arbiter_conflicts_.push_back(learned);
  ++stats_.arbiter_solver_clauses;
  return ConflictOutcome::ArbiterClauseAdded;
}

bool DqbfSolver::find_new_arbiter_assignment() {
  if (arbiter_solver_.solve() != SolveStatus::Sat)
    return false;
  tau_ = arbiter_solver_.model().restrict_to(registry_.arbiter_vars());
  return true;
}

Verdict DqbfSolver::make_true_verdict() {
  stats_.arbiter_vars = registry_.count();
  AssemblyInputs in;
  in.formula = f_;
  in.registry = &registry_;
  in.definitions = &defs_;
  in.forcing = &forcing_;
  in.tau = &tau_;
  in.default_value = cfg_.default_value;
  Verdict v;
  v.is_true = true;
  v.model = assemble_model(in);
  v.stats = stats_;
  return v;
}

Verdict DqbfSolver::make_false_verdict() {
  stats_.arbiter_vars = registry_.count();
  Verdict v;
  v.is_true = false;
  v.stats = stats_;
  return v;
}

Verdict solve_dqbf(const Dqbf &f, const EngineConfig &cfg) {
  DqbfSolver solver(f, cfg);
  return solver.solve();
}

} // namespace dqcert
