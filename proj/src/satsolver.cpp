#include "dqcert/satsolver.hpp"

#include <algorithm>
#include <cmath>

namespace dqcert {

namespace {

// Luby restart sequence (series index -> multiplier).
double luby(double y, int x) {
  int size, seq;
  for (size = 1, seq = 0; size < x + 1; seq++, size = 2 * size + 1)
    ;
  while (size - 1 != x) {
    size = (size - 1) >> 1;
    seq--;
    x = x % size;
  }
  return std::pow(y, seq);
}

} // namespace

SatSolver::SatSolver(ProofRecorder *proof) : proof_(proof) {
  ensure_var(0);
}

Var SatSolver::new_var() {
  Var v = static_cast<Var>(nvars_ + 1);
  ensure_var(v);
  return v;
}

void SatSolver::ensure_var(Var v) {
  if (static_cast<size_t>(v) <= nvars_ && !assigns_.empty())
    return;
  nvars_ = std::max(nvars_, static_cast<size_t>(v));
  assigns_.resize(nvars_ + 1, 0);
  level_.resize(nvars_ + 1, 0);
  reason_.resize(nvars_ + 1, -1);
  activity_.resize(nvars_ + 1, 0.0);
  seen_.resize(nvars_ + 1, 0);
  size_t old_pol = polarity_.size();
  polarity_.resize(nvars_ + 1, 0);
  default_pol_.resize(nvars_ + 1, 0);
  for (size_t i = old_pol; i < polarity_.size(); ++i)
    polarity_[i] = default_pol_[i];
  watches_.resize(2 * (nvars_ + 1));
}

void SatSolver::set_default_polarity(Var v, bool value) {
  ensure_var(v);
  default_pol_[v] = value ? 1 : 0;
  polarity_[v] = default_pol_[v];
}

void SatSolver::enqueue(Lit p, int32_t from) {
  DQCERT_CHECK(value(p) == 0, "enqueue of an assigned literal");
  assigns_[p.var()] = p.negated() ? -1 : 1;
  level_[p.var()] = decision_level();
  reason_[p.var()] = from;
  trail_.push_back(p);
}

void SatSolver::attach(int32_t cref) {
  const auto &ls = clauses_[cref].lits;
  watches_[(~ls[0]).code()].push_back({cref, ls[1]});
  watches_[(~ls[1]).code()].push_back({cref, ls[0]});
}

void SatSolver::cancel_until(int level) {
  if (decision_level() <= level)
    return;
  for (size_t i = trail_.size(); i-- > trail_lim_[level];) {
    Var x = trail_[i].var();
    polarity_[x] = assigns_[x] == 1 ? 1 : 0;
    assigns_[x] = 0;
    reason_[x] = -1;
    level_[x] = 0;
  }
  qhead_ = trail_lim_[level];
  trail_.resize(trail_lim_[level]);
  trail_lim_.resize(level);
}

void SatSolver::add_clause(Clause c) {
  for (Lit l : c)
    ensure_var(l.var());
  auto norm = normalize_clause(std::move(c));
  if (!norm)
    return; // tautology: inert, and never a proof leaf
  if (!ok_)
    return;
  if (decision_level() > 0)
    cancel_until(0);
  Clause cl = std::move(*norm);
  int32_t leaf = proof_ ? proof_->add_leaf(cl, adding_to_a_) : -1;
  ++stats_input_clauses_;
  if (cl.empty()) {
    if (proof_)
      mark_unsat(leaf);
    ok_ = false;
    return;
  }
  ClauseData cd;
  cd.lits = std::move(cl);
  cd.proof_step = leaf;
  clauses_.push_back(std::move(cd));
  int32_t cref = static_cast<int32_t>(clauses_.size() - 1);
  auto &ls = clauses_[cref].lits;

  // Arrange watches against the level-zero trail: prefer a satisfied
  // literal up front, else two unfalsified ones; a single unfalsified
  // literal propagates, none at all is an immediate refutation.
  int true_at = -1;
  std::vector<size_t> nonfalse;
  for (size_t i = 0; i < ls.size(); ++i) {
    lbool v = value(ls[i]);
    if (v == 1 && true_at < 0)
      true_at = static_cast<int>(i);
    if (v != -1)
      nonfalse.push_back(i);
  }
  if (true_at >= 0) {
    std::swap(ls[0], ls[static_cast<size_t>(true_at)]);
    if (ls.size() >= 2)
      attach(cref);
    return;
  }
  if (nonfalse.empty()) {
    if (proof_)
      mark_unsat(chain_resolve_levelzero(leaf, ls));
    ok_ = false;
    return;
  }
  std::swap(ls[0], ls[nonfalse[0]]);
  if (nonfalse.size() == 1) {
    if (ls.size() >= 2)
      attach(cref);
    enqueue(ls[0], cref);
    return;
  }
  std::swap(ls[1], ls[nonfalse[1]]);
  attach(cref);
}

int32_t SatSolver::propagate() {
  while (qhead_ < trail_.size()) {
    Lit p = trail_[qhead_++];
    ++stats_propagations_;
    auto &ws = watches_[p.code()];
    size_t i = 0, j = 0;
    int32_t confl = -1;
    while (i < ws.size()) {
      Watcher w = ws[i];
      if (value(w.blocker) == 1) {
        ws[j++] = ws[i++];
        continue;
      }
      ClauseData &c = clauses_[w.cref];
      ++i;
      Lit false_lit = ~p;
      if (c.lits[0] == false_lit)
        std::swap(c.lits[0], c.lits[1]);
      Lit first = c.lits[0];
      if (first != w.blocker && value(first) == 1) {
        ws[j++] = {w.cref, first};
        continue;
      }
      bool moved = false;
      for (size_t k = 2; k < c.lits.size(); ++k) {
        if (value(c.lits[k]) != -1) {
          std::swap(c.lits[1], c.lits[k]);
          watches_[(~c.lits[1]).code()].push_back({w.cref, first});
          moved = true;
          break;
        }
      }
      if (moved)
        continue;
      ws[j++] = {w.cref, first};
      if (value(first) == -1) {
        confl = w.cref;
        qhead_ = trail_.size();
        while (i < ws.size())
          ws[j++] = ws[i++];
      } else {
        enqueue(first, w.cref);
      }
    }
    ws.resize(j);
    if (confl != -1)
      return confl;
  }
  return -1;
}

void SatSolver::bump(Var v) {
  activity_[v] += var_inc_;
  if (activity_[v] > 1e100) {
    for (size_t x = 1; x <= nvars_; ++x)
      activity_[x] *= 1e-100;
    var_inc_ *= 1e-100;
  }
}

Var SatSolver::pick_branch_var() {
  Var best = 0;
  double best_act = -1.0;
  for (size_t v = 1; v <= nvars_; ++v)
    if (assigns_[v] == 0 && activity_[v] > best_act) {
      best = static_cast<Var>(v);
      best_act = activity_[v];
    }
  return best;
}

void SatSolver::analyze(int32_t confl, Clause &learnt, int &bt_level,
                        Chain &chain) {
  // First-UIP without minimization. In proof mode, literals false at level
  // zero stay in the learned clause so the recorded chain resolves to
  // exactly the clause learned.
  const bool keep_false = proof_ != nullptr;
  learnt.clear();
  learnt.push_back(Lit()); // slot for the asserting literal
  chain.clear();
  int path_count = 0;
  Lit p;
  bool have_p = false;
  size_t index = trail_.size();
  int32_t cur = confl;
  for (;;) {
    const ClauseData &c = clauses_[cur];
    for (Lit q : c.lits) {
      if (have_p && q == p)
        continue;
      Var v = q.var();
      if (seen_[v])
        continue;
      if (level_[v] > 0 || keep_false) {
        seen_[v] = 1;
        if (level_[v] > 0)
          bump(v);
        if (level_[v] >= decision_level())
          ++path_count;
        else
          learnt.push_back(q);
      }
    }
    while (!seen_[trail_[--index].var()])
      ;
    p = trail_[index];
    have_p = true;
    seen_[p.var()] = 0;
    --path_count;
    if (path_count <= 0)
      break;
    cur = reason_[p.var()];
    DQCERT_CHECK(cur != -1, "conflict analysis expanded a decision");
    chain.push_back({p, cur});
  }
  learnt[0] = ~p;
  for (size_t i = 1; i < learnt.size(); ++i)
    seen_[learnt[i].var()] = 0;

  if (learnt.size() == 1) {
    bt_level = 0;
  } else {
    size_t maxi = 1;
    for (size_t i = 2; i < learnt.size(); ++i)
      if (level_[learnt[i].var()] > level_[learnt[maxi].var()])
        maxi = i;
    std::swap(learnt[1], learnt[maxi]);
    bt_level = level_[learnt[1].var()];
  }
}

int32_t SatSolver::learn_clause(Clause learnt, const Chain &chain,
                                int32_t confl) {
  int32_t step = -1;
  if (proof_) {
    int32_t cur_step = proof_step_of(confl);
    for (auto [p, rcref] : chain) {
      int32_t r_step = proof_step_of(rcref);
      DQCERT_CHECK(r_step >= 0, "reason clause without proof step");
      cur_step = p.negated() ? proof_->add_res(p.var(), cur_step, r_step)
                             : proof_->add_res(p.var(), r_step, cur_step);
    }
    auto norm = normalize_clause(learnt);
    DQCERT_CHECK(norm && *norm == proof_->clause_of(cur_step),
                 "learned clause differs from its resolution chain");
    step = cur_step;
  }
  ClauseData cd;
  cd.lits = std::move(learnt);
  cd.proof_step = step;
  cd.learned = true;
  clauses_.push_back(std::move(cd));
  int32_t cref = static_cast<int32_t>(clauses_.size() - 1);
  if (clauses_[cref].lits.size() >= 2)
    attach(cref);
  ++stats_learned_clauses_;
  return cref;
}

int32_t SatSolver::chain_resolve_levelzero(int32_t start_step, Clause cur) {
  // Resolves every trail literal out of `cur` in reverse trail order; at
  // level zero each has a reason clause, so this terminates in the empty
  // clause.
  auto norm = normalize_clause(std::move(cur));
  DQCERT_CHECK(norm.has_value(), "tautological conflict clause");
  Clause work = std::move(*norm);
  int32_t cur_step = start_step;
  for (size_t i = trail_.size(); i-- > 0;) {
    Lit p = trail_[i];
    if (std::find(work.begin(), work.end(), ~p) == work.end())
      continue;
    int32_t r = reason_[p.var()];
    DQCERT_CHECK(r != -1, "level-zero literal without a reason");
    int32_t r_step = proof_step_of(r);
    cur_step = p.negated() ? proof_->add_res(p.var(), cur_step, r_step)
                           : proof_->add_res(p.var(), r_step, cur_step);
    work = proof_->clause_of(cur_step);
  }
  DQCERT_CHECK(work.empty(), "level-zero chain did not reach the empty clause");
  return cur_step;
}

void SatSolver::mark_unsat(int32_t empty_step) {
  proof_->set_root(empty_step);
  ok_ = false;
}

std::vector<Lit> SatSolver::analyze_final(Lit failed) {
  std::vector<Lit> out{failed};
  if (decision_level() == 0)
    return out;
  seen_[failed.var()] = 1;
  for (size_t i = trail_.size(); i-- > trail_lim_[0];) {
    Var x = trail_[i].var();
    if (!seen_[x])
      continue;
    seen_[x] = 0;
    if (reason_[x] == -1) {
      out.push_back(trail_[i]); // assumption decision
    } else {
      for (Lit q : clauses_[reason_[x]].lits)
        if (q.var() != x && level_[q.var()] > 0)
          seen_[q.var()] = 1;
    }
  }
  seen_[failed.var()] = 0;
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

SolveStatus SatSolver::solve(const std::vector<Lit> &assumptions) {
  DQCERT_CHECK(!proof_ || assumptions.empty(),
               "proof-logged solves take no assumptions");
  for (Lit l : assumptions)
    ensure_var(l.var());
  failed_.clear();
  model_ = Assignment();
  if (!ok_)
    return SolveStatus::Unsat;
  cancel_until(0);

  uint64_t conflicts_since_restart = 0;
  int restarts = 0;
  double restart_budget = kRestartBase * luby(2.0, 0);
  Clause learnt;
  Chain chain;

  for (;;) {
    int32_t confl = propagate();
    if (confl != -1) {
      ++stats_conflicts_;
      ++conflicts_since_restart;
      if (decision_level() == 0) {
        if (proof_)
          mark_unsat(
              chain_resolve_levelzero(proof_step_of(confl),
                                      clauses_[confl].lits));
        else
          ok_ = false;
        return SolveStatus::Unsat;
      }
      int bt = 0;
      analyze(confl, learnt, bt, chain);
      cancel_until(bt);
      int32_t cref = learn_clause(learnt, chain, confl);
      enqueue(clauses_[cref].lits[0], cref);
      decay();
    } else {
      if (conflicts_since_restart >= restart_budget) {
        ++restarts;
        conflicts_since_restart = 0;
        restart_budget = kRestartBase * luby(2.0, restarts);
        cancel_until(0);
        continue;
      }
      if (decision_level() < static_cast<int>(assumptions.size())) {
        Lit p = assumptions[decision_level()];
        if (value(p) == 1) {
          new_decision_level();
          continue;
        }
        if (value(p) == -1) {
          failed_ = analyze_final(p);
          return SolveStatus::Unsat;
        }
        new_decision_level();
        enqueue(p, -1);
        continue;
      }
      Var next = pick_branch_var();
      if (next == 0) {
        for (size_t v = 1; v <= nvars_; ++v)
          model_.assign(static_cast<Var>(v), assigns_[v] == 1);
        return SolveStatus::Sat;
      }
      ++stats_decisions_;
      new_decision_level();
      enqueue(Lit(next, polarity_[next] == 0), -1);
    }
  }
}

std::vector<Lit> get_core(SatSolver &s, const std::vector<Lit> &assumptions,
                          const std::vector<Lit> &fixed) {
  auto run = [&](const std::vector<Lit> &cand) {
    std::vector<Lit> all = fixed;
    all.insert(all.end(), cand.begin(), cand.end());
    return s.solve(all);
  };
  auto filter = [&](const std::vector<Lit> &failed) {
    std::vector<Lit> out;
    for (Lit l : failed)
      if (std::find(assumptions.begin(), assumptions.end(), l) !=
          assumptions.end())
        out.push_back(l);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  };

  if (run(assumptions) == SolveStatus::Sat)
    throw ContractError("get_core requires an unsatisfiable query");
  std::vector<Lit> cur = filter(s.failed_assumptions());

  Var tried_up_to = 0;
  for (;;) {
    auto it = std::find_if(cur.begin(), cur.end(), [&](Lit l) {
      return l.var() > tried_up_to;
    });
    if (it == cur.end())
      break;
    Lit cand = *it;
    tried_up_to = cand.var();
    std::vector<Lit> without;
    without.reserve(cur.size() - 1);
    for (Lit l : cur)
      if (l != cand)
        without.push_back(l);
    if (run(without) == SolveStatus::Unsat) {
      std::vector<Lit> shrunk = filter(s.failed_assumptions());
      // failed set is confined to the candidates that were passed
      DQCERT_CHECK(
          std::all_of(shrunk.begin(), shrunk.end(),
                      [&](Lit l) {
                        return std::find(without.begin(), without.end(), l) !=
                               without.end();
                      }),
          "failed assumptions escaped the candidate set");
      cur = std::move(shrunk);
    }
  }
  return cur;
}

std::vector<Lit> get_core(const CNF &phi,
                          const std::vector<Lit> &assumptions) {
  SatSolver s;
  for (const Clause &c : phi)
    s.add_clause(c);
  return get_core(s, assumptions);
}

ProofSolveResult solve_with_proof(const CNF &a, const CNF &b) {
  ProofRecorder rec;
  SatSolver s(&rec);
  s.set_proof_partition(true);
  for (const Clause &c : a)
    s.add_clause(c);
  s.set_proof_partition(false);
  for (const Clause &c : b)
    s.add_clause(c);
  ProofSolveResult out;
  out.status = s.solve();
  if (out.status == SolveStatus::Sat) {
    out.model = s.model();
  } else {
    out.proof = rec.take();
    DQCERT_CHECK(out.proof.root >= 0, "refutation without recorded root");
    check_proof(out.proof);
  }
  return out;
}

} // namespace dqcert
