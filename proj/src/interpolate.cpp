#include "dqcert/interpolate.hpp"

#include "dqcert/satsolver.hpp"

#include <algorithm>

namespace dqcert {

Partitioning partition_proof(const ResolutionProof &proof) {
  Partitioning part;
  for (size_t i = 0; i < proof.steps.size(); ++i) {
    const ProofStep &st = proof.steps[i];
    if (st.kind == StepKind::Res)
      continue;
    bool in_a = st.kind == StepKind::LeafA;
    (in_a ? part.a_leaves : part.b_leaves).push_back(static_cast<int32_t>(i));
    VarSet &vars = in_a ? part.a_vars : part.b_vars;
    for (Lit l : st.clause)
      vars.push_back(l.var());
  }
  vs_normalize(part.a_vars);
  vs_normalize(part.b_vars);
  part.shared = vs_intersect(part.a_vars, part.b_vars);
  return part;
}

Circuit interpolant(const ResolutionProof &proof, const Partitioning &part,
                    InterpolationSystem sys) {
  check_proof(proof);
  auto store = std::make_shared<CircuitStore>();

  // Only the subproof reachable from the root contributes.
  std::vector<char> reachable(proof.steps.size(), 0);
  {
    std::vector<int32_t> stack{proof.root};
    while (!stack.empty()) {
      int32_t i = stack.back();
      stack.pop_back();
      if (reachable[i])
        continue;
      reachable[i] = 1;
      const ProofStep &st = proof.steps[i];
      if (st.kind == StepKind::Res) {
        stack.push_back(st.left);
        stack.push_back(st.right);
      }
    }
  }

  std::vector<NodeId> label(proof.steps.size(), -1);
  for (size_t i = 0; i < proof.steps.size(); ++i) {
    if (!reachable[i])
      continue;
    const ProofStep &st = proof.steps[i];
    switch (st.kind) {
    case StepKind::LeafA: {
      if (sys == InterpolationSystem::Pudlak) {
        label[i] = store->constant(false);
        break;
      }
      std::vector<NodeId> shared_lits;
      for (Lit l : st.clause)
        if (vs_contains(part.shared, l.var()))
          shared_lits.push_back(literal_node(*store, l));
      label[i] = store->make_or(shared_lits);
      break;
    }
    case StepKind::LeafB:
      label[i] = store->constant(true);
      break;
    case StepKind::Res: {
      NodeId l = label[st.left], r = label[st.right];
      DQCERT_CHECK(l >= 0 && r >= 0, "antecedent label missing");
      bool in_a = vs_contains(part.a_vars, st.pivot);
      bool in_b = vs_contains(part.b_vars, st.pivot);
      DQCERT_CHECK(in_a || in_b, "pivot variable in neither partition");
      if (in_a && !in_b) {
        label[i] = store->make_or(l, r);
      } else if (!in_a || sys == InterpolationSystem::McMillan) {
        label[i] = store->make_and(l, r);
      } else {
        // symmetric rule on a shared pivot: select by the pivot value,
        // left antecedent holding the positive pivot
        NodeId x = store->input(st.pivot);
        label[i] = store->make_and(store->make_or(x, l),
                                   store->make_or(store->make_not(x), r));
      }
      break;
    }
    }
  }

  Circuit itp(store, label[proof.root]);
  DQCERT_CHECK(vs_subset(itp.support(), part.shared),
               "interpolant support escapes the shared variables");
  return itp;
}

Circuit interpolant(const ResolutionProof &proof, InterpolationSystem sys) {
  return interpolant(proof, partition_proof(proof), sys);
}

void verify_interpolant(const CNF &a, const CNF &b, const Circuit &itp) {
  Var top = std::max(cnf_max_var(a), cnf_max_var(b));
  VarSet sup = itp.support();
  if (!sup.empty())
    top = std::max(top, sup.back());

  auto check = [&](const CNF &side, bool assert_root,
                   const char *what) {
    SatSolver s;
    s.ensure_var(top);
    for (const Clause &c : side)
      s.add_clause(c);
    Var next = top;
    auto alloc = [&next]() { return ++next; };
    CircuitStore &st = *itp.store(); // append-only growth, existing ids stable
    // assert I on the B side, ~I on the A side
    NodeId root = assert_root ? itp.root() : st.make_not(itp.root());
    TseitinResult enc = tseitin_assert_true(st, root, alloc);
    for (const Clause &c : enc.clauses)
      s.add_clause(c);
    DQCERT_CHECK(s.solve() == SolveStatus::Unsat, what);
  };

  check(a, false, "A does not entail the interpolant");
  check(b, true, "interpolant is satisfiable with B");
}

void verify_interpolant(const ResolutionProof &proof, const Circuit &itp) {
  CNF a, b;
  for (const ProofStep &st : proof.steps) {
    if (st.kind == StepKind::LeafA)
      a.push_back(st.clause);
    else if (st.kind == StepKind::LeafB)
      b.push_back(st.clause);
  }
  verify_interpolant(a, b, itp);
}

} // namespace dqcert
