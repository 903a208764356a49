#include "dqcert/proof.hpp"

#include <algorithm>

namespace dqcert {

Clause resolve_clauses(const Clause &left, const Clause &right, Var pivot) {
  Lit p = pos(pivot), n = neg(pivot);
  DQCERT_CHECK(std::find(left.begin(), left.end(), p) != left.end(),
               "positive pivot missing from left antecedent");
  DQCERT_CHECK(std::find(right.begin(), right.end(), n) != right.end(),
               "negative pivot missing from right antecedent");
  Clause out;
  out.reserve(left.size() + right.size() - 2);
  for (Lit l : left)
    if (l != p)
      out.push_back(l);
  for (Lit l : right)
    if (l != n)
      out.push_back(l);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void check_proof(const ResolutionProof &proof) {
  DQCERT_CHECK(proof.root >= 0 &&
                   proof.root < static_cast<int32_t>(proof.steps.size()),
               "proof root out of range");
  for (size_t i = 0; i < proof.steps.size(); ++i) {
    const ProofStep &st = proof.steps[i];
    if (st.kind == StepKind::Res) {
      DQCERT_CHECK(st.left >= 0 && st.right >= 0 &&
                       st.left < static_cast<int32_t>(i) &&
                       st.right < static_cast<int32_t>(i),
                   "resolution antecedents must precede the step");
      Clause expect = resolve_clauses(proof.steps[st.left].clause,
                                      proof.steps[st.right].clause, st.pivot);
      DQCERT_CHECK(expect == st.clause, "recorded resolvent differs from "
                                        "re-derived resolvent");
    }
  }
  DQCERT_CHECK(proof.steps[proof.root].clause.empty(),
               "proof root is not the empty clause");
}

int32_t ProofRecorder::add_leaf(const Clause &c, bool in_a) {
  auto norm = normalize_clause(c);
  DQCERT_CHECK(norm.has_value(), "tautological proof leaf");
  ProofStep st;
  st.kind = in_a ? StepKind::LeafA : StepKind::LeafB;
  st.clause = std::move(*norm);
  proof_.steps.push_back(std::move(st));
  return static_cast<int32_t>(proof_.steps.size() - 1);
}

int32_t ProofRecorder::add_res(Var pivot, int32_t left, int32_t right) {
  DQCERT_CHECK(left >= 0 && right >= 0 &&
                   left < static_cast<int32_t>(proof_.steps.size()) &&
                   right < static_cast<int32_t>(proof_.steps.size()),
               "resolution antecedent out of range");
  ProofStep st;
  st.kind = StepKind::Res;
  st.pivot = pivot;
  st.left = left;
  st.right = right;
  st.clause = resolve_clauses(proof_.steps[left].clause,
                              proof_.steps[right].clause, pivot);
  proof_.steps.push_back(std::move(st));
  return static_cast<int32_t>(proof_.steps.size() - 1);
}

void ProofRecorder::set_root(int32_t step) {
  DQCERT_CHECK(step >= 0 && step < static_cast<int32_t>(proof_.steps.size()),
               "proof root out of range");
  DQCERT_CHECK(proof_.steps[step].clause.empty(),
               "proof root must be the empty clause");
  proof_.root = step;
}

ResolutionProof ProofRecorder::take() { return std::move(proof_); }

} // namespace dqcert
