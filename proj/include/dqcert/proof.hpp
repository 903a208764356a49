#ifndef DQCERT_PROOF_HPP
#define DQCERT_PROOF_HPP

#include "dqcert/types.hpp"

namespace dqcert {

/// Steps of a resolution refutation. Leaves carry their origin partition so
/// interpolation can label them; Res steps resolve two earlier steps on a
/// pivot variable, with the positive pivot in `left`.
enum class StepKind : uint8_t { LeafA, LeafB, Res };

struct ProofStep {
  StepKind kind;
  Clause clause; // sorted, duplicate-free
  Var pivot = 0;
  int32_t left = -1;
  int32_t right = -1;
};

/// A refutation: steps in topological order (children precede parents),
/// root indexing the empty-clause step.
struct ResolutionProof {
  std::vector<ProofStep> steps;
  int32_t root = -1;

  /// Conventional proof size: one per step plus its clause width. The
  /// interpolant size bound is stated against this measure.
  size_t size() const {
    size_t s = 0;
    for (const ProofStep &st : steps)
      s += 1 + st.clause.size();
    return s;
  }
};

/// Resolvent (left u right) \ {pivot, ~pivot}; requires pivot in left and
/// ~pivot in right. Result sorted, duplicate-free.
Clause resolve_clauses(const Clause &left, const Clause &right, Var pivot);

/// Replays the proof: every Res resolvent re-derived from its antecedents,
/// indices topological, root present and empty. Throws InvariantError.
void check_proof(const ResolutionProof &proof);

/// Accumulates steps during a proof-logged solve. Clauses are normalized on
/// entry; Res steps compute their own resolvent.
class ProofRecorder {
public:
  int32_t add_leaf(const Clause &c, bool in_a);
  int32_t add_res(Var pivot, int32_t left, int32_t right);
  const Clause &clause_of(int32_t step) const {
    return proof_.steps[step].clause;
  }
  void set_root(int32_t step);
  size_t num_steps() const { return proof_.steps.size(); }
  /// Moves the finished proof out; the recorder is spent afterwards.
  ResolutionProof take();

private:
  ResolutionProof proof_;
};

} // namespace dqcert

#endif
