#ifndef DQCERT_INTERPOLATE_HPP
#define DQCERT_INTERPOLATE_HPP

#include "dqcert/circuit.hpp"
#include "dqcert/proof.hpp"

namespace dqcert {

/// Labeling systems for interpolant extraction. The asymmetric rule biases
/// the interpolant toward the A side, which is where the defined variable
/// lives in definability queries; the symmetric rule is kept as an
/// alternative.
enum class InterpolationSystem { McMillan, Pudlak };

/// Leaf ids and variable footprint of the two partitions of a refutation.
struct Partitioning {
  std::vector<int32_t> a_leaves, b_leaves;
  VarSet a_vars, b_vars;
  VarSet shared; // a_vars ^ b_vars
};

Partitioning partition_proof(const ResolutionProof &proof);

/// Craig interpolant I of (A, B): support(I) included in shared, A entails
/// I, and I ^ B is unsatisfiable. Replays the proof first; throws
/// InvariantError on a malformed proof or an out-of-support result.
Circuit interpolant(const ResolutionProof &proof, const Partitioning &part,
                    InterpolationSystem sys = InterpolationSystem::McMillan);
Circuit interpolant(const ResolutionProof &proof,
                    InterpolationSystem sys = InterpolationSystem::McMillan);

/// Independent semantic check of the interpolant contract via two SAT
/// calls: a |= itp and itp ^ b unsatisfiable. Throws InvariantError.
void verify_interpolant(const CNF &a, const CNF &b, const Circuit &itp);

/// As above with A/B reconstructed from the proof's leaf tags.
void verify_interpolant(const ResolutionProof &proof, const Circuit &itp);

} // namespace dqcert

#endif
