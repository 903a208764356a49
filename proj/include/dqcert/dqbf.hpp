#ifndef DQCERT_DQBF_HPP
#define DQCERT_DQBF_HPP

#include "dqcert/types.hpp"

#include <map>

namespace dqcert {

/// Dependency quantified Boolean formula in prenex CNF:
///   forall u1..un  exists e1(D1)..em(Dm) . matrix
/// where each existential ei may depend only on the universals in Di.
class Dqbf {
public:
  Dqbf() = default;

  /// Declares a universal variable. Order of declaration is preserved and
  /// determines the `a`-line order when writing.
  void add_universal(Var v);

  /// Declares an existential variable with dependency set deps (must all be
  /// previously declared universals).
  void add_existential(Var v, VarSet deps);

  /// Appends a clause over declared variables. Duplicate literals are
  /// removed; tautologies are dropped (returns false in that case).
  bool add_clause(Clause c);

  const VarSet &universals() const { return universals_; }
  const std::vector<Var> &universal_order() const { return universal_order_; }
  const std::vector<Var> &existential_order() const {
    return existential_order_;
  }
  const CNF &matrix() const { return matrix_; }

  bool is_universal(Var v) const { return vs_contains(universals_, v); }
  bool is_existential(Var v) const { return deps_.count(v) != 0; }
  bool is_declared(Var v) const { return is_universal(v) || is_existential(v); }

  /// Dependency set of an existential variable.
  const VarSet &deps(Var e) const;

  /// Largest declared or matrix variable, 0 for the empty formula.
  Var max_var() const { return max_var_; }

  size_t num_universals() const { return universals_.size(); }
  size_t num_existentials() const { return existential_order_.size(); }

  /// Restriction of an assignment to the universal variables.
  Assignment universal_part(const Assignment &a) const {
    return a.restrict_to(universals_);
  }

  /// True iff the given total assignment of U u E satisfies the matrix.
  bool matrix_satisfied(const Assignment &a) const {
    return evaluate_cnf(matrix_, a) == Truth::True;
  }

private:
  friend class DqbfBuilder;

  VarSet universals_;                 // sorted view of universal_order_
  std::vector<Var> universal_order_;  // declaration order
  std::vector<Var> existential_order_;
  std::map<Var, VarSet> deps_;
  CNF matrix_;
  Var max_var_ = 0;
};

} // namespace dqcert

#endif
