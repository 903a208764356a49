#ifndef DQCERT_TYPES_HPP
#define DQCERT_TYPES_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dqcert {

/// Variables are positive integers, dense after parsing (1..n). Fresh
/// variables (arbiters, Tseitin auxiliaries) extend the range upward.
using Var = int32_t;

/// A literal is a variable with a polarity. Encoded as 2*v (positive) or
/// 2*v+1 (negated) so it can index watch lists directly.
class Lit {
public:
  Lit() : code_(-2) {}
  Lit(Var v, bool negated) : code_(v * 2 + (negated ? 1 : 0)) {}

  /// Parses the DIMACS convention: +v is the positive literal, -v negated.
  static Lit from_dimacs(int64_t n) {
    return Lit(static_cast<Var>(n < 0 ? -n : n), n < 0);
  }

  Var var() const { return code_ >> 1; }
  bool negated() const { return code_ & 1; }
  int to_dimacs() const { return negated() ? -var() : var(); }

  Lit operator~() const {
    Lit l;
    l.code_ = code_ ^ 1;
    return l;
  }
  bool operator==(const Lit &o) const { return code_ == o.code_; }
  bool operator!=(const Lit &o) const { return code_ != o.code_; }
  bool operator<(const Lit &o) const { return code_ < o.code_; }

  int32_t code() const { return code_; }

private:
  int32_t code_;
};

inline Lit pos(Var v) { return Lit(v, false); }
inline Lit neg(Var v) { return Lit(v, true); }

/// Clause: disjunction of literals. Kept duplicate-free; tautologies are
/// dropped at construction sites (parser, generators).
using Clause = std::vector<Lit>;

/// CNF: conjunction of clauses.
using CNF = std::vector<Clause>;

/// Sorted, duplicate-free set of variables.
using VarSet = std::vector<Var>;

// -------------------------------------------------------------------------
// Errors
// -------------------------------------------------------------------------

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

/// Input could not be parsed. Carries 1-based line/column of the offense.
class ParseError : public Error {
public:
  ParseError(const std::string &msg, int line, int col)
      : Error(msg + " (line " + std::to_string(line) + ", column " +
              std::to_string(col) + ")"),
        line_(line), col_(col) {}
  int line() const { return line_; }
  int column() const { return col_; }

private:
  int line_, col_;
};

/// A documented precondition of an operation was violated by the caller.
class ContractError : public Error {
public:
  explicit ContractError(const std::string &msg) : Error(msg) {}
};

/// An internal invariant failed; indicates a bug, not bad input.
class InvariantError : public Error {
public:
  explicit InvariantError(const std::string &msg) : Error(msg) {}
};

/// Always-on invariant check (not compiled out in release builds).
#define DQCERT_CHECK(cond, msg)                                               \
  do {                                                                        \
    if (!(cond))                                                              \
      throw ::dqcert::InvariantError(std::string("check failed: ") + (msg));  \
  } while (0)

// -------------------------------------------------------------------------
// Assignment
// -------------------------------------------------------------------------

/// Partial mapping from variables to truth values. Doubles as a conjunction
/// of literals (a term). Iteration order is ascending by variable, which all
/// deterministic tie-breaks in the solver stack rely on.
class Assignment {
public:
  Assignment() = default;

  static Assignment from_literals(const std::vector<Lit> &lits) {
    Assignment a;
    for (Lit l : lits)
      a.assign(l.var(), !l.negated());
    return a;
  }

  /// Maps v to value. Re-assigning the same value is a no-op; a conflicting
  /// re-assignment violates the one-value-per-variable invariant.
  void assign(Var v, bool value) {
    auto [it, inserted] = map_.emplace(v, value);
    if (!inserted && it->second != value)
      throw InvariantError("assignment maps variable " + std::to_string(v) +
                           " to both values");
  }

  std::optional<bool> value(Var v) const {
    auto it = map_.find(v);
    if (it == map_.end())
      return std::nullopt;
    return it->second;
  }

  bool contains(Var v) const { return map_.count(v) != 0; }
  size_t size() const { return map_.size(); }
  bool empty() const { return map_.empty(); }

  /// Truth value of a literal under this assignment, if its variable is set.
  std::optional<bool> literal_value(Lit l) const {
    auto v = value(l.var());
    if (!v)
      return std::nullopt;
    return l.negated() ? !*v : *v;
  }

  /// Restriction to the given variable set.
  Assignment restrict_to(const VarSet &vars) const;

  /// Union with other; conflicting overlaps violate the invariant.
  Assignment unioned(const Assignment &other) const {
    Assignment r = *this;
    for (auto [v, b] : other.map_)
      r.assign(v, b);
    return r;
  }

  /// The assignment as a term (sorted by variable).
  std::vector<Lit> literals() const {
    std::vector<Lit> out;
    out.reserve(map_.size());
    for (auto [v, b] : map_)
      out.push_back(Lit(v, !b));
    return out;
  }

  bool total_over(const VarSet &vars) const {
    for (Var v : vars)
      if (!contains(v))
        return false;
    return true;
  }

  /// Canonical text form, e.g. "{1->0, 3->1}". Stable; used for hashing
  /// repeated-counterexample detection and arbiter keys.
  std::string to_string() const;

  bool operator==(const Assignment &o) const { return map_ == o.map_; }
  bool operator!=(const Assignment &o) const { return map_ != o.map_; }
  bool operator<(const Assignment &o) const { return map_ < o.map_; }

  auto begin() const { return map_.begin(); }
  auto end() const { return map_.end(); }

private:
  std::map<Var, bool> map_;
};

// -------------------------------------------------------------------------
// VarSet helpers
// -------------------------------------------------------------------------

/// Sorts and deduplicates in place, establishing the VarSet invariant.
void vs_normalize(VarSet &vs);
bool vs_contains(const VarSet &vs, Var v);
VarSet vs_union(const VarSet &a, const VarSet &b);
VarSet vs_intersect(const VarSet &a, const VarSet &b);
bool vs_subset(const VarSet &a, const VarSet &b);

/// All variables occurring in the clause set.
VarSet cnf_vars(const CNF &cnf);

/// Largest variable in the clause set, 0 if none.
Var cnf_max_var(const CNF &cnf);

/// Canonical clause: sorted, duplicate-free. Returns nullopt for tautologies.
std::optional<Clause> normalize_clause(Clause c);

// -------------------------------------------------------------------------
// Evaluation / restriction
// -------------------------------------------------------------------------

/// Three-valued truth status of a CNF under a partial assignment.
enum class Truth { True, False, Unknown };

/// True iff every clause has a satisfied literal; False iff some clause has
/// all literals assigned false; Unknown otherwise.
Truth evaluate_cnf(const CNF &cnf, const Assignment &a);

/// Restriction: drops satisfied clauses, deletes falsified literals from the
/// rest. A clause falsified entirely becomes the empty clause (kept).
CNF restrict_cnf(const CNF &cnf, const Assignment &a);

} // namespace dqcert

#endif
