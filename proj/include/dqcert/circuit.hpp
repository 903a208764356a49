#ifndef DQCERT_CIRCUIT_HPP
#define DQCERT_CIRCUIT_HPP

#include "dqcert/types.hpp"

#include <functional>
#include <map>
#include <memory>
#include <unordered_map>

namespace dqcert {

/// Index into a CircuitStore node table.
using NodeId = int32_t;

enum class NodeKind : uint8_t { Const, Input, And, Not };

struct CircuitNode {
  NodeKind kind;
  bool value = false; // Const
  Var input = 0;      // Input
  NodeId a = -1;      // And/Not left child
  NodeId b = -1;      // And right child
};

/// Hash-consed and-inverter node table. Construction folds constants,
/// collapses double negation, and detects x AND ~x, so constant nodes never
/// appear below an operator: a constant can only be a root. Node ids are
/// stable; the table only grows.
class CircuitStore {
public:
  CircuitStore();

  NodeId constant(bool b) const { return b ? 1 : 0; }
  NodeId input(Var v);
  NodeId make_not(NodeId a);
  NodeId make_and(NodeId a, NodeId b);
  NodeId make_or(NodeId a, NodeId b);
  NodeId make_and(const std::vector<NodeId> &xs);
  NodeId make_or(const std::vector<NodeId> &xs);
  /// if c then t else e, built from and/not.
  NodeId make_ite(NodeId c, NodeId t, NodeId e);

  const CircuitNode &node(NodeId id) const { return nodes_[id]; }
  size_t size() const { return nodes_.size(); }

  bool is_const(NodeId id, bool b) const {
    return id == (b ? 1 : 0);
  }

  /// Truth value under an assignment covering the support of root.
  bool evaluate(NodeId root, const Assignment &a) const;

  /// Input variables reachable from root.
  VarSet support(NodeId root) const;

  /// Number of distinct nodes reachable from root (root included).
  size_t reachable_count(NodeId root) const;

  /// Number of distinct AND nodes reachable from root: the conventional
  /// size measure for and-inverter circuits.
  size_t and_count(NodeId root) const;

private:
  NodeId push(CircuitNode n);

  std::vector<CircuitNode> nodes_;
  std::unordered_map<Var, NodeId> input_ids_;
  std::unordered_map<uint64_t, NodeId> and_ids_;
  std::unordered_map<NodeId, NodeId> not_ids_;
};

/// A root in a shared store. Cheap to copy; immutable by convention once
/// handed out (the store may keep growing underneath, which never affects
/// existing nodes).
class Circuit {
public:
  Circuit() : store_(std::make_shared<CircuitStore>()), root_(0) {}
  Circuit(std::shared_ptr<CircuitStore> store, NodeId root)
      : store_(std::move(store)), root_(root) {}

  static Circuit constant(bool b) {
    auto s = std::make_shared<CircuitStore>();
    return Circuit(s, s->constant(b));
  }

  bool evaluate(const Assignment &a) const {
    return store_->evaluate(root_, a);
  }
  VarSet support() const { return store_->support(root_); }
  size_t node_count() const { return store_->reachable_count(root_); }
  size_t and_count() const { return store_->and_count(root_); }

  const std::shared_ptr<CircuitStore> &store() const { return store_; }
  NodeId root() const { return root_; }

private:
  std::shared_ptr<CircuitStore> store_;
  NodeId root_;
};

/// Rebuilds the cone of root from src into dst, replacing INPUT(v) by
/// leaf_map[v] (a node of dst) where present and by dst.input(v) otherwise.
NodeId substitute(const CircuitStore &src, NodeId root,
                  const std::map<Var, NodeId> &leaf_map, CircuitStore &dst);

/// Node for a single literal over its variable's input.
NodeId literal_node(CircuitStore &s, Lit l);

/// Conjunction of the assignment's literals (TRUE for the empty assignment).
NodeId term_node(CircuitStore &s, const Assignment &a);

/// Tseitin encoding. NOT nodes reuse the child encoding with flipped sign;
/// each AND node gets a fresh auxiliary variable constrained to full
/// equivalence with its children, so the clause set is satisfiable in both
/// polarities of the root.
struct TseitinResult {
  CNF clauses;
  std::vector<Var> aux_vars; // in allocation order
  Lit root_lit;              // literal equivalent to the root node
};

/// Encodes the cone of root; clauses constrain aux vars only. alloc_var must
/// return fresh, strictly increasing variables. The root's value is exposed
/// as root_lit. Requires a non-constant root; the assert_* wrappers below
/// accept constants (TRUE: no clauses / unit (v); FALSE: empty clause /
/// unit (~v)).
TseitinResult tseitin_encode(const CircuitStore &s, NodeId root,
                             const std::function<Var()> &alloc_var);

/// tseitin_encode plus the unit clause asserting the root.
TseitinResult tseitin_assert_true(const CircuitStore &s, NodeId root,
                                  const std::function<Var()> &alloc_var);

/// tseitin_encode plus clauses asserting v <-> root.
TseitinResult tseitin_assert_equal(Var v, const CircuitStore &s, NodeId root,
                                   const std::function<Var()> &alloc_var);

} // namespace dqcert

#endif
