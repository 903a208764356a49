#include "dqcert/circuit.hpp"

#include <unordered_set>

namespace dqcert {

namespace {

// Iterative children-first traversal; visits each reachable node once.
// Iterative because interpolants routinely have linear depth in proof size.
template <typename F>
void topo_visit(const CircuitStore &s, NodeId root, F &&visit) {
  std::vector<std::pair<NodeId, bool>> stack{{root, false}};
  std::unordered_set<NodeId> done;
  while (!stack.empty()) {
    auto [id, expanded] = stack.back();
    stack.pop_back();
    if (done.count(id))
      continue;
    if (expanded) {
      done.insert(id);
      visit(id);
      continue;
    }
    stack.push_back({id, true});
    const CircuitNode &n = s.node(id);
    if (n.kind == NodeKind::And) {
      stack.push_back({n.a, false});
      stack.push_back({n.b, false});
    } else if (n.kind == NodeKind::Not) {
      stack.push_back({n.a, false});
    }
  }
}

} // namespace

CircuitStore::CircuitStore() {
  CircuitNode f;
  f.kind = NodeKind::Const;
  f.value = false;
  nodes_.push_back(f);
  CircuitNode t;
  t.kind = NodeKind::Const;
  t.value = true;
  nodes_.push_back(t);
}

NodeId CircuitStore::push(CircuitNode n) {
  nodes_.push_back(n);
  return static_cast<NodeId>(nodes_.size() - 1);
}

NodeId CircuitStore::input(Var v) {
  DQCERT_CHECK(v > 0, "circuit input variable must be positive");
  auto it = input_ids_.find(v);
  if (it != input_ids_.end())
    return it->second;
  CircuitNode n;
  n.kind = NodeKind::Input;
  n.input = v;
  NodeId id = push(n);
  input_ids_.emplace(v, id);
  return id;
}

NodeId CircuitStore::make_not(NodeId a) {
  const CircuitNode &n = node(a);
  if (n.kind == NodeKind::Const)
    return constant(!n.value);
  if (n.kind == NodeKind::Not)
    return n.a;
  auto it = not_ids_.find(a);
  if (it != not_ids_.end())
    return it->second;
  CircuitNode m;
  m.kind = NodeKind::Not;
  m.a = a;
  NodeId id = push(m);
  not_ids_.emplace(a, id);
  return id;
}

NodeId CircuitStore::make_and(NodeId a, NodeId b) {
  if (a == b)
    return a;
  if (is_const(a, false) || is_const(b, false))
    return constant(false);
  if (is_const(a, true))
    return b;
  if (is_const(b, true))
    return a;
  // x AND ~x
  if ((node(a).kind == NodeKind::Not && node(a).a == b) ||
      (node(b).kind == NodeKind::Not && node(b).a == a))
    return constant(false);
  if (a > b)
    std::swap(a, b);
  uint64_t key = (static_cast<uint64_t>(a) << 32) | static_cast<uint32_t>(b);
  auto it = and_ids_.find(key);
  if (it != and_ids_.end())
    return it->second;
  CircuitNode n;
  n.kind = NodeKind::And;
  n.a = a;
  n.b = b;
  NodeId id = push(n);
  and_ids_.emplace(key, id);
  return id;
}

NodeId CircuitStore::make_or(NodeId a, NodeId b) {
  return make_not(make_and(make_not(a), make_not(b)));
}

NodeId CircuitStore::make_and(const std::vector<NodeId> &xs) {
  NodeId acc = constant(true);
  for (NodeId x : xs)
    acc = make_and(acc, x);
  return acc;
}

NodeId CircuitStore::make_or(const std::vector<NodeId> &xs) {
  NodeId acc = constant(false);
  for (NodeId x : xs)
    acc = make_or(acc, x);
  return acc;
}

NodeId CircuitStore::make_ite(NodeId c, NodeId t, NodeId e) {
  return make_or(make_and(c, t), make_and(make_not(c), e));
}

bool CircuitStore::evaluate(NodeId root, const Assignment &a) const {
  std::unordered_map<NodeId, bool> val;
  topo_visit(*this, root, [&](NodeId id) {
    const CircuitNode &n = node(id);
    switch (n.kind) {
    case NodeKind::Const:
      val[id] = n.value;
      break;
    case NodeKind::Input: {
      auto v = a.value(n.input);
      if (!v)
        throw ContractError("assignment does not cover circuit input " +
                            std::to_string(n.input));
      val[id] = *v;
      break;
    }
    case NodeKind::Not:
      val[id] = !val.at(n.a);
      break;
    case NodeKind::And:
      val[id] = val.at(n.a) && val.at(n.b);
      break;
    }
  });
  return val.at(root);
}

VarSet CircuitStore::support(NodeId root) const {
  VarSet out;
  topo_visit(*this, root, [&](NodeId id) {
    const CircuitNode &n = node(id);
    if (n.kind == NodeKind::Input)
      out.push_back(n.input);
  });
  vs_normalize(out);
  return out;
}

size_t CircuitStore::reachable_count(NodeId root) const {
  size_t count = 0;
  topo_visit(*this, root, [&](NodeId) { ++count; });
  return count;
}

size_t CircuitStore::and_count(NodeId root) const {
  size_t count = 0;
  topo_visit(*this, root, [&](NodeId id) {
    if (node(id).kind == NodeKind::And)
      ++count;
  });
  return count;
}

NodeId substitute(const CircuitStore &src, NodeId root,
                  const std::map<Var, NodeId> &leaf_map, CircuitStore &dst) {
  std::unordered_map<NodeId, NodeId> memo;
  topo_visit(src, root, [&](NodeId id) {
    const CircuitNode &n = src.node(id);
    switch (n.kind) {
    case NodeKind::Const:
      memo[id] = dst.constant(n.value);
      break;
    case NodeKind::Input: {
      auto it = leaf_map.find(n.input);
      memo[id] = it != leaf_map.end() ? it->second : dst.input(n.input);
      break;
    }
    case NodeKind::Not:
      memo[id] = dst.make_not(memo.at(n.a));
      break;
    case NodeKind::And:
      memo[id] = dst.make_and(memo.at(n.a), memo.at(n.b));
      break;
    }
  });
  return memo.at(root);
}

NodeId literal_node(CircuitStore &s, Lit l) {
  NodeId v = s.input(l.var());
  return l.negated() ? s.make_not(v) : v;
}

NodeId term_node(CircuitStore &s, const Assignment &a) {
  NodeId acc = s.constant(true);
  for (auto [v, b] : a)
    acc = s.make_and(acc, literal_node(s, Lit(v, !b)));
  return acc;
}

TseitinResult tseitin_encode(const CircuitStore &s, NodeId root,
                             const std::function<Var()> &alloc_var) {
  DQCERT_CHECK(s.node(root).kind != NodeKind::Const,
               "tseitin_encode requires a non-constant root");
  TseitinResult out;
  std::unordered_map<NodeId, Lit> lit;
  topo_visit(s, root, [&](NodeId id) {
    const CircuitNode &n = s.node(id);
    switch (n.kind) {
    case NodeKind::Const:
      throw InvariantError("constant below an operator node");
    case NodeKind::Input:
      lit[id] = pos(n.input);
      break;
    case NodeKind::Not:
      lit[id] = ~lit.at(n.a);
      break;
    case NodeKind::And: {
      Var t = alloc_var();
      out.aux_vars.push_back(t);
      Lit la = lit.at(n.a), lb = lit.at(n.b);
      out.clauses.push_back({neg(t), la});
      out.clauses.push_back({neg(t), lb});
      out.clauses.push_back({pos(t), ~la, ~lb});
      lit[id] = pos(t);
      break;
    }
    }
  });
  out.root_lit = lit.at(root);
  return out;
}

TseitinResult tseitin_assert_true(const CircuitStore &s, NodeId root,
                                  const std::function<Var()> &alloc_var) {
  if (s.node(root).kind == NodeKind::Const) {
    TseitinResult out;
    if (!s.node(root).value)
      out.clauses.push_back({});
    return out;
  }
  TseitinResult out = tseitin_encode(s, root, alloc_var);
  out.clauses.push_back({out.root_lit});
  return out;
}

TseitinResult tseitin_assert_equal(Var v, const CircuitStore &s, NodeId root,
                                   const std::function<Var()> &alloc_var) {
  if (s.node(root).kind == NodeKind::Const) {
    TseitinResult out;
    out.root_lit = Lit(v, !s.node(root).value);
    out.clauses.push_back({out.root_lit});
    return out;
  }
  TseitinResult out = tseitin_encode(s, root, alloc_var);
  out.clauses.push_back({neg(v), out.root_lit});
  out.clauses.push_back({pos(v), ~out.root_lit});
  return out;
}

} // namespace dqcert
