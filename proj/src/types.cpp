#include "dqcert/types.hpp"

#include <algorithm>
#include <sstream>

namespace dqcert {

Assignment Assignment::restrict_to(const VarSet &vars) const {
  Assignment r;
  for (auto [v, b] : map_)
    if (vs_contains(vars, v))
      r.assign(v, b);
  return r;
}

std::string Assignment::to_string() const {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (auto [v, b] : map_) {
    if (!first)
      os << ", ";
    first = false;
    os << v << "->" << (b ? '1' : '0');
  }
  os << '}';
  return os.str();
}

void vs_normalize(VarSet &vs) {
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
}

bool vs_contains(const VarSet &vs, Var v) {
  return std::binary_search(vs.begin(), vs.end(), v);
}

VarSet vs_union(const VarSet &a, const VarSet &b) {
  VarSet out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                 std::back_inserter(out));
  return out;
}

VarSet vs_intersect(const VarSet &a, const VarSet &b) {
  VarSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return out;
}

bool vs_subset(const VarSet &a, const VarSet &b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

VarSet cnf_vars(const CNF &cnf) {
  VarSet out;
  for (const Clause &c : cnf)
    for (Lit l : c)
      out.push_back(l.var());
  vs_normalize(out);
  return out;
}

Var cnf_max_var(const CNF &cnf) {
  Var m = 0;
  for (const Clause &c : cnf)
    for (Lit l : c)
      m = std::max(m, l.var());
  return m;
}

std::optional<Clause> normalize_clause(Clause c) {
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  for (size_t i = 0; i + 1 < c.size(); ++i)
    if (c[i].var() == c[i + 1].var())
      return std::nullopt; // contains l and ~l
  return c;
}

Truth evaluate_cnf(const CNF &cnf, const Assignment &a) {
  bool unknown = false;
  for (const Clause &c : cnf) {
    bool sat = false, open = false;
    for (Lit l : c) {
      auto v = a.literal_value(l);
      if (!v)
        open = true;
      else if (*v)
        sat = true;
    }
    if (sat)
      continue;
    if (!open)
      return Truth::False;
    unknown = true;
  }
  return unknown ? Truth::Unknown : Truth::True;
}

CNF restrict_cnf(const CNF &cnf, const Assignment &a) {
  CNF out;
  for (const Clause &c : cnf) {
    Clause r;
    bool sat = false;
    for (Lit l : c) {
      auto v = a.literal_value(l);
      if (!v)
        r.push_back(l);
      else if (*v) {
        sat = true;
        break;
      }
    }
    if (!sat)
      out.push_back(std::move(r));
  }
  return out;
}

} // namespace dqcert
