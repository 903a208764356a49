#include "dqcert/fuzz.hpp"

#include "dqcert/certify.hpp"
#include "dqcert/engine.hpp"

#include <random>
#include <utility>

namespace dqcert {

namespace {

// Upper bound accepted by the brute-force oracle's enumeration.
constexpr int kBruteCap = 14;

Dqbf rebuild_with_matrix(const Dqbf &f, const CNF &matrix) {
  Dqbf g;
  for (Var u : f.universal_order())
    g.add_universal(u);
  for (Var e : f.existential_order())
    g.add_existential(e, f.deps(e));
  for (const Clause &c : matrix)
    g.add_clause(c);
  return g;
}

bool occurs_in_matrix(const Dqbf &f, Var v) {
  for (const Clause &c : f.matrix())
    for (Lit l : c)
      if (l.var() == v)
        return true;
  return false;
}

/// Copy without one prefix variable; v must not occur in the matrix. A
/// dropped universal also leaves every dependency set.
Dqbf drop_prefix_var(const Dqbf &f, Var v) {
  Dqbf g;
  for (Var u : f.universal_order())
    if (u != v)
      g.add_universal(u);
  for (Var e : f.existential_order()) {
    if (e == v)
      continue;
    VarSet deps;
    for (Var u : f.deps(e))
      if (u != v)
        deps.push_back(u);
    g.add_existential(e, std::move(deps));
  }
  for (const Clause &c : f.matrix())
    g.add_clause(c);
  return g;
}

std::optional<std::string> certification_failure(const char *mode,
                                                 const Dqbf &f,
                                                 const Verdict &v) {
  if (!v.model.has_value())
    return std::string(mode) + " mode returned TRUE without a model";
  ParsedModel m = parse_model_file(emit_model(f, *v.model));
  ValidationReport r = validate_model(f, m);
  if (!r.valid)
    return std::string(mode) + " model fails validation: " + r.reason;
  if (!enumerate_model_check(f, m))
    return std::string(mode) + " model fails the enumeration check";
  return std::nullopt;
}

} // namespace

RandomDqbfParams sample_params(const FuzzProfile &profile, uint32_t seed) {
  // Distinct stream from the instance generator so sizes and contents stay
  // independently seeded.
  std::mt19937 rng(seed * 2654435761u + 17);
  auto pick = [&rng](int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<unsigned>(hi - lo + 1));
  };
  RandomDqbfParams p;
  p.n_universals = pick(1, profile.max_universals);
  p.n_existentials = pick(0, profile.max_existentials);
  p.max_deps = pick(0, p.n_universals);
  p.n_clauses = pick(0, profile.max_clauses);
  p.clause_len = pick(1, profile.max_clause_len);
  return p;
}

std::optional<std::string> check_instance(const Dqbf &f,
                                          bool flip_basic_verdict) {
  try {
    bool expected = brute_solve(f).is_true;
    auto verdict_name = [](bool b) { return b ? "TRUE" : "FALSE"; };

    EngineConfig basic_cfg;
    basic_cfg.mode = SolveMode::Basic;
    Verdict basic = solve_dqbf(f, basic_cfg);
    bool basic_says = basic.is_true != flip_basic_verdict;
    if (basic_says != expected)
      return std::string("basic mode reports ") + verdict_name(basic_says) +
             ", brute force says " + verdict_name(expected);

    Verdict cegis = solve_dqbf(f);
    if (cegis.is_true != expected)
      return std::string("cegis mode reports ") +
             verdict_name(cegis.is_true) + ", brute force says " +
             verdict_name(expected);

    if (expected) {
      if (auto fail = certification_failure("basic", f, basic))
        return fail;
      if (auto fail = certification_failure("cegis", f, cegis))
        return fail;
    }
  } catch (const Error &e) {
    return std::string("exception: ") + e.what();
  }
  return std::nullopt;
}

Dqbf minimize_instance(
    const Dqbf &f, const std::function<bool(const Dqbf &)> &still_failing) {
  if (!still_failing(f))
    throw ContractError("minimize_instance requires a failing instance");
  Dqbf cur = f;
  bool progress = true;
  while (progress) {
    progress = false;

    // Drop clauses greedily; staying at the same index after a successful
    // removal tries the clause that slid into its place.
    size_t i = 0;
    while (i < cur.matrix().size()) {
      CNF m = cur.matrix();
      m.erase(m.begin() + static_cast<std::ptrdiff_t>(i));
      Dqbf cand = rebuild_with_matrix(cur, m);
      if (still_failing(cand)) {
        cur = std::move(cand);
        progress = true;
      } else {
        ++i;
      }
    }

    // Drop prefix variables the matrix no longer mentions. A removal can
    // still change behaviour (a universal may sit in a dependency set), so
    // each one is re-checked like a clause removal.
    std::vector<Var> prefix;
    prefix.insert(prefix.end(), cur.universal_order().begin(),
                  cur.universal_order().end());
    prefix.insert(prefix.end(), cur.existential_order().begin(),
                  cur.existential_order().end());
    for (Var v : prefix) {
      if (occurs_in_matrix(cur, v))
        continue;
      Dqbf cand = drop_prefix_var(cur, v);
      if (still_failing(cand)) {
        cur = std::move(cand);
        progress = true;
        break;
      }
    }
  }
  return cur;
}

FuzzReport run_fuzz(const FuzzOptions &opt) {
  if (opt.profile.max_universals > kBruteCap)
    throw ContractError("fuzz profile exceeds the brute-force universal cap");
  FuzzReport rep;
  for (int i = 0; i < opt.count; ++i) {
    uint32_t seed = opt.first_seed + static_cast<uint32_t>(i);
    Dqbf f = random_dqbf(sample_params(opt.profile, seed), seed);
    (brute_solve(f).is_true ? rep.n_true : rep.n_false)++;
    ++rep.instances;
    if (auto failure = check_instance(f, opt.flip_basic_verdict)) {
      Divergence d;
      d.seed = seed;
      d.detail = *failure;
      d.original = f;
      d.reproducer = minimize_instance(f, [&opt](const Dqbf &g) {
        return check_instance(g, opt.flip_basic_verdict).has_value();
      });
      rep.divergence = std::move(d);
      break;
    }
  }
  return rep;
}

} // namespace dqcert
