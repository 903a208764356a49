#include "doctest.h"

#include "dqcert/fuzz.hpp"

#include <set>

namespace {
using namespace dqcert;
} // namespace

TEST_CASE("fuzz: sampled sizes stay inside the profile and vary") {
  FuzzProfile p;
  p.max_universals = 4;
  p.max_existentials = 3;
  p.max_clauses = 12;
  p.max_clause_len = 3;

  std::set<int> clause_counts;
  for (uint32_t seed = 1; seed <= 200; ++seed) {
    RandomDqbfParams a = sample_params(p, seed);
    CHECK(a.n_universals >= 1);
    CHECK(a.n_universals <= p.max_universals);
    CHECK(a.n_existentials >= 0);
    CHECK(a.n_existentials <= p.max_existentials);
    CHECK(a.max_deps >= 0);
    CHECK(a.max_deps <= a.n_universals);
    CHECK(a.n_clauses >= 0);
    CHECK(a.n_clauses <= p.max_clauses);
    CHECK(a.clause_len >= 1);
    CHECK(a.clause_len <= p.max_clause_len);
    clause_counts.insert(a.n_clauses);

    RandomDqbfParams b = sample_params(p, seed);
    CHECK(a.n_universals == b.n_universals);
    CHECK(a.n_existentials == b.n_existentials);
    CHECK(a.max_deps == b.max_deps);
    CHECK(a.n_clauses == b.n_clauses);
    CHECK(a.clause_len == b.clause_len);
  }
  // Varying sizes is the point: a fixed clause count would produce almost
  // no TRUE instances once it exceeds a handful.
  CHECK(clause_counts.size() == 13);
}

TEST_CASE("fuzz: differential check accepts healthy instances") {
  FuzzProfile p;
  for (uint32_t seed = 1; seed <= 40; ++seed) {
    Dqbf f = random_dqbf(sample_params(p, seed), seed);
    CAPTURE(seed);
    CHECK_FALSE(check_instance(f).has_value());
  }
}

TEST_CASE("fuzz: the verdict flip is reported as a basic-mode divergence") {
  Dqbf f;
  f.add_universal(1);
  f.add_existential(2, {1});
  f.add_clause({neg(1), pos(2)});
  auto failure = check_instance(f, true);
  REQUIRE(failure.has_value());
  CHECK(*failure == "basic mode reports FALSE, brute force says TRUE");
}

TEST_CASE("fuzz: minimization shrinks to the failing core") {
  // Pretend the bug needs a clause with a negative universal literal; the
  // shrink must keep exactly one such clause and drop the unused prefix.
  Dqbf f;
  f.add_universal(1);
  f.add_universal(2);
  f.add_existential(3, {1});
  f.add_clause({pos(1), pos(2)});
  f.add_clause({neg(1), pos(3)});
  f.add_clause({neg(2), neg(3)});
  auto needs_negative_universal = [](const Dqbf &g) {
    for (const Clause &c : g.matrix())
      for (Lit l : c)
        if (g.is_universal(l.var()) && l.negated())
          return true;
    return false;
  };

  Dqbf m = minimize_instance(f, needs_negative_universal);
  CHECK(m.matrix().size() == 1);
  CHECK(m.num_universals() == 1);
  CHECK(m.num_existentials() == 1);
  // u1 left the instance entirely, including e3's dependency set.
  CHECK(m.deps(3).empty());
  CHECK(needs_negative_universal(m));

  CHECK_THROWS_AS(
      minimize_instance(f, [](const Dqbf &) { return false; }),
      ContractError);
}

TEST_CASE("fuzz: batch runs are deterministic and honest about counts") {
  FuzzOptions opt;
  opt.count = 0;
  FuzzReport empty = run_fuzz(opt);
  CHECK(empty.instances == 0);
  CHECK(empty.n_true == 0);
  CHECK(empty.n_false == 0);
  CHECK_FALSE(empty.divergence.has_value());

  opt.count = 100;
  FuzzReport rep = run_fuzz(opt);
  CHECK(rep.instances == 100);
  CHECK(rep.n_true + rep.n_false == 100);
  CHECK(rep.n_true > 0);
  CHECK_FALSE(rep.divergence.has_value());

  FuzzReport again = run_fuzz(opt);
  CHECK(again.n_true == rep.n_true);
  CHECK(again.n_false == rep.n_false);

  opt.flip_basic_verdict = true;
  opt.count = 3;
  FuzzReport bad = run_fuzz(opt);
  REQUIRE(bad.divergence.has_value());
  CHECK(bad.divergence->seed == opt.first_seed);
  CHECK(bad.divergence->detail.find("basic mode reports") == 0);
  // The flip diverges on every instance, so the shrink bottoms out at the
  // empty formula while the original is kept for reference.
  CHECK(bad.divergence->reproducer.matrix().empty());
  CHECK(bad.divergence->reproducer.num_universals() == 0);

  opt.profile.max_universals = 20;
  CHECK_THROWS_AS(run_fuzz(opt), ContractError);
}
