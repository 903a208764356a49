#include "doctest.h"

#include "dqcert/dqdimacs.hpp"

#include <fstream>
#include <sstream>

using namespace dqcert;

namespace {

std::string slurp(const std::string &name) {
  std::ifstream in(std::string(DQCERT_TEST_DATA_DIR) + "/" + name);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

} // namespace

TEST_CASE("literal encoding round-trips dimacs") {
  CHECK(Lit::from_dimacs(3).to_dimacs() == 3);
  CHECK(Lit::from_dimacs(-7).to_dimacs() == -7);
  CHECK((~pos(4)) == neg(4));
  CHECK((~neg(4)) == pos(4));
  CHECK(pos(2).var() == 2);
  CHECK(neg(2).negated());
}

TEST_CASE("assignment basics") {
  Assignment a;
  a.assign(1, true);
  a.assign(3, false);
  CHECK(a.value(1) == true);
  CHECK(a.value(3) == false);
  CHECK(!a.value(2));
  CHECK(a.literal_value(neg(3)) == true);
  CHECK(a.to_string() == "{1->1, 3->0}");
  CHECK_THROWS_AS(a.assign(1, false), InvariantError);

  Assignment r = a.restrict_to({1});
  CHECK(r.size() == 1);
  CHECK(r.value(1) == true);
  CHECK(a.restrict_to({}).empty());
  CHECK(Assignment().restrict_to({1}).empty());

  auto lits = a.literals();
  REQUIRE(lits.size() == 2);
  CHECK(lits[0] == pos(1));
  CHECK(lits[1] == neg(3));
}

TEST_CASE("cnf evaluation is three-valued") {
  CNF phi = {{neg(1), pos(2)}};
  Assignment both, partial_true, partial_unknown, falsifying;
  both.assign(1, true);
  both.assign(2, true);
  CHECK(evaluate_cnf(phi, both) == Truth::True);
  falsifying.assign(1, true);
  falsifying.assign(2, false);
  CHECK(evaluate_cnf(phi, falsifying) == Truth::False);
  partial_true.assign(1, false);
  CHECK(evaluate_cnf(phi, partial_true) == Truth::True);
  partial_unknown.assign(2, false);
  CHECK(evaluate_cnf(phi, partial_unknown) == Truth::Unknown);
}

TEST_CASE("restriction drops satisfied clauses and false literals") {
  CNF phi = {{pos(1), pos(2)}, {neg(1), pos(3)}};
  Assignment a;
  a.assign(1, true);
  CNF r = restrict_cnf(phi, a);
  REQUIRE(r.size() == 1);
  CHECK(r[0] == Clause{pos(3)});

  Assignment b;
  b.assign(1, false);
  b.assign(2, false);
  CNF rb = restrict_cnf(phi, b);
  REQUIRE(rb.size() == 1);
  CHECK(rb[0].empty());
}

TEST_CASE("parses explicit dependency sets") {
  auto r = parse_dqdimacs("p cnf 2 2\na 1 0\nd 2 1 0\n-1 2 0\n1 -2 0\n");
  const Dqbf &f = r.formula;
  CHECK(r.warnings.empty());
  CHECK(f.universals() == VarSet{1});
  CHECK(f.existential_order() == std::vector<Var>{2});
  CHECK(f.deps(2) == VarSet{1});
  REQUIRE(f.matrix().size() == 2);
  CHECK(f.matrix()[0] == Clause{neg(1), pos(2)});
}

TEST_CASE("empty matrix parses") {
  auto r = parse_dqdimacs("p cnf 1 0\ne 1 0\n");
  CHECK(r.formula.num_existentials() == 1);
  CHECK(r.formula.deps(1).empty());
  CHECK(r.formula.matrix().empty());
}

TEST_CASE("e-line inherits earlier universals only") {
  auto r = parse_dqdimacs("p cnf 3 1\ne 3 0\na 1 2 0\n2 0\n");
  CHECK(r.formula.deps(3).empty()); // declared before any universal
  auto r2 = parse_dqdimacs("p cnf 2 1\na 1 0\ne 2 0\n2 0\n");
  CHECK(r2.formula.deps(2) == VarSet{1});
}

TEST_CASE("d-line may have an empty dependency set") {
  auto r = parse_dqdimacs("p cnf 2 1\na 1 0\nd 2 0\n1 2 0\n");
  CHECK(r.formula.deps(2).empty());
  CHECK(r.formula.is_universal(1));
}

TEST_CASE("tautologies and duplicates are cleaned up") {
  auto r = parse_dqdimacs(
      "p cnf 2 3\ne 1 2 0\n1 -1 2 0\n1 1 2 0\n1 2 0\n");
  REQUIRE(r.formula.matrix().size() == 1); // taut dropped, dup merged
  CHECK(r.formula.matrix()[0] == Clause{pos(1), pos(2)});
}

TEST_CASE("free variables become existential with full dependencies") {
  auto r = parse_dqdimacs("p cnf 3 1\na 1 2 0\n1 3 0\n");
  REQUIRE(r.warnings.size() == 1);
  CHECK(r.formula.is_existential(3));
  CHECK(r.formula.deps(3) == VarSet{1, 2});
}

TEST_CASE("parse errors carry positions") {
  CHECK_THROWS_AS(parse_dqdimacs(""), ParseError);
  CHECK_THROWS_AS(parse_dqdimacs("p cnf 1 1\n1 zz 0\n"), ParseError);
  try {
    parse_dqdimacs("p cnf 2 1\na 1 0\nd 2 5 0\n2 0\n");
    FAIL("expected ParseError");
  } catch (const ParseError &e) {
    CHECK(e.line() == 3);
    CHECK(std::string(e.what()).find("not a declared universal") !=
          std::string::npos);
  }
  // double quantification
  CHECK_THROWS_AS(parse_dqdimacs("p cnf 2 0\na 1 0\ne 1 0\n"), ParseError);
  // quantifier after clause
  CHECK_THROWS_AS(parse_dqdimacs("p cnf 2 1\na 1 0\n1 0\ne 2 0\n"),
                  ParseError);
  // unterminated clause
  CHECK_THROWS_AS(parse_dqdimacs("p cnf 1 1\ne 1 0\n1\n"), ParseError);
}

TEST_CASE("comment lines are skipped") {
  auto r = parse_dqdimacs("c hello\np cnf 1 1\nc mid\ne 1 0\n1 0\n");
  CHECK(r.formula.matrix().size() == 1);
}

TEST_CASE("header count mismatches warn but parse") {
  auto r = parse_dqdimacs("p cnf 1 5\ne 1 0\n1 0\n");
  CHECK(r.warnings.size() == 1);
}

TEST_CASE("writer emits canonical form that reparses identically") {
  for (const char *name : {"i1.dqdimacs", "i2.dqdimacs", "i3.dqdimacs",
                           "i5.dqdimacs"}) {
    CAPTURE(name);
    auto first = parse_dqdimacs(slurp(name));
    std::string text = write_dqdimacs(first.formula);
    auto second = parse_dqdimacs(text);
    CHECK(second.warnings.empty());
    CHECK(second.formula.universal_order() ==
          first.formula.universal_order());
    CHECK(second.formula.existential_order() ==
          first.formula.existential_order());
    for (Var e : first.formula.existential_order())
      CHECK(second.formula.deps(e) == first.formula.deps(e));
    CHECK(second.formula.matrix() == first.formula.matrix());
    CHECK(write_dqdimacs(second.formula) == text);
  }
}

TEST_CASE("clauses may span lines") {
  auto r = parse_dqdimacs("p cnf 2 1\ne 1 2 0\n1\n2 0\n");
  REQUIRE(r.formula.matrix().size() == 1);
  CHECK(r.formula.matrix()[0].size() == 2);
}
