#include "doctest.h"

#include <random>

#include "dbel/formula.hpp"
#include "dbel/parser.hpp"
#include "test_util.hpp"

using namespace dbel;

namespace {

const AgentId a{"a"};
const AgentId b{"b"};
const Formula p = Formula::atom("p");
const Formula q = Formula::atom("q");

}  // namespace

TEST_CASE("parse expands sugar into core constructors") {
  // K binds tighter than ->
  CHECK(parse("K[a] p -> p") ==
        Formula::negation(Formula::conjunction(Formula::knows(a, p), Formula::negation(p))));

  // dual announcement <phi>psi == ~[phi]~psi
  CHECK(parse("<~K[c1] m1> K[c0] m0") ==
        Formula::negation(Formula::announce(
            Formula::negation(Formula::knows(AgentId{"c1"}, Formula::atom("m1"))),
            Formula::negation(Formula::knows(AgentId{"c0"}, Formula::atom("m0"))))));

  CHECK(parse("E[a,3] & P[a,2]") ==
        Formula::conjunction(Formula::exact_depth(a, 3), Formula::at_least_depth(a, 2)));
}

TEST_CASE("parse precedence and associativity") {
  CHECK(parse("~p & q") == Formula::conjunction(Formula::negation(p), q));
  CHECK(parse("p | q & r") ==
        Formula::disjunction(p, Formula::conjunction(q, Formula::atom("r"))));
  CHECK(parse("p -> q -> r") ==
        Formula::implies(p, Formula::implies(q, Formula::atom("r"))));
  CHECK(parse("K[a] p & q") == Formula::conjunction(Formula::knows(a, p), q));
  CHECK(parse("p <-> q") == Formula::iff(p, q));
  CHECK(parse("true") == Formula::truth());
  CHECK(parse("false") == Formula::falsity());
  CHECK(parse("Ki[b] p") == Formula::knows_inf(b, p));
  CHECK(parse("[p] q") == Formula::announce(p, q));
  // numeric agent names, as used by the muddy children models
  CHECK(parse("K[0] m0") == Formula::knows(AgentId{"0"}, Formula::atom("m0")));
  CHECK(parse("p # trailing comment\n& q") == Formula::conjunction(p, q));
}

TEST_CASE("parse errors carry position information") {
  CHECK_THROWS_AS(parse("p &"), ParseError);
  CHECK_THROWS_AS(parse("K[a"), ParseError);
  CHECK_THROWS_AS(parse("K p"), ParseError);
  CHECK_THROWS_AS(parse(""), ParseError);
  CHECK_THROWS_AS(parse("(p & q"), ParseError);
  try {
    parse("p &\n& q");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 1);
  }
  // negative depth literals are rejected at the source level
  try {
    parse("E[a,-1]");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("negative depth") != std::string::npos);
  }
}

TEST_CASE("render emits minimal parentheses") {
  CHECK(render(Formula::knows(a, p)) == "K[a] p");
  CHECK(render(Formula::announce(p, Formula::exact_depth(a, -1))) == "[p] E[a,-1]");
  CHECK(render(Formula::conjunction(p, Formula::negation(q))) == "p & ~q");
  CHECK(render(Formula::conjunction(Formula::conjunction(p, q), Formula::atom("r"))) ==
        "p & q & r");
  CHECK(render(Formula::conjunction(p, Formula::conjunction(q, Formula::atom("r")))) ==
        "p & (q & r)");
  CHECK(render(Formula::negation(Formula::conjunction(p, q))) == "~(p & q)");
  CHECK(render(Formula::knows(a, Formula::conjunction(p, q))) == "K[a] (p & q)");
  CHECK(render(Formula::announce(Formula::conjunction(p, q), Formula::knows_inf(b, p))) ==
        "[p & q] Ki[b] p");
}

TEST_CASE("parse-render round trip on random formulas") {
  std::mt19937_64 rng(20240811);
  dbel_test::GenOptions opt;
  for (int i = 0; i < 500; ++i) {
    Formula f = dbel_test::random_formula(rng, opt);
    CAPTURE(render(f));
    CHECK(parse(render(f)) == f);
  }
}

TEST_CASE("modal depth follows the recursive definition") {
  CHECK(p.modal_depth() == 0);
  CHECK(Formula::exact_depth(a, 4).modal_depth() == 0);
  CHECK(Formula::at_least_depth(a, 4).modal_depth() == 0);
  CHECK(parse("K[a](p & K[b]q)").modal_depth() == 2);
  CHECK(parse("[K[a]p] K[b]q").modal_depth() == 2);  // announcements add depths
  CHECK(parse("~K[a]p").modal_depth() == 1);
  CHECK(parse("<~K[2]m2> <~K[1]m1> K[0]m0").modal_depth() == 3);
}

TEST_CASE("modal depth is monotone under subformula embedding") {
  std::mt19937_64 rng(7);
  dbel_test::GenOptions opt;
  for (int i = 0; i < 300; ++i) {
    Formula f = dbel_test::random_formula(rng, opt);
    switch (f.kind()) {
      case Formula::Kind::Not:
        CHECK(f.child().modal_depth() <= f.modal_depth());
        break;
      case Formula::Kind::And:
        CHECK(f.left().modal_depth() <= f.modal_depth());
        CHECK(f.right().modal_depth() <= f.modal_depth());
        break;
      case Formula::Kind::Knows:
      case Formula::Kind::KnowsInf:
        CHECK(f.child().modal_depth() < f.modal_depth());
        break;
      case Formula::Kind::Announce:
        CHECK(f.modal_depth() ==
              f.announced().modal_depth() + f.body().modal_depth());
        break;
      default:
        break;
    }
  }
}

TEST_CASE("fragment membership") {
  CHECK_FALSE(in_fragment(Formula::knows_inf(a, p), Fragment::l()));
  CHECK_FALSE(in_fragment(Formula::announce(p, q), Fragment::h()));
  CHECK(in_fragment(Formula::announce(p, q), Fragment::l()));
  CHECK(in_fragment(Formula::knows(a, p), Fragment::h()));
  CHECK_FALSE(in_fragment(Formula::announce(p, q), Fragment::hinf()));
  CHECK(in_fragment(Formula::knows_inf(a, p), Fragment::hinf()));

  // agent-local fragment: no depth atoms, no modal operators for others
  CHECK_FALSE(in_fragment(Formula::knows(a, Formula::knows(b, p)), Fragment::lagent_inf(a)));
  CHECK(in_fragment(Formula::knows(a, Formula::knows_inf(a, p)), Fragment::lagent_inf(a)));
  CHECK_FALSE(in_fragment(Formula::exact_depth(a, 1), Fragment::lagent_inf(a)));

  CHECK(in_fragment(parse("E[a,2] & Ki[a] ~p"), Fragment::s5d()));
  CHECK_FALSE(in_fragment(parse("P[a,2]"), Fragment::s5d()));
  CHECK_FALSE(in_fragment(parse("K[a]p"), Fragment::s5d()));

  // the fragment lattice: H inside everything, Linf everywhere
  std::mt19937_64 rng(99);
  dbel_test::GenOptions opt;
  for (int i = 0; i < 200; ++i) {
    Formula f = dbel_test::random_formula(rng, opt);
    CHECK(in_fragment(f, Fragment::linf()));
    if (in_fragment(f, Fragment::h())) {
      CHECK(in_fragment(f, Fragment::hinf()));
      CHECK(in_fragment(f, Fragment::l()));
    }
    if (in_fragment(f, Fragment::s5d())) CHECK(in_fragment(f, Fragment::hinf()));
  }
}

TEST_CASE("structural equality and ordering") {
  CHECK(parse("p & q") == parse("p&q"));
  CHECK(parse("p & q") != parse("q & p"));
  CHECK(parse("p -> q") == Formula::implies(p, q));
  Formula x = parse("K[a] (p & q)");
  CHECK_FALSE(x < x);
  CHECK((p < q || q < p));
  CHECK(FormulaHash{}(parse("K[a]p")) == FormulaHash{}(Formula::knows(a, p)));
}

TEST_CASE("agents and atoms of a formula") {
  Formula f = parse("K[a](m1 & Ki[b] P[c,2]) & [E[d,0]] true");
  auto ags = agents_of(f);
  REQUIRE(ags.size() == 4);
  CHECK(ags[0].name == "a");
  CHECK(ags[3].name == "d");
  auto ats = atoms_of(f);  // "true" is not reported
  REQUIRE(ats.size() == 1);
  CHECK(ats[0] == "m1");
  CHECK(contains_announce(f));
  CHECK(contains_knows(f));
  CHECK_FALSE(contains_knows(parse("Ki[a] p")));
}
