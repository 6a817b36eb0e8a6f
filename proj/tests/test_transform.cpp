#include "doctest.h"

#include <random>
#include <vector>

#include "dbel/formula.hpp"
#include "dbel/parser.hpp"
#include "dbel/semantics.hpp"
#include "dbel/transform.hpp"
#include "test_util.hpp"

using namespace dbel;

namespace {

const AgentId a{"a"};
const AgentId b{"b"};
const Formula p = Formula::atom("p");
const Formula q = Formula::atom("q");

// Exhaustive equivalence-kind models over one agent "a" and one atom "p";
// serves as the small independent oracle for translation equivalence.
std::vector<KripkeModel> one_agent_models(int max_worlds, int max_depth) {
  std::vector<KripkeModel> out;
  for (int nw = 1; nw <= max_worlds; ++nw) {
    int partitions = nw == 1 ? 1 : 2;  // {w0}{w1} or {w0 w1}
    for (int part = 0; part < partitions; ++part) {
      for (int val = 0; val < (1 << nw); ++val) {
        int depth_maps = 1;
        for (int i = 0; i < nw; ++i) depth_maps *= max_depth + 1;
        for (int dm = 0; dm < depth_maps; ++dm) {
          ModelBuilder mb(RelationKind::Equivalence);
          for (int w = 0; w < nw; ++w) mb.add_world("w" + std::to_string(w));
          mb.add_agent(a);
          mb.declare_atom("p");
          int rest = dm;
          for (int w = 0; w < nw; ++w) {
            if (val & (1 << w)) mb.set_atom("p", "w" + std::to_string(w));
            mb.set_depth(a, "w" + std::to_string(w), rest % (max_depth + 1));
            rest /= max_depth + 1;
          }
          if (part == 1) mb.add_undirected(a, "w0", "w1");
          out.push_back(mb.finalize(true));
        }
      }
    }
  }
  return out;
}

}  // namespace

TEST_CASE("closure adds subformulas and single negations") {
  auto cl = closure({Formula::knows_inf(a, p)});
  CHECK(cl == std::set<Formula>{Formula::knows_inf(a, p),
                                Formula::negation(Formula::knows_inf(a, p)), p,
                                Formula::negation(p)});

  auto cl2 = closure({Formula::conjunction(p, q)});
  CHECK(cl2.size() == 6);
  CHECK(cl2.count(Formula::conjunction(p, q)) == 1);
  CHECK(cl2.count(Formula::negation(Formula::conjunction(p, q))) == 1);
  CHECK(cl2.count(Formula::negation(p)) == 1);
  CHECK(cl2.count(Formula::negation(q)) == 1);

  // a negation is never negated again
  auto cl3 = closure({Formula::negation(p)});
  CHECK(cl3 == std::set<Formula>{Formula::negation(p), p});

  CHECK_THROWS(closure({Formula::announce(p, q)}));
  CHECK_THROWS(closure({Formula::knows(a, p)}));
}

namespace {

void collect_subformulas(const Formula& f, std::set<Formula>& out) {
  if (!out.insert(f).second) return;
  switch (f.kind()) {
    case Formula::Kind::Not:
    case Formula::Kind::Knows:
    case Formula::Kind::KnowsInf:
      collect_subformulas(f.child(), out);
      break;
    case Formula::Kind::And:
      collect_subformulas(f.left(), out);
      collect_subformulas(f.right(), out);
      break;
    case Formula::Kind::Announce:
      collect_subformulas(f.announced(), out);
      collect_subformulas(f.body(), out);
      break;
    default:
      break;
  }
}

}  // namespace

TEST_CASE("closure size is at most twice the subformula count") {
  std::mt19937_64 rng(31);
  dbel_test::GenOptions opt;
  opt.allow_announce = false;
  opt.allow_knows = false;
  for (int i = 0; i < 200; ++i) {
    Formula f = dbel_test::random_formula(rng, opt);
    auto cl = closure({f});
    std::set<Formula> subs;
    collect_subformulas(f, subs);
    CHECK(cl.size() <= 2 * subs.size());
    // closed under immediate subformulas
    for (const auto& g : cl) {
      std::set<Formula> gs;
      collect_subformulas(g, gs);
      for (const auto& h : gs)
        if (h.kind() != Formula::Kind::Not) CHECK(cl.count(h) == 1);
    }
  }
}

TEST_CASE("f_phi base cases") {
  Formula phi = parse("K[b]q");
  CHECK(f_phi(phi, p) == Formula::truth());
  CHECK(f_phi(phi, Formula::exact_depth(a, 2)) == Formula::truth());
  CHECK(f_phi(phi, Formula::at_least_depth(a, 2)) == Formula::truth());
  CHECK(f_phi(phi, Formula::negation(parse("K[a]p"))) == f_phi(phi, parse("K[a]p")));
  CHECK(f_phi(phi, Formula::conjunction(p, q)) ==
        Formula::conjunction(Formula::truth(), Formula::truth()));
  CHECK(f_phi(phi, Formula::announce(p, q)) ==
        Formula::conjunction(Formula::truth(), Formula::truth()));
}

TEST_CASE("f_phi unfolds the knowledge clause") {
  // phi = K[c]K[c]p0 has depth 2; psi = K[a]K[b]p0
  Formula phi = parse("K[c] K[c] p0");
  REQUIRE(phi.modal_depth() == 2);
  Formula psi = parse("K[a] K[b] p0");

  auto too_shallow = [&](const AgentId& ag) {
    return Formula::negation(
        Formula::knows_inf(ag, Formula::implies(phi, Formula::at_least_depth(ag, 2))));
  };
  auto margin = [&](const AgentId& ag, std::int64_t need) {
    return Formula::knows_inf(
        ag, Formula::implies(phi, Formula::disjunction(
                                      Formula::negation(Formula::at_least_depth(ag, 2)),
                                      Formula::at_least_depth(ag, need))));
  };
  // inner: F_phi(K[b]p0) with d(p0)=0
  Formula inner = Formula::conjunction(
      too_shallow(b),
      Formula::conjunction(margin(b, 2), Formula::knows_inf(b, Formula::truth())));
  // outer: F_phi(K[a] K[b]p0) with d(K[b]p0)=1
  Formula expected = Formula::conjunction(
      too_shallow(a), Formula::conjunction(margin(a, 3), Formula::knows_inf(a, inner)));

  CHECK(f_phi(phi, psi) == expected);
}

TEST_CASE("f_phi output stays in the announcement-free Ki fragment") {
  std::mt19937_64 rng(17);
  dbel_test::GenOptions phi_opt;
  phi_opt.allow_announce = false;
  phi_opt.allow_knows = false;  // announced formulas get embedded verbatim
  phi_opt.max_nodes = 6;
  dbel_test::GenOptions psi_opt;
  psi_opt.max_nodes = 8;
  for (int i = 0; i < 200; ++i) {
    Formula phi = dbel_test::random_formula(rng, phi_opt);
    Formula psi = dbel_test::random_formula(rng, psi_opt);
    Formula f = f_phi(phi, psi);
    CHECK_FALSE(contains_announce(f));
    CHECK_FALSE(contains_knows(f));
  }
}

TEST_CASE("announcement elimination mirrors the reduction laws") {
  CHECK(translate_s5d(parse("[p] q"), Logic::EDPAL) == Formula::implies(p, q));
  CHECK(translate_s5d(parse("[p] E[a,1]"), Logic::EDPAL) ==
        Formula::implies(p, Formula::exact_depth(a, 1)));  // d(p) = 0
  // depth adjustment shifts by the announced depth
  CHECK(eliminate_announcements(parse("[Ki[b]q] E[a,1]")) ==
        Formula::implies(parse("Ki[b]q"), Formula::exact_depth(a, 2)));
  CHECK(eliminate_announcements(parse("[Ki[b]q] P[a,1]")) ==
        Formula::implies(parse("Ki[b]q"), Formula::at_least_depth(a, 2)));
  // knowledge announcement pushes the announcement inside Ki
  CHECK(eliminate_announcements(parse("[p] Ki[a] q")) ==
        Formula::implies(p, Formula::knows_inf(a, Formula::implies(p, q))));
  CHECK_THROWS(translate_s5d(parse("[p] q"), Logic::DBEL));
  CHECK_THROWS(eliminate_announcements(parse("[p] K[a] q")));
}

TEST_CASE("bounded knowledge expansion uses the argument depth") {
  CHECK(expand_bounded_knowledge(parse("K[a]p")) ==
        Formula::conjunction(Formula::at_least_depth(a, 0), Formula::knows_inf(a, p)));
  CHECK(expand_bounded_knowledge(parse("K[a]K[b]q")) ==
        Formula::conjunction(
            Formula::at_least_depth(a, 1),
            Formula::knows_inf(a, Formula::conjunction(Formula::at_least_depth(b, 0),
                                                       Formula::knows_inf(b, q)))));
  // depth-0 guard collapses to true under the exact-depths expansion
  CHECK(translate_s5d(parse("K[a]p"), Logic::DBEL) ==
        Formula::conjunction(Formula::truth(), Formula::knows_inf(a, p)));
  CHECK(expand_at_least_depth(parse("P[a,1]")) ==
        Formula::negation(Formula::exact_depth(a, 0)));
  CHECK(expand_at_least_depth(parse("P[a,2]")) ==
        Formula::negation(Formula::disjunction(Formula::exact_depth(a, 0),
                                               Formula::exact_depth(a, 1))));
}

TEST_CASE("translation lands in the S5D fragment") {
  std::mt19937_64 rng(23);
  dbel_test::GenOptions opt;
  opt.max_nodes = 8;
  opt.max_depth_param = 2;
  for (int i = 0; i < 200; ++i) {
    Formula f = dbel_test::random_formula(rng, opt);
    Formula t = translate_s5d(f, Logic::EDPAL);
    CAPTURE(render(f));
    CHECK(in_fragment(t, Fragment::s5d()));
  }
}

TEST_CASE("translation preserves truth on the one-agent oracle") {
  auto models = one_agent_models(2, 2);
  auto check_equiv = [&](const Formula& f) {
    Formula t = translate_s5d(f, Logic::EDPAL);
    for (const auto& m : models) {
      for (const auto& w : m.worlds()) {
        CAPTURE(render(f));
        CAPTURE(export_native(m));
        CAPTURE(w);
        bool lhs = eval(m, w, f, Semantics::EDPAL);
        CHECK(lhs == eval(m, w, t, Semantics::EDPAL));
        // the translated formula is announcement-free, so any semantics works
        CHECK(lhs == eval(m, w, t, Semantics::DPAL));
        CHECK(lhs == eval(m, w, t, Semantics::ADPAL));
      }
    }
  };
  check_equiv(parse("K[a]p"));
  check_equiv(parse("[p] K[a] p"));
  check_equiv(parse("[K[a]p] ~K[a] p"));
  check_equiv(parse("[p][p] E[a,1]"));
  check_equiv(parse("K[a] E[a,1] & P[a,2]"));
  check_equiv(parse("<p> K[a] p"));

  std::mt19937_64 rng(41);
  dbel_test::GenOptions opt;
  opt.agents = {"a"};
  opt.atoms = {"p"};
  opt.max_nodes = 7;
  opt.max_depth_param = 2;
  for (int i = 0; i < 40; ++i) check_equiv(dbel_test::random_formula(rng, opt));
}
