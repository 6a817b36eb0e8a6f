#include "dbel/transform.hpp"

#include <stdexcept>

namespace dbel {

namespace {

void close_rec(const Formula& f, std::set<Formula>& out) {
  using K = Formula::Kind;
  if (f.kind() == K::Announce || f.kind() == K::Knows)
    throw std::invalid_argument("closure: input must be announcement-free and K-free");
  if (!out.insert(f).second) return;
  if (f.kind() != K::Not) {
    Formula neg = Formula::negation(f);
    out.insert(neg);
  }
  switch (f.kind()) {
    case K::Not:
      close_rec(f.child(), out);
      break;
    case K::And:
      close_rec(f.left(), out);
      close_rec(f.right(), out);
      break;
    case K::KnowsInf:
      close_rec(f.child(), out);
      break;
    default:
      break;
  }
}

}  // namespace

std::set<Formula> closure(const std::set<Formula>& roots) {
  std::set<Formula> out;
  for (const auto& r : roots) close_rec(r, out);
  return out;
}

Formula f_phi(const Formula& announced, const Formula& psi) {
  using K = Formula::Kind;
  const std::int64_t dphi = announced.modal_depth();
  switch (psi.kind()) {
    case K::Atom:
    case K::ExactDepth:
    case K::AtLeastDepth:
      return Formula::truth();
    case K::Not:
      return f_phi(announced, psi.child());
    case K::And:
      return Formula::conjunction(f_phi(announced, psi.left()), f_phi(announced, psi.right()));
    case K::Knows: {
      const AgentId& a = psi.agent();
      const std::int64_t dsub = psi.child().modal_depth();
      Formula too_shallow_possible = Formula::negation(Formula::knows_inf(
          a, Formula::implies(announced, Formula::at_least_depth(a, dphi))));
      Formula depth_margin = Formula::knows_inf(
          a, Formula::implies(announced,
                              Formula::disjunction(
                                  Formula::negation(Formula::at_least_depth(a, dphi)),
                                  Formula::at_least_depth(a, dphi + dsub))));
      return Formula::conjunction(
          too_shallow_possible,
          Formula::conjunction(depth_margin, Formula::knows_inf(a, f_phi(announced, psi.child()))));
    }
    case K::KnowsInf: {
      const AgentId& a = psi.agent();
      Formula too_shallow_possible = Formula::negation(Formula::knows_inf(
          a, Formula::implies(announced, Formula::at_least_depth(a, dphi))));
      return Formula::conjunction(too_shallow_possible,
                                  Formula::knows_inf(a, f_phi(announced, psi.child())));
    }
    case K::Announce:
      return Formula::conjunction(f_phi(announced, psi.announced()),
                                  f_phi(announced, psi.body()));
  }
  throw std::logic_error("f_phi: unreachable");
}

Formula expand_bounded_knowledge(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Atom:
    case K::ExactDepth:
    case K::AtLeastDepth:
      return f;
    case K::Not:
      return Formula::negation(expand_bounded_knowledge(f.child()));
    case K::And:
      return Formula::conjunction(expand_bounded_knowledge(f.left()),
                                  expand_bounded_knowledge(f.right()));
    case K::Knows: {
      Formula sub = expand_bounded_knowledge(f.child());
      return Formula::conjunction(Formula::at_least_depth(f.agent(), f.child().modal_depth()),
                                  Formula::knows_inf(f.agent(), sub));
    }
    case K::KnowsInf:
      return Formula::knows_inf(f.agent(), expand_bounded_knowledge(f.child()));
    case K::Announce:
      return Formula::announce(expand_bounded_knowledge(f.announced()),
                               expand_bounded_knowledge(f.body()));
  }
  throw std::logic_error("expand_bounded_knowledge: unreachable");
}

namespace {

// Pushes a single announcement through an announcement-free body.
Formula push_announcement(const Formula& announced, const Formula& body) {
  using K = Formula::Kind;
  const std::int64_t dphi = announced.modal_depth();
  switch (body.kind()) {
    case K::Atom:
      return Formula::implies(announced, body);
    case K::ExactDepth:
      return Formula::implies(announced,
                              Formula::exact_depth(body.agent(), body.depth_bound() + dphi));
    case K::AtLeastDepth:
      return Formula::implies(announced,
                              Formula::at_least_depth(body.agent(), body.depth_bound() + dphi));
    case K::Not:
      return Formula::implies(announced,
                              Formula::negation(push_announcement(announced, body.child())));
    case K::And:
      return Formula::conjunction(push_announcement(announced, body.left()),
                                  push_announcement(announced, body.right()));
    case K::KnowsInf:
      return Formula::implies(
          announced, Formula::knows_inf(body.agent(), push_announcement(announced, body.child())));
    case K::Announce: {
      // Announcement composition.  Unreachable with innermost-first ordering
      // but kept so the rewrite system is usable on partially reduced input.
      Formula combined =
          Formula::conjunction(announced, push_announcement(announced, body.announced()));
      return push_announcement(combined, body.body());
    }
    case K::Knows:
      throw std::invalid_argument("eliminate_announcements: expand bounded K first");
  }
  throw std::logic_error("push_announcement: unreachable");
}

}  // namespace

Formula eliminate_announcements(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Atom:
    case K::ExactDepth:
    case K::AtLeastDepth:
      return f;
    case K::Not:
      return Formula::negation(eliminate_announcements(f.child()));
    case K::And:
      return Formula::conjunction(eliminate_announcements(f.left()),
                                  eliminate_announcements(f.right()));
    case K::KnowsInf:
      return Formula::knows_inf(f.agent(), eliminate_announcements(f.child()));
    case K::Announce:
      return push_announcement(eliminate_announcements(f.announced()),
                               eliminate_announcements(f.body()));
    case K::Knows:
      throw std::invalid_argument("eliminate_announcements: expand bounded K first");
  }
  throw std::logic_error("eliminate_announcements: unreachable");
}

Formula expand_at_least_depth(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Atom:
    case K::ExactDepth:
      return f;
    case K::AtLeastDepth: {
      if (f.depth_bound() <= 0) return Formula::truth();
      Formula disj = Formula::exact_depth(f.agent(), 0);
      for (std::int64_t d = 1; d < f.depth_bound(); ++d)
        disj = Formula::disjunction(disj, Formula::exact_depth(f.agent(), d));
      return Formula::negation(disj);
    }
    case K::Not:
      return Formula::negation(expand_at_least_depth(f.child()));
    case K::And:
      return Formula::conjunction(expand_at_least_depth(f.left()),
                                  expand_at_least_depth(f.right()));
    case K::KnowsInf:
      return Formula::knows_inf(f.agent(), expand_at_least_depth(f.child()));
    case K::Knows:
    case K::Announce:
      throw std::invalid_argument("expand_at_least_depth: eliminate K and announcements first");
  }
  throw std::logic_error("expand_at_least_depth: unreachable");
}

Formula strip_double_negations(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Atom:
    case K::ExactDepth:
    case K::AtLeastDepth:
      return f;
    case K::Not:
      if (f.child().kind() == K::Not) return strip_double_negations(f.child().child());
      return Formula::negation(strip_double_negations(f.child()));
    case K::And:
      return Formula::conjunction(strip_double_negations(f.left()),
                                  strip_double_negations(f.right()));
    case K::Knows:
      return Formula::knows(f.agent(), strip_double_negations(f.child()));
    case K::KnowsInf:
      return Formula::knows_inf(f.agent(), strip_double_negations(f.child()));
    case K::Announce:
      return Formula::announce(strip_double_negations(f.announced()),
                               strip_double_negations(f.body()));
  }
  throw std::logic_error("strip_double_negations: unreachable");
}

Formula translate_s5d(const Formula& f, Logic logic) {
  if (logic == Logic::DBEL && contains_announce(f))
    throw std::invalid_argument("translate_s5d: announcements require the EDPAL logic");
  Formula g = expand_bounded_knowledge(f);
  g = eliminate_announcements(g);
  return expand_at_least_depth(g);
}

}  // namespace dbel
