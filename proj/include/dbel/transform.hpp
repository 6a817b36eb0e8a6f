// Syntactic transformations: subformula/negation closure, the announcement
// robustness condition F_phi, and the rewriting passes that reduce formulas
// to the announcement-free Ki-only fragment.

#ifndef DBEL_TRANSFORM_HPP
#define DBEL_TRANSFORM_HPP

#include <set>

#include "dbel/formula.hpp"

namespace dbel {

enum class Logic { DBEL, EDPAL };

// Smallest superset of `roots` closed under immediate subformulas and single
// negation (a negation is never negated again).  Rejects announcements and
// bounded-K operators; translate those away first.
std::set<Formula> closure(const std::set<Formula>& roots);

// F_phi(psi): holds when agents mentioned in psi are known to be unaffected
// by announcing phi, in the sense that each one either cannot be deep enough
// for phi or keeps enough depth for its knowledge to survive.
Formula f_phi(const Formula& announced, const Formula& psi);

// K[a]chi -> P[a,d(chi)] & Ki[a]chi, applied everywhere.  Sound as a rewrite
// in any position since it restates the evaluation clause for K.
Formula expand_bounded_knowledge(const Formula& f);

// Eliminates announcements innermost-first by the reduction laws:
//   [phi]p        -> phi -> p                 (atomic permanence)
//   [phi]E[a,d]   -> phi -> E[a,d(phi)+d]     (depth adjustment)
//   [phi]P[a,d]   -> phi -> P[a,d(phi)+d]
//   [phi]~psi     -> phi -> ~[phi]psi
//   [phi](x & y)  -> [phi]x & [phi]y
//   [phi]Ki[a]psi -> phi -> Ki[a][phi]psi
//   [phi][psi]chi -> [phi & [phi]psi]chi      (announcement composition)
// Sound for the eager (EDPAL) update only.  Input must be free of bounded K.
Formula eliminate_announcements(const Formula& f);

// P[a,d] -> ~(E[a,0] | ... | E[a,d-1]) for d >= 1, true for d <= 0.  Sound
// only outside announcement scopes (depths in base models are naturals).
Formula expand_at_least_depth(const Formula& f);

// ~~psi -> psi everywhere.  The type machinery requires closures without
// stacked negations.
Formula strip_double_negations(const Formula& f);

// Full reduction into the S5D fragment (atoms, E, ~, &, Ki).  DBEL rejects
// announcements; EDPAL eliminates them first.  The output is semantically
// equivalent to the input on user models under the named logic.
Formula translate_s5d(const Formula& f, Logic logic);

}  // namespace dbel

#endif  // DBEL_TRANSFORM_HPP
