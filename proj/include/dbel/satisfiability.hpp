// Satisfiability for the announcement-free logic (and the eager-update
// logic via announcement elimination), by explicit type elimination over
// the subformula/negation closure.  Satisfiable formulas come back with a
// witness model that is re-checked by the evaluator before returning.

#ifndef DBEL_SATISFIABILITY_HPP
#define DBEL_SATISFIABILITY_HPP

#include <map>
#include <optional>
#include <set>
#include <string>

#include "dbel/formula.hpp"
#include "dbel/model.hpp"
#include "dbel/transform.hpp"

namespace dbel {

// Minimal depth per agent consistent with the depth literals of gamma:
//   P[a,d] in gamma     => depth(a) >= d        ~P[a,d] => depth(a) < d
//   E[a,d] in gamma     => depth(a) == d        ~E[a,d] => depth(a) != d
// Returns nothing when the constraints are contradictory.
std::optional<std::map<std::string, std::int64_t>> assign_depths(const std::set<Formula>& gamma);

// Whether gamma is a type over the closure cl: boolean saturation (rules on
// negation and conjunction), Ki truthfulness, the five depth-literal rules,
// the reserved atom "true" being present when it appears in cl, and the
// existence of a consistent depth assignment.  cl must be free of double
// negations, announcements and bounded K.
bool is_type(const std::set<Formula>& gamma, const std::set<Formula>& cl);

struct SatWitness {
  KripkeModel model;
  WorldId world;
};

struct SatResult {
  std::optional<SatWitness> witness;

  bool is_sat() const { return witness.has_value(); }
};

SatResult satisfiable(const Formula& f, Logic logic);

}  // namespace dbel

#endif  // DBEL_SATISFIABILITY_HPP
