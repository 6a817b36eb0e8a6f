// Muddy children models and the depth-knowledge experiments around them.
//
// Worlds are the bit tuples {0,1}^n minus the all-clean tuple (the father's
// depth-0 announcement is baked in); child i's relation links worlds that
// differ exactly in coordinate i.  Child i is agent "i" and atom "mi" holds
// where bit i is set.

#ifndef DBEL_MUDDY_HPP
#define DBEL_MUDDY_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dbel/dense.hpp"
#include "dbel/formula.hpp"
#include "dbel/model.hpp"
#include "dbel/semantics.hpp"

namespace dbel {

class DepthSpec {
 public:
  // Every child has depth d everywhere.
  static DepthSpec uniform(std::int64_t d);
  // Child i has depth per_child[i] everywhere.
  static DepthSpec constant(std::vector<std::int64_t> per_child);
  // The tight assignment d(i) = k-1-i (clamped at zero).
  static DepthSpec descending(int k);

  DepthSpec& set(int child, const WorldId& world, std::int64_t d);  // per-world override

  std::int64_t at(int child, const WorldId& world) const;
  std::string describe() const;

 private:
  std::int64_t uniform_ = 0;
  std::vector<std::int64_t> per_child_;
  std::map<std::pair<int, WorldId>, std::int64_t> overrides_;
};

struct MuddyInstance {
  int n = 0;
  int k = 0;
  KripkeModel model;
  WorldId true_world;  // the first k children muddy
};

MuddyInstance muddy_model(int n, int k, const DepthSpec& depths, int max_n = 6);

// <~K[k-1] m(k-1)> ... <~K[1] m1> K[0] m0; modal depth k.
Formula phi_chain(int k);

// K[0](P[0,k-1] & K[1](P[1,k-2] & ... & K[k-1] P[k-1,0] ...)).
Formula depth_ladder(int k);

// The two showcase formulas on muddy(3,3) with d(i) = 2-i: consecutive
// "nobody knows" announcements empty a shallow agent's budget under the
// eager update, and relation cutting leaks a deeper agent's conclusion to a
// shallower one under the asymmetric update.
struct ShowcaseResult {
  bool amnesia_edpal = false;   // expected true
  bool amnesia_dpal = true;     // expected false
  bool amnesia_adpal = true;    // expected false
  bool leakage_adpal = false;   // expected true
  bool leakage_dpal = true;     // expected false
  bool leakage_edpal = true;    // expected false

  bool all_expected() const {
    return amnesia_edpal && !amnesia_dpal && !amnesia_adpal && leakage_adpal && !leakage_dpal &&
           !leakage_edpal;
  }
};

ShowcaseResult run_showcases();

struct MuddySweep {
  std::uint64_t checked = 0;
  std::uint64_t applicable = 0;  // specs whose antecedent holds
  std::uint64_t failures = 0;
  std::int64_t first_failure_index = -1;  // deterministic across thread counts
  std::string first_failure;
  DenseStats stats;
};

// Sufficiency sweep: ladder -> chain at the true world of muddy(k,k), over
// all constant depth vectors with values in [0,max_value] plus any extras.
MuddySweep upper_bound_sweep(int k, Semantics sem, std::int64_t max_value,
                             const std::vector<DepthSpec>& extra = {}, bool parallel = true);

struct LowerBoundOptions {
  enum class Family {
    Exhaustive,   // every depth function; feasible for n = 2 only
    Constants,    // constant per child
    Child0Rows,   // child 0 varies per world, the others stay constant
    Random,       // seeded per-world samples
  };
  Family family = Family::Exhaustive;
  std::uint64_t samples = 10000;  // Random only
  std::uint64_t seed = 1;
  bool parallel = true;
};

// Necessity sweep (positive-copy update only): chain -> K[0] P[0,k-1] at
// every world of muddy(n,n), over depth functions with values in [0,n].
MuddySweep lower_bound_sweep(int n, const LowerBoundOptions& opt);

}  // namespace dbel

#endif  // DBEL_MUDDY_HPP
