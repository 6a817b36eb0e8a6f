// Truth evaluation and the three public-announcement update engines.
//
// Evaluation labels every world of a model per subformula and builds each
// announced update once per announcement node, so checking a formula costs
// one labeling pass per subformula per (possibly updated) model.
//
//   DPAL  - duplicates worlds into a pre-announcement "0:" copy and a
//           post-announcement "1:" copy; agents too shallow to perceive the
//           announcement cannot tell the copies apart.
//   EDPAL - deletes refuting worlds and unconditionally decrements every
//           depth (depths may go negative).
//   ADPAL - keeps all worlds and cuts relation pairs in place, only at
//           worlds where the source agent is deep enough; breaks symmetry.

#ifndef DBEL_SEMANTICS_HPP
#define DBEL_SEMANTICS_HPP

#include <atomic>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "dbel/formula.hpp"
#include "dbel/model.hpp"

namespace dbel {

enum class Semantics { DPAL, EDPAL, ADPAL };

const char* semantics_name(Semantics sem);

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EvalOptions {
  // Updates that would exceed this world count abort with EvalError; the
  // positive-copy duplication can grow exponentially under nesting.
  std::int64_t world_cap = 100000;
};

// Process-wide counters fed by every update the library performs, in both
// the reference and the sweep engines.  The size bound |M|phi| <= 4|M| is
// checked on each positive-copy update and recorded here.
struct UpdateCounters {
  std::atomic<std::uint64_t> dpal_updates{0};
  std::atomic<std::uint64_t> dpal_bound_violations{0};
  std::atomic<std::uint64_t> edpal_updates{0};
  std::atomic<std::uint64_t> edpal_growths{0};
  std::atomic<std::uint64_t> adpal_updates{0};

  void reset();
};

UpdateCounters& global_update_counters();

// Truth values of f at every world of m.
std::vector<bool> label_worlds(const KripkeModel& m, const Formula& f, Semantics sem,
                               const EvalOptions& opts = {});

bool eval(const KripkeModel& m, const WorldId& world, const Formula& f, Semantics sem,
          const EvalOptions& opts = {});

bool valid_in(const KripkeModel& m, const Formula& f, Semantics sem,
              const EvalOptions& opts = {});

// The updated model M|announced under the chosen semantics.
KripkeModel update(const KripkeModel& m, const Formula& announced, Semantics sem,
                   const EvalOptions& opts = {});

}  // namespace dbel

#endif  // DBEL_SEMANTICS_HPP
