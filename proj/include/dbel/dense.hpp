// Bitmask evaluation kernel for small models (at most 64 worlds).
//
// This is the engine the exhaustive sweeps run on: worlds are bits, per-
// subformula labelings are single machine words, and update construction
// allocates nothing.  The readable reference implementation lives in
// semantics.cpp; the two are checked against each other in the test suite
// and compared in the benchmark tool.

#ifndef DBEL_DENSE_HPP
#define DBEL_DENSE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "dbel/formula.hpp"
#include "dbel/model.hpp"
#include "dbel/semantics.hpp"

namespace dbel {

inline constexpr int kDenseMaxWorlds = 64;
inline constexpr int kDenseMaxAgents = 4;
inline constexpr int kDenseMaxAtoms = 4;

struct DenseModel {
  int n_worlds = 0;
  int n_agents = 0;
  int n_atoms = 0;
  RelationKind kind = RelationKind::Equivalence;
  std::uint64_t world_mask = 0;  // live worlds; eager updates mask worlds out
  std::uint64_t succ[kDenseMaxAgents][kDenseMaxWorlds] = {};
  std::int32_t depth[kDenseMaxAgents][kDenseMaxWorlds] = {};
  std::uint64_t atom_mask[kDenseMaxAtoms] = {};

  std::int64_t size_norm() const;
};

// Formula with agent and atom names resolved to dense indices.
struct CompiledFormula {
  struct Node {
    Formula::Kind kind;
    int agent = -1;
    int atom = -1;            // -1 for the reserved atom "true"
    std::int64_t bound = 0;   // depth-atom parameter
    int sub_depth = 0;        // modal depth of the K/Ki argument
    int a = -1, b = -1;       // children
  };
  std::vector<Node> nodes;
  int root = -1;
};

// Resolves names against the given orderings; unknown atoms evaluate to
// false and get index -2.  Unknown agents are an error.
CompiledFormula compile_formula(const Formula& f, const std::vector<AgentId>& agents,
                                const std::vector<std::string>& atoms);

struct DenseStats {
  std::uint64_t dpal_updates = 0;
  std::uint64_t dpal_bound_violations = 0;
  std::uint64_t edpal_updates = 0;
  std::uint64_t edpal_growths = 0;

  void merge(const DenseStats& o);
  // Adds these counts into the process-wide update counters.
  void publish() const;
};

// Truth mask of the compiled formula over the live worlds of m.  `stats`
// may be null, in which case update counts go to the global counters.
std::uint64_t dense_labels(const DenseModel& m, const CompiledFormula& cf, Semantics sem,
                           DenseStats* stats = nullptr);

inline bool dense_valid(const DenseModel& m, const CompiledFormula& cf, Semantics sem,
                        DenseStats* stats = nullptr) {
  return dense_labels(m, cf, sem, stats) == m.world_mask;
}

// Conversions for cross-checking against the reference engine.  World,
// agent and atom order is preserved, so labels correspond bit-per-index.
DenseModel to_dense(const KripkeModel& m);
KripkeModel to_kripke(const DenseModel& m, const std::vector<AgentId>& agents,
                      const std::vector<std::string>& atoms);

}  // namespace dbel

#endif  // DBEL_DENSE_HPP
