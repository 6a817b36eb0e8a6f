// Kripke models with per-agent, per-world depth assignments.
//
// Relations are stored as explicit directed pair sets (successor lists):
// the asymmetric update engine breaks symmetry and transitivity, so a
// partition representation would not survive updates.

#ifndef DBEL_MODEL_HPP
#define DBEL_MODEL_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dbel/formula.hpp"

namespace dbel {

using WorldId = std::string;

enum class RelationKind { Equivalence, Reflexive };

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class KripkeModel {
 public:
  int world_count() const { return static_cast<int>(worlds_.size()); }
  int agent_count() const { return static_cast<int>(agents_.size()); }
  int atom_count() const { return static_cast<int>(atoms_.size()); }

  const std::vector<WorldId>& worlds() const { return worlds_; }
  const std::vector<AgentId>& agents() const { return agents_; }
  const std::vector<std::string>& atoms() const { return atoms_; }

  int world_index(const WorldId& w) const;   // -1 when absent
  int agent_index(const AgentId& a) const;   // -1 when absent
  int atom_index(const std::string& p) const;

  // Sorted successor indices of world w under agent a's relation.
  const std::vector<int>& successors(int agent, int world) const {
    return succ_[agent][world];
  }
  bool has_pair(int agent, int from, int to) const;

  std::int64_t depth(int agent, int world) const { return depth_[agent][world]; }
  bool atom_true(int atom, int world) const { return val_[atom][world]; }

  RelationKind kind() const { return kind_; }

  // Number of worlds plus the number of directed pairs over all agents
  // (self-loops included).
  std::int64_t size_norm() const;

  // Every agent knows its own depth exactly: depth is constant across each
  // agent's successor sets.
  bool is_unambiguous() const;

  friend class ModelBuilder;

 private:
  std::vector<WorldId> worlds_;
  std::vector<AgentId> agents_;
  std::vector<std::string> atoms_;
  std::vector<std::vector<std::vector<int>>> succ_;   // [agent][world] -> indices
  std::vector<std::vector<std::int64_t>> depth_;      // [agent][world]
  std::vector<std::vector<bool>> val_;                // [atom][world]
  RelationKind kind_ = RelationKind::Equivalence;
  std::map<WorldId, int> world_ix_;
  std::map<std::string, int> agent_ix_;
  std::map<std::string, int> atom_ix_;
};

class ModelBuilder {
 public:
  explicit ModelBuilder(RelationKind kind) : kind_(kind) {}

  ModelBuilder& add_world(const WorldId& w);
  ModelBuilder& add_agent(const AgentId& a);
  ModelBuilder& declare_atom(const std::string& p);
  ModelBuilder& set_atom(const std::string& p, const WorldId& w, bool value = true);
  ModelBuilder& set_depth(const AgentId& a, const WorldId& w, std::int64_t d);
  ModelBuilder& set_depth_all(const AgentId& a, std::int64_t d);
  ModelBuilder& add_undirected(const AgentId& a, const WorldId& x, const WorldId& y);
  ModelBuilder& add_directed(const AgentId& a, const WorldId& x, const WorldId& y);

  // The reflexive closure is always taken; the symmetric-transitive closure
  // only when `close_equivalence` is set (loading an equivalence-kind file).
  // The update engine emits exact pair sets and skips the extra closure.
  KripkeModel finalize(bool close_equivalence) const;

 private:
  int require_world(const WorldId& w) const;
  int require_agent(const AgentId& a) const;

  RelationKind kind_;
  std::vector<WorldId> worlds_;
  std::map<WorldId, int> world_ix_;
  std::vector<AgentId> agents_;
  std::map<std::string, int> agent_ix_;
  std::vector<std::string> atoms_;
  std::map<std::string, int> atom_ix_;
  std::vector<std::pair<int, std::pair<int, int>>> pairs_;  // (agent, (from, to))
  std::map<std::pair<int, int>, std::int64_t> depth_;       // (agent, world)
  std::map<int, std::int64_t> depth_all_;                   // agent -> constant
  std::vector<std::pair<int, int>> val_true_;               // (atom, world)
};

struct ValidationReport {
  std::vector<std::string> relation_violations;  // missing reflexive pair,
                                                 // symmetry/transitivity breach
  std::vector<std::string> depth_violations;     // negative depths

  bool relations_ok() const { return relation_violations.empty(); }
  bool clean() const { return relation_violations.empty() && depth_violations.empty(); }
};

ValidationReport validate(const KripkeModel& m);

// Structural equality up to the ordering of worlds, agents, atoms and pairs.
bool structurally_equal(const KripkeModel& a, const KripkeModel& b);

// Line-oriented native format; see README for a worked example.
KripkeModel load_model(const std::string& source);
std::string export_native(const KripkeModel& m);

// One subgraph per agent; worlds labeled "name | atoms | depths".  Edges
// between differently tagged update copies ("0:w" vs "1:w") are dashed and
// self-loops are suppressed.
std::string export_dot(const KripkeModel& m);

// Leading update tag of a world name: "0", "1", or empty.
std::string world_tag(const WorldId& w);

}  // namespace dbel

#endif  // DBEL_MODEL_HPP
