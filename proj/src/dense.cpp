#include "dbel/dense.hpp"

#include <bit>
#include <stdexcept>
#include <unordered_map>

namespace dbel {

std::int64_t DenseModel::size_norm() const {
  std::int64_t n = std::popcount(world_mask);
  for (int a = 0; a < n_agents; ++a) {
    std::uint64_t worlds = world_mask;
    while (worlds) {
      int w = std::countr_zero(worlds);
      worlds &= worlds - 1;
      n += std::popcount(succ[a][w]);
    }
  }
  return n;
}

void DenseStats::merge(const DenseStats& o) {
  dpal_updates += o.dpal_updates;
  dpal_bound_violations += o.dpal_bound_violations;
  edpal_updates += o.edpal_updates;
  edpal_growths += o.edpal_growths;
}

void DenseStats::publish() const {
  auto& g = global_update_counters();
  g.dpal_updates.fetch_add(dpal_updates, std::memory_order_relaxed);
  g.dpal_bound_violations.fetch_add(dpal_bound_violations, std::memory_order_relaxed);
  g.edpal_updates.fetch_add(edpal_updates, std::memory_order_relaxed);
  g.edpal_growths.fetch_add(edpal_growths, std::memory_order_relaxed);
}

namespace {

int compile_rec(const Formula& f, const std::vector<AgentId>& agents,
                const std::vector<std::string>& atoms, CompiledFormula& out,
                std::unordered_map<const void*, int>& seen) {
  auto it = seen.find(f.node_id());
  if (it != seen.end()) return it->second;

  CompiledFormula::Node n;
  n.kind = f.kind();
  auto agent_index = [&](const AgentId& a) {
    for (std::size_t i = 0; i < agents.size(); ++i)
      if (agents[i] == a) return static_cast<int>(i);
    throw std::invalid_argument("compile_formula: unknown agent '" + a.name + "'");
  };
  switch (f.kind()) {
    case Formula::Kind::Atom: {
      if (f.is_truth()) {
        n.atom = -1;
      } else {
        n.atom = -2;
        for (std::size_t i = 0; i < atoms.size(); ++i)
          if (atoms[i] == f.atom_name()) n.atom = static_cast<int>(i);
      }
      break;
    }
    case Formula::Kind::ExactDepth:
    case Formula::Kind::AtLeastDepth:
      n.agent = agent_index(f.agent());
      n.bound = f.depth_bound();
      break;
    case Formula::Kind::Not:
      n.a = compile_rec(f.child(), agents, atoms, out, seen);
      break;
    case Formula::Kind::And:
      n.a = compile_rec(f.left(), agents, atoms, out, seen);
      n.b = compile_rec(f.right(), agents, atoms, out, seen);
      break;
    case Formula::Kind::Knows:
    case Formula::Kind::KnowsInf:
      n.agent = agent_index(f.agent());
      n.sub_depth = f.child().modal_depth();
      n.a = compile_rec(f.child(), agents, atoms, out, seen);
      break;
    case Formula::Kind::Announce:
      n.sub_depth = f.announced().modal_depth();
      n.a = compile_rec(f.announced(), agents, atoms, out, seen);
      n.b = compile_rec(f.body(), agents, atoms, out, seen);
      break;
  }
  out.nodes.push_back(n);
  int idx = static_cast<int>(out.nodes.size()) - 1;
  seen.emplace(f.node_id(), idx);
  return idx;
}

}  // namespace

CompiledFormula compile_formula(const Formula& f, const std::vector<AgentId>& agents,
                                const std::vector<std::string>& atoms) {
  if (static_cast<int>(agents.size()) > kDenseMaxAgents)
    throw std::invalid_argument("compile_formula: too many agents for the dense engine");
  if (static_cast<int>(atoms.size()) > kDenseMaxAtoms)
    throw std::invalid_argument("compile_formula: too many atoms for the dense engine");
  CompiledFormula out;
  std::unordered_map<const void*, int> seen;
  out.root = compile_rec(f, agents, atoms, out, seen);
  return out;
}

namespace {

struct MiniUnionFind {
  int parent[kDenseMaxWorlds];

  void init(int n) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int x, int y) { parent[find(x)] = find(y); }
};

// Positive-copy update: 0-copies keep the live worlds' order, 1-copies of
// announced-true worlds are appended.  one_map[w] is the 1-copy index.
void dpal_update(const DenseModel& m, std::uint64_t phi, int d, DenseModel& out,
                 int* zero_map, int* one_map) {
  int alive[kDenseMaxWorlds];
  int n_alive = 0;
  for (std::uint64_t ws = m.world_mask; ws;) {
    int w = std::countr_zero(ws);
    ws &= ws - 1;
    alive[n_alive] = w;
    zero_map[w] = n_alive++;
  }
  int total = n_alive;
  for (int i = 0; i < n_alive; ++i) {
    int w = alive[i];
    one_map[w] = (phi >> w) & 1 ? total++ : -1;
  }
  if (total > kDenseMaxWorlds)
    throw EvalError("dense engine: update exceeds 64 worlds; use the reference evaluator");

  out.n_worlds = total;
  out.n_agents = m.n_agents;
  out.n_atoms = m.n_atoms;
  out.kind = RelationKind::Equivalence;
  out.world_mask = total == 64 ? ~0ull : (1ull << total) - 1;

  for (int p = 0; p < m.n_atoms; ++p) {
    std::uint64_t mask = 0;
    for (int i = 0; i < n_alive; ++i) {
      int w = alive[i];
      if ((m.atom_mask[p] >> w) & 1) {
        mask |= 1ull << zero_map[w];
        if (one_map[w] >= 0) mask |= 1ull << one_map[w];
      }
    }
    out.atom_mask[p] = mask;
  }

  for (int a = 0; a < m.n_agents; ++a) {
    for (int i = 0; i < n_alive; ++i) {
      int w = alive[i];
      std::int32_t dep = m.depth[a][w];
      out.depth[a][zero_map[w]] = dep;
      if (one_map[w] >= 0) out.depth[a][one_map[w]] = dep < d ? dep : dep - d;
    }

    MiniUnionFind uf;
    uf.init(total);
    for (int i = 0; i < n_alive; ++i) {
      int w = alive[i];
      for (std::uint64_t vs = m.succ[a][w]; vs;) {
        int v = std::countr_zero(vs);
        vs &= vs - 1;
        uf.unite(zero_map[w], zero_map[v]);
        if (one_map[w] >= 0 && one_map[v] >= 0) uf.unite(one_map[w], one_map[v]);
      }
      if (one_map[w] >= 0 && m.depth[a][w] < d) uf.unite(one_map[w], zero_map[w]);
    }
    std::uint64_t comp_mask[kDenseMaxWorlds] = {};
    for (int x = 0; x < total; ++x) comp_mask[uf.find(x)] |= 1ull << x;
    for (int x = 0; x < total; ++x) out.succ[a][x] = comp_mask[uf.find(x)];
  }
}

void edpal_update(const DenseModel& m, std::uint64_t phi, int d, DenseModel& out) {
  out = m;
  out.world_mask = m.world_mask & phi;
  for (int a = 0; a < m.n_agents; ++a)
    for (std::uint64_t ws = out.world_mask; ws;) {
      int w = std::countr_zero(ws);
      ws &= ws - 1;
      out.succ[a][w] = m.succ[a][w] & out.world_mask;
      out.depth[a][w] = m.depth[a][w] - d;
    }
}

void adpal_update(const DenseModel& m, std::uint64_t phi, int d, DenseModel& out) {
  out = m;
  out.kind = RelationKind::Reflexive;
  for (int a = 0; a < m.n_agents; ++a)
    for (std::uint64_t ws = m.world_mask; ws;) {
      int w = std::countr_zero(ws);
      ws &= ws - 1;
      if (m.depth[a][w] >= d) {
        // keep only successors agreeing with w on the announced truth
        std::uint64_t agree = (phi >> w) & 1 ? phi : ~phi;
        out.succ[a][w] = m.succ[a][w] & agree;
        out.depth[a][w] = m.depth[a][w] - d;
      }
    }
}

struct DenseEval {
  Semantics sem;
  DenseStats* stats;

  std::uint64_t go(const DenseModel& m, const CompiledFormula& cf, int idx) {
    const auto& n = cf.nodes[idx];
    switch (n.kind) {
      case Formula::Kind::Atom:
        if (n.atom == -1) return m.world_mask;
        if (n.atom == -2) return 0;
        return m.atom_mask[n.atom] & m.world_mask;
      case Formula::Kind::ExactDepth:
      case Formula::Kind::AtLeastDepth: {
        std::uint64_t out = 0;
        bool exact = n.kind == Formula::Kind::ExactDepth;
        for (std::uint64_t ws = m.world_mask; ws;) {
          int w = std::countr_zero(ws);
          ws &= ws - 1;
          std::int64_t dep = m.depth[n.agent][w];
          if (exact ? dep == n.bound : dep >= n.bound) out |= 1ull << w;
        }
        return out;
      }
      case Formula::Kind::Not:
        return m.world_mask & ~go(m, cf, n.a);
      case Formula::Kind::And:
        return go(m, cf, n.a) & go(m, cf, n.b);
      case Formula::Kind::Knows:
      case Formula::Kind::KnowsInf: {
        std::uint64_t sub = go(m, cf, n.a);
        std::uint64_t out = 0;
        bool bounded = n.kind == Formula::Kind::Knows;
        for (std::uint64_t ws = m.world_mask; ws;) {
          int w = std::countr_zero(ws);
          ws &= ws - 1;
          if (bounded && m.depth[n.agent][w] < n.sub_depth) continue;
          if ((m.succ[n.agent][w] & ~sub) == 0) out |= 1ull << w;
        }
        return out;
      }
      case Formula::Kind::Announce: {
        std::uint64_t phi = go(m, cf, n.a);
        DenseModel upd;
        if (sem == Semantics::DPAL) {
          int zero_map[kDenseMaxWorlds], one_map[kDenseMaxWorlds];
          dpal_update(m, phi, n.sub_depth, upd, zero_map, one_map);
          note_dpal(m, upd);
          std::uint64_t body = go(upd, cf, n.b);
          std::uint64_t out = m.world_mask & ~phi;  // trivially true where phi fails
          for (std::uint64_t ws = phi; ws;) {
            int w = std::countr_zero(ws);
            ws &= ws - 1;
            if ((body >> one_map[w]) & 1) out |= 1ull << w;
          }
          return out;
        }
        if (sem == Semantics::EDPAL) {
          edpal_update(m, phi, n.sub_depth, upd);
          note_edpal(m, upd);
        } else {
          adpal_update(m, phi, n.sub_depth, upd);
        }
        std::uint64_t body = go(upd, cf, n.b);
        return (m.world_mask & ~phi) | (phi & body);
      }
    }
    return 0;
  }

  void note_dpal(const DenseModel& before, const DenseModel& after) {
    bool violated = after.size_norm() > 4 * before.size_norm();
    if (stats) {
      ++stats->dpal_updates;
      stats->dpal_bound_violations += violated;
    } else {
      auto& g = global_update_counters();
      g.dpal_updates.fetch_add(1, std::memory_order_relaxed);
      if (violated) g.dpal_bound_violations.fetch_add(1, std::memory_order_relaxed);
    }
  }

  void note_edpal(const DenseModel& before, const DenseModel& after) {
    bool grew = after.size_norm() > before.size_norm();
    if (stats) {
      ++stats->edpal_updates;
      stats->edpal_growths += grew;
    } else {
      auto& g = global_update_counters();
      g.edpal_updates.fetch_add(1, std::memory_order_relaxed);
      if (grew) g.edpal_growths.fetch_add(1, std::memory_order_relaxed);
    }
  }
};

}  // namespace

std::uint64_t dense_labels(const DenseModel& m, const CompiledFormula& cf, Semantics sem,
                           DenseStats* stats) {
  DenseEval ev{sem, stats};
  return ev.go(m, cf, cf.root);
}

DenseModel to_dense(const KripkeModel& m) {
  if (m.world_count() > kDenseMaxWorlds || m.agent_count() > kDenseMaxAgents ||
      m.atom_count() > kDenseMaxAtoms)
    throw std::invalid_argument("to_dense: model exceeds dense engine limits");
  DenseModel d;
  d.n_worlds = m.world_count();
  d.n_agents = m.agent_count();
  d.n_atoms = m.atom_count();
  d.kind = m.kind();
  d.world_mask = d.n_worlds == 64 ? ~0ull : (1ull << d.n_worlds) - 1;
  for (int a = 0; a < d.n_agents; ++a)
    for (int w = 0; w < d.n_worlds; ++w) {
      d.depth[a][w] = static_cast<std::int32_t>(m.depth(a, w));
      for (int v : m.successors(a, w)) d.succ[a][w] |= 1ull << v;
    }
  for (int p = 0; p < d.n_atoms; ++p)
    for (int w = 0; w < d.n_worlds; ++w)
      if (m.atom_true(p, w)) d.atom_mask[p] |= 1ull << w;
  return d;
}

KripkeModel to_kripke(const DenseModel& m, const std::vector<AgentId>& agents,
                      const std::vector<std::string>& atoms) {
  ModelBuilder b(m.kind);
  std::vector<WorldId> names;
  std::vector<int> index_of(kDenseMaxWorlds, -1);
  for (std::uint64_t ws = m.world_mask; ws;) {
    int w = std::countr_zero(ws);
    ws &= ws - 1;
    index_of[w] = static_cast<int>(names.size());
    names.push_back("w" + std::to_string(w));
    b.add_world(names.back());
  }
  for (int a = 0; a < m.n_agents; ++a) b.add_agent(agents.at(a));
  for (int p = 0; p < m.n_atoms; ++p) {
    b.declare_atom(atoms.at(p));
    for (std::uint64_t ws = m.world_mask & m.atom_mask[p]; ws;) {
      int w = std::countr_zero(ws);
      ws &= ws - 1;
      b.set_atom(atoms.at(p), names[index_of[w]]);
    }
  }
  for (int a = 0; a < m.n_agents; ++a)
    for (std::uint64_t ws = m.world_mask; ws;) {
      int w = std::countr_zero(ws);
      ws &= ws - 1;
      b.set_depth(agents.at(a), names[index_of[w]], m.depth[a][w]);
      for (std::uint64_t vs = m.succ[a][w] & m.world_mask; vs;) {
        int v = std::countr_zero(vs);
        vs &= vs - 1;
        if (v != w) b.add_directed(agents.at(a), names[index_of[w]], names[index_of[v]]);
      }
    }
  return b.finalize(false);
}

}  // namespace dbel
