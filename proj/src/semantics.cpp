#include "dbel/semantics.hpp"

#include <algorithm>
#include <memory>
#include <numeric>
#include <unordered_map>

namespace dbel {

const char* semantics_name(Semantics sem) {
  switch (sem) {
    case Semantics::DPAL: return "dpal";
    case Semantics::EDPAL: return "edpal";
    case Semantics::ADPAL: return "adpal";
  }
  return "?";
}

void UpdateCounters::reset() {
  dpal_updates = 0;
  dpal_bound_violations = 0;
  edpal_updates = 0;
  edpal_growths = 0;
  adpal_updates = 0;
}

UpdateCounters& global_update_counters() {
  static UpdateCounters counters;
  return counters;
}

namespace {

KripkeModel apply_update(const KripkeModel& m, const std::vector<bool>& phi_true,
                         std::int64_t announce_depth, Semantics sem, const EvalOptions& opts) {
  const int nw = m.world_count();
  const int na = m.agent_count();
  auto& counters = global_update_counters();

  if (sem == Semantics::DPAL) {
    std::int64_t survivors = std::count(phi_true.begin(), phi_true.end(), true);
    if (nw + survivors > opts.world_cap)
      throw EvalError("update would exceed the world cap (" + std::to_string(opts.world_cap) +
                      " worlds)");

    // New world indexing: 0-copy of world w at index w, 1-copy appended.
    std::vector<int> one_copy(nw, -1);
    std::vector<WorldId> names;
    names.reserve(nw + survivors);
    for (int w = 0; w < nw; ++w) names.push_back("0:" + m.worlds()[w]);
    for (int w = 0; w < nw; ++w)
      if (phi_true[w]) {
        one_copy[w] = static_cast<int>(names.size());
        names.push_back("1:" + m.worlds()[w]);
      }
    const int total = static_cast<int>(names.size());

    ModelBuilder b(RelationKind::Equivalence);
    for (const auto& n : names) b.add_world(n);
    for (const auto& a : m.agents()) b.add_agent(a);
    for (int p = 0; p < m.atom_count(); ++p) {
      b.declare_atom(m.atoms()[p]);
      for (int w = 0; w < nw; ++w)
        if (m.atom_true(p, w)) {
          b.set_atom(m.atoms()[p], names[w]);
          if (one_copy[w] >= 0) b.set_atom(m.atoms()[p], names[one_copy[w]]);
        }
    }
    for (int a = 0; a < na; ++a) {
      for (int w = 0; w < nw; ++w) {
        std::int64_t d = m.depth(a, w);
        b.set_depth(m.agents()[a], names[w], d);
        if (one_copy[w] >= 0)
          b.set_depth(m.agents()[a], names[one_copy[w]],
                      d < announce_depth ? d : d - announce_depth);
      }
    }

    // Transitive symmetric closure of the copy relations plus the links from
    // 1-copies down to their 0-copy where the agent is too shallow; the
    // diagonal of the base relation keeps every component reflexive.
    for (int a = 0; a < na; ++a) {
      std::vector<int> parent(total);
      std::iota(parent.begin(), parent.end(), 0);
      auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
      };
      auto unite = [&](int x, int y) { parent[find(x)] = find(y); };
      for (int w = 0; w < nw; ++w)
        for (int v : m.successors(a, w)) {
          unite(w, v);
          if (one_copy[w] >= 0 && one_copy[v] >= 0) unite(one_copy[w], one_copy[v]);
        }
      for (int w = 0; w < nw; ++w)
        if (one_copy[w] >= 0 && m.depth(a, w) < announce_depth) unite(one_copy[w], w);

      std::unordered_map<int, std::vector<int>> comps;
      for (int x = 0; x < total; ++x) comps[find(x)].push_back(x);
      for (const auto& [root, members] : comps)
        for (int x : members)
          for (int y : members)
            if (x != y) b.add_directed(m.agents()[a], names[x], names[y]);
    }

    KripkeModel out = b.finalize(false);
    counters.dpal_updates.fetch_add(1, std::memory_order_relaxed);
    if (out.size_norm() > 4 * m.size_norm())
      counters.dpal_bound_violations.fetch_add(1, std::memory_order_relaxed);
    return out;
  }

  if (sem == Semantics::EDPAL) {
    ModelBuilder b(m.kind());
    std::vector<bool> keep = phi_true;
    for (int w = 0; w < nw; ++w)
      if (keep[w]) b.add_world(m.worlds()[w]);
    for (const auto& a : m.agents()) b.add_agent(a);
    for (int p = 0; p < m.atom_count(); ++p) {
      b.declare_atom(m.atoms()[p]);
      for (int w = 0; w < nw; ++w)
        if (keep[w] && m.atom_true(p, w)) b.set_atom(m.atoms()[p], m.worlds()[w]);
    }
    for (int a = 0; a < na; ++a)
      for (int w = 0; w < nw; ++w)
        if (keep[w]) b.set_depth(m.agents()[a], m.worlds()[w], m.depth(a, w) - announce_depth);
    for (int a = 0; a < na; ++a)
      for (int w = 0; w < nw; ++w)
        if (keep[w])
          for (int v : m.successors(a, w))
            if (keep[v] && v != w) b.add_directed(m.agents()[a], m.worlds()[w], m.worlds()[v]);
    KripkeModel out = b.finalize(false);
    counters.edpal_updates.fetch_add(1, std::memory_order_relaxed);
    if (out.size_norm() > m.size_norm())
      counters.edpal_growths.fetch_add(1, std::memory_order_relaxed);
    return out;
  }

  // ADPAL: same worlds; a pair is cut when the source agent is deep enough
  // for the announcement and the announced truth differs across the pair.
  ModelBuilder b(RelationKind::Reflexive);
  for (const auto& w : m.worlds()) b.add_world(w);
  for (const auto& a : m.agents()) b.add_agent(a);
  for (int p = 0; p < m.atom_count(); ++p) {
    b.declare_atom(m.atoms()[p]);
    for (int w = 0; w < nw; ++w)
      if (m.atom_true(p, w)) b.set_atom(m.atoms()[p], m.worlds()[w]);
  }
  for (int a = 0; a < na; ++a)
    for (int w = 0; w < nw; ++w) {
      std::int64_t d = m.depth(a, w);
      b.set_depth(m.agents()[a], m.worlds()[w], d < announce_depth ? d : d - announce_depth);
    }
  for (int a = 0; a < na; ++a)
    for (int w = 0; w < nw; ++w) {
      bool deep = m.depth(a, w) >= announce_depth;
      for (int v : m.successors(a, w)) {
        if (v == w) continue;
        if (deep && phi_true[w] != phi_true[v]) continue;
        b.add_directed(m.agents()[a], m.worlds()[w], m.worlds()[v]);
      }
    }
  KripkeModel out = b.finalize(false);
  counters.adpal_updates.fetch_add(1, std::memory_order_relaxed);
  return out;
}

// Labeling context for one (possibly updated) model; announced updates are
// built once per announced formula and shared across worlds.
struct Ctx {
  explicit Ctx(KripkeModel model) : owned(std::move(model)), m(&owned) {}
  explicit Ctx(const KripkeModel* model) : m(model) {}

  KripkeModel owned;
  const KripkeModel* m;
  std::unordered_map<Formula, std::vector<bool>, FormulaHash> labels;
  std::unordered_map<Formula, std::unique_ptr<Ctx>, FormulaHash> updates;
};

class Evaluator {
 public:
  Evaluator(Semantics sem, const EvalOptions& opts) : sem_(sem), opts_(opts) {}

  const std::vector<bool>& label(Ctx& ctx, const Formula& f) {
    auto it = ctx.labels.find(f);
    if (it != ctx.labels.end()) return it->second;

    const KripkeModel& m = *ctx.m;
    const int nw = m.world_count();
    std::vector<bool> out(nw, false);

    switch (f.kind()) {
      case Formula::Kind::Atom: {
        if (f.is_truth()) {
          out.assign(nw, true);
        } else {
          int p = m.atom_index(f.atom_name());
          if (p >= 0)
            for (int w = 0; w < nw; ++w) out[w] = m.atom_true(p, w);
        }
        break;
      }
      case Formula::Kind::ExactDepth:
      case Formula::Kind::AtLeastDepth: {
        int a = agent_of(m, f);
        for (int w = 0; w < nw; ++w)
          out[w] = f.kind() == Formula::Kind::ExactDepth
                       ? m.depth(a, w) == f.depth_bound()
                       : m.depth(a, w) >= f.depth_bound();
        break;
      }
      case Formula::Kind::Not: {
        const auto& sub = label(ctx, f.child());
        for (int w = 0; w < nw; ++w) out[w] = !sub[w];
        break;
      }
      case Formula::Kind::And: {
        const auto& l = label(ctx, f.left());
        const auto& r = label(ctx, f.right());
        for (int w = 0; w < nw; ++w) out[w] = l[w] && r[w];
        break;
      }
      case Formula::Kind::Knows:
      case Formula::Kind::KnowsInf: {
        int a = agent_of(m, f);
        const auto& sub = label(ctx, f.child());
        const std::int64_t need = f.child().modal_depth();
        for (int w = 0; w < nw; ++w) {
          if (f.kind() == Formula::Kind::Knows && m.depth(a, w) < need) continue;
          bool all = true;
          for (int v : m.successors(a, w))
            if (!sub[v]) {
              all = false;
              break;
            }
          out[w] = all;
        }
        break;
      }
      case Formula::Kind::Announce: {
        const Formula phi = f.announced();
        const auto& phi_true = label(ctx, phi);
        auto uit = ctx.updates.find(phi);
        if (uit == ctx.updates.end()) {
          KripkeModel upd = apply_update(m, phi_true, phi.modal_depth(), sem_, opts_);
          uit = ctx.updates.emplace(phi, std::make_unique<Ctx>(std::move(upd))).first;
        }
        Ctx& sub = *uit->second;
        const auto& body = label(sub, f.body());
        for (int w = 0; w < nw; ++w) {
          if (!phi_true[w]) {
            out[w] = true;
            continue;
          }
          WorldId target =
              sem_ == Semantics::DPAL ? "1:" + m.worlds()[w] : m.worlds()[w];
          int t = sub.m->world_index(target);
          if (t < 0) throw EvalError("internal: missing post-update world " + target);
          out[w] = body[t];
        }
        break;
      }
    }
    return ctx.labels.emplace(f, std::move(out)).first->second;
  }

 private:
  static int agent_of(const KripkeModel& m, const Formula& f) {
    int a = m.agent_index(f.agent());
    if (a < 0) throw EvalError("formula mentions agent '" + f.agent().name +
                               "' which the model does not declare");
    return a;
  }

  Semantics sem_;
  EvalOptions opts_;
};

}  // namespace

std::vector<bool> label_worlds(const KripkeModel& m, const Formula& f, Semantics sem,
                               const EvalOptions& opts) {
  Ctx ctx(&m);
  Evaluator ev(sem, opts);
  return ev.label(ctx, f);
}

bool eval(const KripkeModel& m, const WorldId& world, const Formula& f, Semantics sem,
          const EvalOptions& opts) {
  int w = m.world_index(world);
  if (w < 0) throw EvalError("unknown world: " + world);
  return label_worlds(m, f, sem, opts)[w];
}

bool valid_in(const KripkeModel& m, const Formula& f, Semantics sem, const EvalOptions& opts) {
  auto labels = label_worlds(m, f, sem, opts);
  return std::all_of(labels.begin(), labels.end(), [](bool b) { return b; });
}

KripkeModel update(const KripkeModel& m, const Formula& announced, Semantics sem,
                   const EvalOptions& opts) {
  auto phi_true = label_worlds(m, announced, sem, opts);
  return apply_update(m, phi_true, announced.modal_depth(), sem, opts);
}

}  // namespace dbel
