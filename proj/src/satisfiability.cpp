#include "dbel/satisfiability.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "dbel/semantics.hpp"

namespace dbel {

std::optional<std::map<std::string, std::int64_t>> assign_depths(
    const std::set<Formula>& gamma) {
  struct Constraints {
    std::int64_t lower = 0;
    std::optional<std::int64_t> upper;
    std::optional<std::int64_t> eq;
    std::set<std::int64_t> neq;
    bool bad = false;
  };
  std::map<std::string, Constraints> by_agent;

  for (const auto& f : gamma) {
    bool neg = f.kind() == Formula::Kind::Not;
    const Formula lit = neg ? f.child() : f;
    if (lit.kind() == Formula::Kind::AtLeastDepth) {
      auto& c = by_agent[lit.agent().name];
      if (!neg)
        c.lower = std::max(c.lower, lit.depth_bound());
      else
        c.upper = c.upper ? std::min(*c.upper, lit.depth_bound() - 1) : lit.depth_bound() - 1;
    } else if (lit.kind() == Formula::Kind::ExactDepth) {
      auto& c = by_agent[lit.agent().name];
      if (!neg) {
        if (c.eq && *c.eq != lit.depth_bound()) c.bad = true;
        c.eq = lit.depth_bound();
      } else {
        c.neq.insert(lit.depth_bound());
      }
    }
  }

  std::map<std::string, std::int64_t> out;
  for (auto& [agent, c] : by_agent) {
    if (c.bad) return std::nullopt;
    if (c.eq) {
      std::int64_t v = *c.eq;
      if (v < c.lower || (c.upper && v > *c.upper) || c.neq.count(v) || v < 0)
        return std::nullopt;
      out[agent] = v;
      continue;
    }
    std::int64_t v = std::max<std::int64_t>(c.lower, 0);
    while (c.neq.count(v)) ++v;
    if (c.upper && v > *c.upper) return std::nullopt;
    out[agent] = v;
  }
  return out;
}

namespace {

// The closure arranged for bitmask membership tests: `base` holds the
// non-negation members; a candidate set is a bitmask over base, with the
// negated members determined by rule 1.
struct TypeTable {
  std::vector<Formula> base;
  std::unordered_map<Formula, int, FormulaHash> index;

  struct MemberRef {
    int base_index;
    bool negated;
  };

  explicit TypeTable(const std::set<Formula>& cl) {
    for (const auto& f : cl) {
      if (f.kind() == Formula::Kind::Announce || f.kind() == Formula::Kind::Knows)
        throw std::invalid_argument("is_type: closure must be announcement-free and K-free");
      if (f.kind() == Formula::Kind::Not) {
        if (f.child().kind() == Formula::Kind::Not)
          throw std::invalid_argument("is_type: closure contains a double negation");
        continue;
      }
      index.emplace(f, static_cast<int>(base.size()));
      base.push_back(f);
    }
    for (const auto& f : cl)
      if (f.kind() == Formula::Kind::Not && !index.count(f.child()))
        throw std::invalid_argument("is_type: closure is not subformula-closed");
  }

  MemberRef ref(const Formula& f) const {
    if (f.kind() == Formula::Kind::Not) {
      auto it = index.find(f.child());
      if (it == index.end()) throw std::invalid_argument("formula not in closure");
      return {it->second, true};
    }
    auto it = index.find(f);
    if (it == index.end()) throw std::invalid_argument("formula not in closure");
    return {it->second, false};
  }

  static bool member(std::uint64_t mask, MemberRef r) {
    bool set = (mask >> r.base_index) & 1;
    return r.negated ? !set : set;
  }
};

struct DepthLiteral {
  int base_index;
  bool exact;
  std::int64_t bound;
};

// Static structure shared by every candidate check for one closure.
struct RuleSet {
  const TypeTable& table;
  struct AndRule {
    int self;
    TypeTable::MemberRef left, right;
  };
  std::vector<AndRule> ands;
  struct KRule {
    int self;
    TypeTable::MemberRef sub;
    int agent;  // index into agent list
  };
  std::vector<KRule> ks;
  std::vector<std::string> agents;
  std::vector<std::vector<DepthLiteral>> depth_atoms;  // per agent
  int true_index = -1;

  explicit RuleSet(const TypeTable& t) : table(t) {
    auto agent_index = [&](const std::string& name) {
      for (std::size_t i = 0; i < agents.size(); ++i)
        if (agents[i] == name) return static_cast<int>(i);
      agents.push_back(name);
      depth_atoms.emplace_back();
      return static_cast<int>(agents.size()) - 1;
    };
    for (int i = 0; i < static_cast<int>(t.base.size()); ++i) {
      const Formula& f = t.base[i];
      switch (f.kind()) {
        case Formula::Kind::And:
          ands.push_back({i, t.ref(f.left()), t.ref(f.right())});
          break;
        case Formula::Kind::KnowsInf:
          ks.push_back({i, t.ref(f.child()), agent_index(f.agent().name)});
          break;
        case Formula::Kind::ExactDepth:
          depth_atoms[agent_index(f.agent().name)].push_back({i, true, f.depth_bound()});
          break;
        case Formula::Kind::AtLeastDepth:
          depth_atoms[agent_index(f.agent().name)].push_back({i, false, f.depth_bound()});
          break;
        case Formula::Kind::Atom:
          if (f.is_truth()) true_index = i;
          break;
        default:
          break;
      }
    }
  }

  // Rules 2-7 plus the reserved-atom rule; rule 1 holds by construction of
  // the mask representation.
  bool structurally_consistent(std::uint64_t mask) const {
    if (true_index >= 0 && !((mask >> true_index) & 1)) return false;
    for (const auto& r : ands) {
      bool self = (mask >> r.self) & 1;
      bool both = TypeTable::member(mask, r.left) && TypeTable::member(mask, r.right);
      if (self != both) return false;
    }
    for (const auto& r : ks) {
      if (((mask >> r.self) & 1) && !TypeTable::member(mask, r.sub)) return false;
    }
    for (const auto& lits : depth_atoms) {
      for (const auto& x : lits) {
        bool xin = (mask >> x.base_index) & 1;
        if (!x.exact && xin) {
          // rule 4: P[a,d] excludes ~P[a,d'] and E[a,d'] for d' < d
          for (const auto& y : lits) {
            bool yin = (mask >> y.base_index) & 1;
            if (y.bound < x.bound && ((!y.exact && !yin) || (y.exact && yin))) return false;
          }
        }
        if (x.exact && xin) {
          // rule 5: one exact depth, and no ~P[a,d'] below it
          for (const auto& y : lits) {
            bool yin = (mask >> y.base_index) & 1;
            if (y.exact && yin && y.bound != x.bound) return false;
            if (!y.exact && !yin && y.bound < x.bound) return false;
          }
        }
        if (!x.exact && !xin) {
          // rule 7: ~P[a,0] never appears
          if (x.bound <= 0) return false;
          // rule 6: some d' < d where ~E[a,d'] is absent
          bool found = false;
          for (std::int64_t d = 0; d < x.bound && !found; ++d) {
            bool negated_e_present = false;
            bool e_in_closure = false;
            for (const auto& y : lits)
              if (y.exact && y.bound == d) {
                e_in_closure = true;
                negated_e_present = !((mask >> y.base_index) & 1);
              }
            found = !e_in_closure || !negated_e_present;
          }
          if (!found) return false;
        }
      }
    }
    return true;
  }

  std::set<Formula> to_set(std::uint64_t mask) const {
    std::set<Formula> out;
    for (int i = 0; i < static_cast<int>(table.base.size()); ++i) {
      if ((mask >> i) & 1)
        out.insert(table.base[i]);
      else
        out.insert(Formula::negation(table.base[i]));
    }
    return out;
  }
};

}  // namespace

bool is_type(const std::set<Formula>& gamma, const std::set<Formula>& cl) {
  TypeTable table(cl);
  for (const auto& f : gamma)
    if (!cl.count(f)) throw std::invalid_argument("is_type: gamma is not a subset of cl");

  // rule 1: exactly one of psi / ~psi for every non-negation in cl
  std::uint64_t mask = 0;
  if (table.base.size() > 63) throw std::invalid_argument("is_type: closure too large");
  for (int i = 0; i < static_cast<int>(table.base.size()); ++i) {
    bool pos = gamma.count(table.base[i]) > 0;
    bool neg = gamma.count(Formula::negation(table.base[i])) > 0;
    if (pos == neg) return false;
    if (pos) mask |= 1ull << i;
  }
  RuleSet rules(table);
  if (!rules.structurally_consistent(mask)) return false;
  return assign_depths(gamma).has_value();
}

namespace {

struct TypeWorld {
  std::uint64_t mask;
  std::vector<std::uint64_t> signature;  // per agent: Ki formulas contained
};

}  // namespace

SatResult satisfiable(const Formula& f, Logic logic) {
  if (logic == Logic::DBEL && contains_announce(f))
    throw std::invalid_argument(
        "satisfiable: announcements require the EDPAL logic (they have no eager reduction "
        "in the base logic)");

  Formula reduced = strip_double_negations(
      eliminate_announcements(expand_bounded_knowledge(f)));
  std::set<Formula> cl = closure({reduced});
  TypeTable table(cl);
  const int nbase = static_cast<int>(table.base.size());
  if (nbase > 24)
    throw std::invalid_argument("satisfiable: closure too large for explicit type tables (" +
                                std::to_string(nbase) + " base formulas)");
  RuleSet rules(table);
  const int nagents = static_cast<int>(rules.agents.size());

  // Collect the Ki members per agent for the agreement signatures.
  std::vector<std::vector<int>> ki_of_agent(nagents);
  for (const auto& k : rules.ks) ki_of_agent[k.agent].push_back(k.self);

  std::vector<TypeWorld> types;
  const std::uint64_t limit = 1ull << nbase;
  for (std::uint64_t mask = 0; mask < limit; ++mask) {
    if (!rules.structurally_consistent(mask)) continue;
    if (!assign_depths(rules.to_set(mask))) continue;
    TypeWorld t;
    t.mask = mask;
    t.signature.assign(nagents, 0);
    for (int a = 0; a < nagents; ++a)
      for (std::size_t j = 0; j < ki_of_agent[a].size(); ++j)
        if ((mask >> ki_of_agent[a][j]) & 1) t.signature[a] |= 1ull << j;
    types.push_back(std::move(t));
  }

  // Eliminate types whose refuted-Ki demands cannot be witnessed by a
  // surviving type with the same knowledge signature.
  std::vector<bool> alive(types.size(), true);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < types.size(); ++i) {
      if (!alive[i]) continue;
      bool ok = true;
      for (const auto& k : rules.ks) {
        if ((types[i].mask >> k.self) & 1) continue;  // ~Ki demand only
        bool witnessed = false;
        for (std::size_t j = 0; j < types.size() && !witnessed; ++j) {
          if (!alive[j]) continue;
          if (types[j].signature[k.agent] != types[i].signature[k.agent]) continue;
          if (!TypeTable::member(types[j].mask, k.sub)) witnessed = true;
        }
        if (!witnessed) {
          ok = false;
          break;
        }
      }
      if (!ok) {
        alive[i] = false;
        changed = true;
      }
    }
  }

  auto root_ref = table.ref(reduced);
  int designated = -1;
  for (std::size_t i = 0; i < types.size(); ++i)
    if (alive[i] && TypeTable::member(types[i].mask, root_ref)) {
      designated = static_cast<int>(i);
      break;
    }
  if (designated < 0) return {};

  // Witness: the designated type's component under the union of the
  // per-agent agreement relations, with minimal consistent depths.
  std::vector<int> comp;
  std::vector<bool> in_comp(types.size(), false);
  comp.push_back(designated);
  in_comp[designated] = true;
  for (std::size_t head = 0; head < comp.size(); ++head) {
    int i = comp[head];
    for (std::size_t j = 0; j < types.size(); ++j) {
      if (!alive[j] || in_comp[j]) continue;
      for (int a = 0; a < nagents; ++a)
        if (types[j].signature[a] == types[static_cast<std::size_t>(i)].signature[a]) {
          comp.push_back(static_cast<int>(j));
          in_comp[j] = true;
          break;
        }
    }
  }
  std::sort(comp.begin(), comp.end());

  ModelBuilder b(RelationKind::Equivalence);
  std::map<int, WorldId> name_of;
  for (std::size_t i = 0; i < comp.size(); ++i) {
    name_of[comp[i]] = "t" + std::to_string(i);
    b.add_world(name_of[comp[i]]);
  }
  for (const auto& a : rules.agents) b.add_agent(AgentId{a});
  for (const auto& g : table.base)
    if (g.kind() == Formula::Kind::Atom && !g.is_truth()) b.declare_atom(g.atom_name());

  for (int i : comp) {
    const auto& t = types[static_cast<std::size_t>(i)];
    for (const auto& g : table.base)
      if (g.kind() == Formula::Kind::Atom && !g.is_truth() &&
          TypeTable::member(t.mask, table.ref(g)))
        b.set_atom(g.atom_name(), name_of[i]);
    auto depths = assign_depths(rules.to_set(t.mask));
    for (int a = 0; a < nagents; ++a) {
      auto it = depths->find(rules.agents[a]);
      b.set_depth(AgentId{rules.agents[a]}, name_of[i], it == depths->end() ? 0 : it->second);
    }
    for (int j : comp)
      for (int a = 0; a < nagents; ++a)
        if (types[static_cast<std::size_t>(j)].signature[a] == t.signature[a] && i != j)
          b.add_directed(AgentId{rules.agents[a]}, name_of[i], name_of[j]);
  }
  KripkeModel witness = b.finalize(false);

  // Soundness gate: the witness must satisfy the original formula.
  Semantics check_sem = logic == Logic::DBEL ? Semantics::DPAL : Semantics::EDPAL;
  if (!eval(witness, name_of[designated], f, check_sem))
    throw std::logic_error("satisfiable: witness failed evaluation; type table inconsistent");

  return {SatWitness{std::move(witness), name_of[designated]}};
}

}  // namespace dbel
