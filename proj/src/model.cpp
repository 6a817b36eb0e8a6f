#include "dbel/model.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

namespace dbel {

int KripkeModel::world_index(const WorldId& w) const {
  auto it = world_ix_.find(w);
  return it == world_ix_.end() ? -1 : it->second;
}

int KripkeModel::agent_index(const AgentId& a) const {
  auto it = agent_ix_.find(a.name);
  return it == agent_ix_.end() ? -1 : it->second;
}

int KripkeModel::atom_index(const std::string& p) const {
  auto it = atom_ix_.find(p);
  return it == atom_ix_.end() ? -1 : it->second;
}

bool KripkeModel::has_pair(int agent, int from, int to) const {
  const auto& s = succ_[agent][from];
  return std::binary_search(s.begin(), s.end(), to);
}

std::int64_t KripkeModel::size_norm() const {
  std::int64_t n = world_count();
  for (const auto& rel : succ_)
    for (const auto& s : rel) n += static_cast<std::int64_t>(s.size());
  return n;
}

bool KripkeModel::is_unambiguous() const {
  for (int a = 0; a < agent_count(); ++a)
    for (int w = 0; w < world_count(); ++w)
      for (int v : succ_[a][w])
        if (depth_[a][v] != depth_[a][w]) return false;
  return true;
}

ModelBuilder& ModelBuilder::add_world(const WorldId& w) {
  if (world_ix_.count(w)) throw ModelError("duplicate world name: " + w);
  world_ix_[w] = static_cast<int>(worlds_.size());
  worlds_.push_back(w);
  return *this;
}

ModelBuilder& ModelBuilder::add_agent(const AgentId& a) {
  if (agent_ix_.count(a.name)) throw ModelError("duplicate agent name: " + a.name);
  agent_ix_[a.name] = static_cast<int>(agents_.size());
  agents_.push_back(a);
  return *this;
}

ModelBuilder& ModelBuilder::declare_atom(const std::string& p) {
  if (!atom_ix_.count(p)) {
    atom_ix_[p] = static_cast<int>(atoms_.size());
    atoms_.push_back(p);
  }
  return *this;
}

int ModelBuilder::require_world(const WorldId& w) const {
  auto it = world_ix_.find(w);
  if (it == world_ix_.end()) throw ModelError("unknown world: " + w);
  return it->second;
}

int ModelBuilder::require_agent(const AgentId& a) const {
  auto it = agent_ix_.find(a.name);
  if (it == agent_ix_.end()) throw ModelError("unknown agent: " + a.name);
  return it->second;
}

ModelBuilder& ModelBuilder::set_atom(const std::string& p, const WorldId& w, bool value) {
  declare_atom(p);
  if (value) val_true_.emplace_back(atom_ix_[p], require_world(w));
  return *this;
}

ModelBuilder& ModelBuilder::set_depth(const AgentId& a, const WorldId& w, std::int64_t d) {
  depth_[{require_agent(a), require_world(w)}] = d;
  return *this;
}

ModelBuilder& ModelBuilder::set_depth_all(const AgentId& a, std::int64_t d) {
  depth_all_[require_agent(a)] = d;
  return *this;
}

ModelBuilder& ModelBuilder::add_undirected(const AgentId& a, const WorldId& x, const WorldId& y) {
  int ai = require_agent(a), xi = require_world(x), yi = require_world(y);
  pairs_.push_back({ai, {xi, yi}});
  pairs_.push_back({ai, {yi, xi}});
  return *this;
}

ModelBuilder& ModelBuilder::add_directed(const AgentId& a, const WorldId& x, const WorldId& y) {
  pairs_.push_back({require_agent(a), {require_world(x), require_world(y)}});
  return *this;
}

KripkeModel ModelBuilder::finalize(bool close_equivalence) const {
  const int nw = static_cast<int>(worlds_.size());
  const int na = static_cast<int>(agents_.size());

  KripkeModel m;
  m.worlds_ = worlds_;
  m.world_ix_ = world_ix_;
  m.agents_ = agents_;
  m.agent_ix_ = agent_ix_;
  m.atoms_ = atoms_;
  m.atom_ix_ = atom_ix_;
  m.kind_ = kind_;

  m.depth_.assign(na, std::vector<std::int64_t>(nw, 0));
  for (int a = 0; a < na; ++a) {
    auto def = depth_all_.find(a);
    for (int w = 0; w < nw; ++w) {
      auto it = depth_.find({a, w});
      if (it != depth_.end()) {
        m.depth_[a][w] = it->second;
      } else if (def != depth_all_.end()) {
        m.depth_[a][w] = def->second;
      } else {
        throw ModelError("missing depth entry for agent " + agents_[a].name + " at world " +
                         worlds_[w]);
      }
    }
  }

  m.val_.assign(atoms_.size(), std::vector<bool>(nw, false));
  for (auto [p, w] : val_true_) m.val_[p][w] = true;

  m.succ_.assign(na, std::vector<std::vector<int>>(nw));
  for (int a = 0; a < na; ++a) {
    std::vector<std::set<int>> adj(nw);
    for (int w = 0; w < nw; ++w) adj[w].insert(w);  // reflexive closure
    for (const auto& [pa, pr] : pairs_)
      if (pa == a) adj[pr.first].insert(pr.second);
    if (close_equivalence) {
      // Union-find over generator pairs; the component relation is the
      // symmetric transitive closure (reflexivity comes from the diagonal).
      std::vector<int> parent(nw);
      std::iota(parent.begin(), parent.end(), 0);
      std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
      };
      for (int w = 0; w < nw; ++w)
        for (int v : adj[w]) parent[find(w)] = find(v);
      std::map<int, std::vector<int>> comps;
      for (int w = 0; w < nw; ++w) comps[find(w)].push_back(w);
      for (auto& [root, members] : comps)
        for (int w : members) adj[w] = std::set<int>(members.begin(), members.end());
    }
    for (int w = 0; w < nw; ++w) m.succ_[a][w] = {adj[w].begin(), adj[w].end()};
  }
  return m;
}

ValidationReport validate(const KripkeModel& m) {
  ValidationReport rep;
  for (int a = 0; a < m.agent_count(); ++a) {
    const std::string& an = m.agents()[a].name;
    for (int w = 0; w < m.world_count(); ++w) {
      if (!m.has_pair(a, w, w))
        rep.relation_violations.push_back("agent " + an + ": missing reflexive pair at " +
                                          m.worlds()[w]);
      if (m.depth(a, w) < 0)
        rep.depth_violations.push_back("agent " + an + ": negative depth " +
                                       std::to_string(m.depth(a, w)) + " at " + m.worlds()[w]);
    }
    if (m.kind() == RelationKind::Equivalence) {
      for (int w = 0; w < m.world_count(); ++w) {
        for (int v : m.successors(a, w)) {
          if (!m.has_pair(a, v, w))
            rep.relation_violations.push_back("agent " + an + ": pair " + m.worlds()[w] + "-" +
                                              m.worlds()[v] + " lacks its symmetric pair");
          for (int u : m.successors(a, v))
            if (!m.has_pair(a, w, u)) {
              rep.relation_violations.push_back("agent " + an + ": transitivity breach " +
                                                m.worlds()[w] + "-" + m.worlds()[v] + "-" +
                                                m.worlds()[u]);
              break;
            }
        }
      }
    }
  }
  return rep;
}

bool structurally_equal(const KripkeModel& a, const KripkeModel& b) {
  if (a.kind() != b.kind()) return false;
  auto sorted_names = [](const auto& xs, auto proj) {
    std::vector<std::string> v;
    for (const auto& x : xs) v.push_back(proj(x));
    std::sort(v.begin(), v.end());
    return v;
  };
  auto id = [](const std::string& s) { return s; };
  auto agent_name = [](const AgentId& x) { return x.name; };
  if (sorted_names(a.worlds(), id) != sorted_names(b.worlds(), id)) return false;
  if (sorted_names(a.agents(), agent_name) != sorted_names(b.agents(), agent_name)) return false;
  if (sorted_names(a.atoms(), id) != sorted_names(b.atoms(), id)) return false;

  for (const auto& ag : a.agents()) {
    int ia = a.agent_index(ag), ib = b.agent_index(ag);
    for (const auto& w : a.worlds()) {
      int wa = a.world_index(w), wb = b.world_index(w);
      if (a.depth(ia, wa) != b.depth(ib, wb)) return false;
      std::set<std::string> sa, sb;
      for (int v : a.successors(ia, wa)) sa.insert(a.worlds()[v]);
      for (int v : b.successors(ib, wb)) sb.insert(b.worlds()[v]);
      if (sa != sb) return false;
    }
  }
  for (const auto& p : a.atoms()) {
    int pa = a.atom_index(p), pb = b.atom_index(p);
    for (const auto& w : a.worlds())
      if (a.atom_true(pa, a.world_index(w)) != b.atom_true(pb, b.world_index(w))) return false;
  }
  return true;
}

namespace {

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

std::int64_t parse_int(const std::string& s, int line) {
  try {
    std::size_t used = 0;
    std::int64_t v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ModelError("line " + std::to_string(line) + ": bad integer '" + s + "'");
  }
}

}  // namespace

KripkeModel load_model(const std::string& source) {
  std::optional<RelationKind> kind;
  std::optional<ModelBuilder> builder;
  std::set<std::string> seen_depth;
  std::set<std::string> seen_rel;
  std::set<std::string> seen_atoms;
  bool have_agents = false, have_worlds = false;
  std::vector<std::string> agent_names, world_names;

  // Lines after the header are deferred until agents and worlds are known.
  struct Pending {
    int line;
    std::string head, tail;
  };
  std::vector<Pending> body;

  std::istringstream is(source);
  std::string raw;
  int lineno = 0;
  while (std::getline(is, raw)) {
    ++lineno;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    auto toks = split_ws(raw);
    if (toks.empty()) continue;
    const std::string& head = toks[0];
    if (head == "kind") {
      if (toks.size() != 2 || (toks[1] != "equivalence" && toks[1] != "reflexive"))
        throw ModelError("line " + std::to_string(lineno) +
                         ": expected 'kind equivalence' or 'kind reflexive'");
      if (kind) throw ModelError("line " + std::to_string(lineno) + ": duplicate kind");
      kind = toks[1] == "equivalence" ? RelationKind::Equivalence : RelationKind::Reflexive;
    } else if (head == "agents") {
      if (have_agents) throw ModelError("line " + std::to_string(lineno) + ": duplicate agents");
      agent_names.assign(toks.begin() + 1, toks.end());
      if (agent_names.empty())
        throw ModelError("line " + std::to_string(lineno) + ": at least one agent required");
      have_agents = true;
    } else if (head == "worlds") {
      if (have_worlds) throw ModelError("line " + std::to_string(lineno) + ": duplicate worlds");
      world_names.assign(toks.begin() + 1, toks.end());
      if (world_names.empty())
        throw ModelError("line " + std::to_string(lineno) + ": at least one world required");
      have_worlds = true;
    } else if (head == "atom" || head == "depth" || head == "rel") {
      std::string rest = raw.substr(raw.find(head) + head.size());
      body.push_back({lineno, head, rest});
    } else {
      throw ModelError("line " + std::to_string(lineno) + ": unknown directive '" + head + "'");
    }
  }
  if (!kind) throw ModelError("missing 'kind' line");
  if (!have_agents) throw ModelError("missing 'agents' line");
  if (!have_worlds) throw ModelError("missing 'worlds' line");

  ModelBuilder b(*kind);
  for (const auto& w : world_names) b.add_world(w);
  for (const auto& a : agent_names) b.add_agent(AgentId{a});

  for (const auto& item : body) {
    auto colon = item.tail.find(':');
    if (colon == std::string::npos)
      throw ModelError("line " + std::to_string(item.line) + ": expected ':' after " + item.head +
                       " name");
    auto name_toks = split_ws(item.tail.substr(0, colon));
    if (name_toks.size() != 1)
      throw ModelError("line " + std::to_string(item.line) + ": expected exactly one " +
                       item.head + " name");
    const std::string name = name_toks[0];
    auto entries = split_ws(item.tail.substr(colon + 1));

    if (item.head == "atom") {
      if (name == "true" || name == "false")
        throw ModelError("line " + std::to_string(item.line) + ": atom name '" + name +
                         "' is reserved");
      if (!seen_atoms.insert(name).second)
        throw ModelError("line " + std::to_string(item.line) + ": duplicate atom '" + name + "'");
      b.declare_atom(name);
      for (const auto& w : entries) {
        try {
          b.set_atom(name, w);
        } catch (const ModelError& e) {
          throw ModelError("line " + std::to_string(item.line) + ": " + e.what());
        }
      }
    } else if (item.head == "depth") {
      if (!seen_depth.insert(name).second)
        throw ModelError("line " + std::to_string(item.line) + ": duplicate depth clause for '" +
                         name + "'");
      for (const auto& e : entries) {
        auto eq = e.find('=');
        if (eq == std::string::npos)
          throw ModelError("line " + std::to_string(item.line) +
                           ": depth entries look like 'world=d' or '*=d'");
        std::string key = e.substr(0, eq);
        std::int64_t d = parse_int(e.substr(eq + 1), item.line);
        try {
          if (key == "*")
            b.set_depth_all(AgentId{name}, d);
          else
            b.set_depth(AgentId{name}, key, d);
        } catch (const ModelError& err) {
          throw ModelError("line " + std::to_string(item.line) + ": " + err.what());
        }
      }
    } else {  // rel
      if (!seen_rel.insert(name).second)
        throw ModelError("line " + std::to_string(item.line) + ": duplicate rel clause for '" +
                         name + "'");
      for (const auto& e : entries) {
        auto dash = e.find('-');
        auto arrow = e.find('>');
        try {
          if (arrow != std::string::npos) {
            if (*kind == RelationKind::Equivalence)
              throw ModelError("directed generator '" + e + "' requires kind reflexive");
            b.add_directed(AgentId{name}, e.substr(0, arrow), e.substr(arrow + 1));
          } else if (dash != std::string::npos) {
            b.add_undirected(AgentId{name}, e.substr(0, dash), e.substr(dash + 1));
          } else {
            throw ModelError("rel entries look like 'w1-w2' or 'w1>w2'");
          }
        } catch (const ModelError& err) {
          throw ModelError("line " + std::to_string(item.line) + ": " + err.what());
        }
      }
    }
  }

  try {
    return b.finalize(*kind == RelationKind::Equivalence);
  } catch (const ModelError& e) {
    throw ModelError(std::string("model file: ") + e.what());
  }
}

std::string export_native(const KripkeModel& m) {
  std::ostringstream os;
  os << "kind " << (m.kind() == RelationKind::Equivalence ? "equivalence" : "reflexive") << "\n";
  os << "agents";
  for (const auto& a : m.agents()) os << ' ' << a.name;
  os << "\nworlds";
  for (const auto& w : m.worlds()) os << ' ' << w;
  os << "\n";
  for (int p = 0; p < m.atom_count(); ++p) {
    os << "atom " << m.atoms()[p] << ":";
    for (int w = 0; w < m.world_count(); ++w)
      if (m.atom_true(p, w)) os << ' ' << m.worlds()[w];
    os << "\n";
  }
  for (int a = 0; a < m.agent_count(); ++a) {
    bool constant = true;
    for (int w = 1; w < m.world_count(); ++w)
      if (m.depth(a, w) != m.depth(a, 0)) constant = false;
    os << "depth " << m.agents()[a].name << ":";
    if (constant) {
      os << " *=" << m.depth(a, 0);
    } else {
      for (int w = 0; w < m.world_count(); ++w)
        os << ' ' << m.worlds()[w] << '=' << m.depth(a, w);
    }
    os << "\n";
  }
  for (int a = 0; a < m.agent_count(); ++a) {
    os << "rel " << m.agents()[a].name << ":";
    for (int w = 0; w < m.world_count(); ++w) {
      for (int v : m.successors(a, w)) {
        if (v == w) continue;  // reflexive closure restores these
        if (m.has_pair(a, v, w)) {
          if (w < v) os << ' ' << m.worlds()[w] << '-' << m.worlds()[v];
        } else {
          os << ' ' << m.worlds()[w] << '>' << m.worlds()[v];
        }
      }
    }
    os << "\n";
  }
  return os.str();
}

std::string world_tag(const WorldId& w) {
  auto colon = w.find(':');
  if (colon == std::string::npos) return "";
  std::string tag = w.substr(0, colon);
  return (tag == "0" || tag == "1") ? tag : "";
}

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\' || c == '|' || c == '{' || c == '}' || c == '<' || c == '>')
      out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string export_dot(const KripkeModel& m) {
  std::ostringstream os;
  os << "digraph model {\n  rankdir=LR;\n  node [shape=record];\n";
  for (int a = 0; a < m.agent_count(); ++a) {
    const std::string& an = m.agents()[a].name;
    os << "  subgraph cluster_" << a << " {\n";
    os << "    label=\"agent " << dot_escape(an) << "\";\n";
    for (int w = 0; w < m.world_count(); ++w) {
      std::string atoms;
      for (int p = 0; p < m.atom_count(); ++p)
        if (m.atom_true(p, w)) atoms += (atoms.empty() ? "" : " ") + m.atoms()[p];
      std::string depths;
      for (int b = 0; b < m.agent_count(); ++b)
        depths += (depths.empty() ? "" : " ") + m.agents()[b].name + "=" +
                  std::to_string(m.depth(b, w));
      os << "    \"" << a << "/" << dot_escape(m.worlds()[w]) << "\" [label=\""
         << dot_escape(m.worlds()[w]) << " | " << dot_escape(atoms) << " | " << depths << "\"];\n";
    }
    for (int w = 0; w < m.world_count(); ++w) {
      for (int v : m.successors(a, w)) {
        if (v == w) continue;
        bool mutual = m.has_pair(a, v, w);
        if (mutual && v < w) continue;  // draw each symmetric pair once
        os << "    \"" << a << "/" << dot_escape(m.worlds()[w]) << "\" -> \"" << a << "/"
           << dot_escape(m.worlds()[v]) << "\"";
        std::vector<std::string> attrs;
        if (mutual) attrs.push_back("dir=none");
        if (world_tag(m.worlds()[w]) != world_tag(m.worlds()[v]))
          attrs.push_back("style=dashed");
        if (!attrs.empty()) {
          os << " [";
          for (std::size_t i = 0; i < attrs.size(); ++i) os << (i ? ", " : "") << attrs[i];
          os << "]";
        }
        os << ";\n";
      }
    }
    os << "  }\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace dbel
