#include "dbel/formula.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace dbel {

struct Formula::Node {
  Kind kind;
  std::string name;  // Atom
  AgentId agent;     // depth atoms, K, Ki
  std::int64_t bound = 0;
  std::shared_ptr<const Node> a;  // child / left / announced
  std::shared_ptr<const Node> b;  // right / body
  int depth = 0;
  std::size_t hashv = 0;
};

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ull + (seed << 6) + (seed >> 2));
}

std::shared_ptr<const Formula::Node> make_node(Formula::Kind kind, std::string name,
                                               AgentId agent, std::int64_t bound,
                                               std::shared_ptr<const Formula::Node> a,
                                               std::shared_ptr<const Formula::Node> b) {
  auto n = std::make_shared<Formula::Node>();
  n->kind = kind;
  n->name = std::move(name);
  n->agent = std::move(agent);
  n->bound = bound;

  int da = a ? a->depth : 0;
  int db = b ? b->depth : 0;
  switch (kind) {
    case Formula::Kind::Atom:
    case Formula::Kind::ExactDepth:
    case Formula::Kind::AtLeastDepth:
      n->depth = 0;
      break;
    case Formula::Kind::Not:
      n->depth = da;
      break;
    case Formula::Kind::And:
      n->depth = std::max(da, db);
      break;
    case Formula::Kind::Knows:
    case Formula::Kind::KnowsInf:
      n->depth = 1 + da;
      break;
    case Formula::Kind::Announce:
      n->depth = da + db;
      break;
  }

  std::size_t h = static_cast<std::size_t>(kind) * 0x9e3779b9u + 1;
  h = mix(h, std::hash<std::string>{}(n->name));
  h = mix(h, std::hash<std::string>{}(n->agent.name));
  h = mix(h, std::hash<std::int64_t>{}(n->bound));
  if (a) h = mix(h, a->hashv);
  if (b) h = mix(h, b->hashv);
  n->hashv = h;

  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

std::shared_ptr<const Formula::Node> node_of(const Formula& f);

}  // namespace

Formula Formula::atom(std::string name) {
  if (name.empty()) throw std::invalid_argument("atom name must be nonempty");
  return Formula(make_node(Kind::Atom, std::move(name), {}, 0, nullptr, nullptr));
}

Formula Formula::exact_depth(AgentId agent, std::int64_t depth) {
  if (agent.name.empty()) throw std::invalid_argument("agent name must be nonempty");
  return Formula(make_node(Kind::ExactDepth, {}, std::move(agent), depth, nullptr, nullptr));
}

Formula Formula::at_least_depth(AgentId agent, std::int64_t depth) {
  if (agent.name.empty()) throw std::invalid_argument("agent name must be nonempty");
  return Formula(make_node(Kind::AtLeastDepth, {}, std::move(agent), depth, nullptr, nullptr));
}

Formula Formula::negation(Formula sub) {
  return Formula(make_node(Kind::Not, {}, {}, 0, sub.node_, nullptr));
}

Formula Formula::conjunction(Formula left, Formula right) {
  return Formula(make_node(Kind::And, {}, {}, 0, left.node_, right.node_));
}

Formula Formula::knows(AgentId agent, Formula sub) {
  if (agent.name.empty()) throw std::invalid_argument("agent name must be nonempty");
  return Formula(make_node(Kind::Knows, {}, std::move(agent), 0, sub.node_, nullptr));
}

Formula Formula::knows_inf(AgentId agent, Formula sub) {
  if (agent.name.empty()) throw std::invalid_argument("agent name must be nonempty");
  return Formula(make_node(Kind::KnowsInf, {}, std::move(agent), 0, sub.node_, nullptr));
}

Formula Formula::announce(Formula announced, Formula body) {
  return Formula(make_node(Kind::Announce, {}, {}, 0, announced.node_, body.node_));
}

Formula Formula::truth() { return atom("true"); }
Formula Formula::falsity() { return negation(truth()); }

Formula Formula::disjunction(Formula left, Formula right) {
  return negation(conjunction(negation(std::move(left)), negation(std::move(right))));
}

Formula Formula::implies(Formula left, Formula right) {
  return negation(conjunction(std::move(left), negation(std::move(right))));
}

Formula Formula::iff(Formula left, Formula right) {
  return conjunction(implies(left, right), implies(right, left));
}

Formula Formula::diamond(Formula announced, Formula body) {
  return negation(announce(std::move(announced), negation(std::move(body))));
}

Formula::Kind Formula::kind() const { return node_->kind; }
const std::string& Formula::atom_name() const { return node_->name; }
const AgentId& Formula::agent() const { return node_->agent; }
std::int64_t Formula::depth_bound() const { return node_->bound; }
Formula Formula::child() const { return Formula(node_->a); }
Formula Formula::left() const { return Formula(node_->a); }
Formula Formula::right() const { return Formula(node_->b); }
Formula Formula::announced() const { return Formula(node_->a); }
Formula Formula::body() const { return Formula(node_->b); }

bool Formula::is_truth() const { return node_->kind == Kind::Atom && node_->name == "true"; }

int Formula::modal_depth() const { return node_->depth; }
std::size_t Formula::hash() const { return node_ ? node_->hashv : 0; }

namespace {

bool node_equal(const Formula::Node* x, const Formula::Node* y) {
  if (x == y) return true;
  if (!x || !y) return false;
  if (x->hashv != y->hashv || x->kind != y->kind) return false;
  if (x->bound != y->bound || x->name != y->name || x->agent.name != y->agent.name) return false;
  return node_equal(x->a.get(), y->a.get()) && node_equal(x->b.get(), y->b.get());
}

int node_compare(const Formula::Node* x, const Formula::Node* y) {
  if (x == y) return 0;
  if (!x) return -1;
  if (!y) return 1;
  if (x->kind != y->kind) return x->kind < y->kind ? -1 : 1;
  if (int c = x->name.compare(y->name)) return c;
  if (int c = x->agent.name.compare(y->agent.name)) return c;
  if (x->bound != y->bound) return x->bound < y->bound ? -1 : 1;
  if (int c = node_compare(x->a.get(), y->a.get())) return c;
  return node_compare(x->b.get(), y->b.get());
}

}  // namespace

bool operator==(const Formula& a, const Formula& b) { return node_equal(a.node_.get(), b.node_.get()); }
bool operator<(const Formula& a, const Formula& b) { return node_compare(a.node_.get(), b.node_.get()) < 0; }

namespace {

// Precedence levels used by the renderer.  Only core constructors are
// emitted, so the levels of interest are & versus the unary operators.
enum class Ctx { Top, AndOperand, Unary };

void render_rec(const Formula& f, Ctx ctx, std::string& out);

void render_paren(const Formula& f, std::string& out) {
  out += '(';
  render_rec(f, Ctx::Top, out);
  out += ')';
}

void render_rec(const Formula& f, Ctx ctx, std::string& out) {
  switch (f.kind()) {
    case Formula::Kind::Atom:
      out += f.atom_name();
      return;
    case Formula::Kind::ExactDepth:
    case Formula::Kind::AtLeastDepth: {
      out += f.kind() == Formula::Kind::ExactDepth ? 'E' : 'P';
      out += '[';
      out += f.agent().name;
      out += ',';
      out += std::to_string(f.depth_bound());
      out += ']';
      return;
    }
    case Formula::Kind::And: {
      // The grammar's conjunction chain is a left fold of unary operands.
      if (ctx == Ctx::Unary || ctx == Ctx::AndOperand) {
        render_paren(f, out);
        return;
      }
      render_rec(f.left(), f.left().kind() == Formula::Kind::And ? Ctx::Top : Ctx::AndOperand, out);
      out += " & ";
      render_rec(f.right(), Ctx::AndOperand, out);
      return;
    }
    case Formula::Kind::Not:
      out += '~';
      render_rec(f.child(), Ctx::Unary, out);
      return;
    case Formula::Kind::Knows:
    case Formula::Kind::KnowsInf:
      out += f.kind() == Formula::Kind::Knows ? "K[" : "Ki[";
      out += f.agent().name;
      out += "] ";
      render_rec(f.child(), Ctx::Unary, out);
      return;
    case Formula::Kind::Announce:
      out += '[';
      render_rec(f.announced(), Ctx::Top, out);
      out += "] ";
      render_rec(f.body(), Ctx::Unary, out);
      return;
  }
}

}  // namespace

std::string render(const Formula& f) {
  std::string out;
  render_rec(f, Ctx::Top, out);
  return out;
}

namespace {

bool fragment_rec(const Formula& f, const Fragment& frag) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Atom:
      return true;
    case K::ExactDepth:
      if (frag.kind == Fragment::Kind::LagentInf) return false;
      return true;
    case K::AtLeastDepth:
      if (frag.kind == Fragment::Kind::LagentInf || frag.kind == Fragment::Kind::S5D) return false;
      return true;
    case K::Not:
      return fragment_rec(f.child(), frag);
    case K::And:
      return fragment_rec(f.left(), frag) && fragment_rec(f.right(), frag);
    case K::Knows:
      if (frag.kind == Fragment::Kind::S5D) return false;
      if (frag.kind == Fragment::Kind::LagentInf && f.agent() != frag.agent) return false;
      return fragment_rec(f.child(), frag);
    case K::KnowsInf:
      if (frag.kind == Fragment::Kind::L || frag.kind == Fragment::Kind::H) return false;
      if (frag.kind == Fragment::Kind::LagentInf && f.agent() != frag.agent) return false;
      return fragment_rec(f.child(), frag);
    case K::Announce:
      if (frag.kind == Fragment::Kind::Hinf || frag.kind == Fragment::Kind::H ||
          frag.kind == Fragment::Kind::S5D)
        return false;
      return fragment_rec(f.announced(), frag) && fragment_rec(f.body(), frag);
  }
  return false;
}

template <typename Fn>
void walk(const Formula& f, Fn&& fn) {
  fn(f);
  switch (f.kind()) {
    case Formula::Kind::Not:
    case Formula::Kind::Knows:
    case Formula::Kind::KnowsInf:
      walk(f.child(), fn);
      break;
    case Formula::Kind::And:
      walk(f.left(), fn);
      walk(f.right(), fn);
      break;
    case Formula::Kind::Announce:
      walk(f.announced(), fn);
      walk(f.body(), fn);
      break;
    default:
      break;
  }
}

}  // namespace

bool in_fragment(const Formula& f, const Fragment& frag) { return fragment_rec(f, frag); }

std::vector<AgentId> agents_of(const Formula& f) {
  std::set<std::string> names;
  walk(f, [&](const Formula& g) {
    switch (g.kind()) {
      case Formula::Kind::ExactDepth:
      case Formula::Kind::AtLeastDepth:
      case Formula::Kind::Knows:
      case Formula::Kind::KnowsInf:
        names.insert(g.agent().name);
        break;
      default:
        break;
    }
  });
  std::vector<AgentId> out;
  for (const auto& n : names) out.push_back(AgentId{n});
  return out;
}

std::vector<std::string> atoms_of(const Formula& f) {
  std::set<std::string> names;
  walk(f, [&](const Formula& g) {
    if (g.kind() == Formula::Kind::Atom && !g.is_truth()) names.insert(g.atom_name());
  });
  return {names.begin(), names.end()};
}

bool contains_announce(const Formula& f) {
  bool found = false;
  walk(f, [&](const Formula& g) { found |= g.kind() == Formula::Kind::Announce; });
  return found;
}

bool contains_knows(const Formula& f) {
  bool found = false;
  walk(f, [&](const Formula& g) { found |= g.kind() == Formula::Kind::Knows; });
  return found;
}

}  // namespace dbel
