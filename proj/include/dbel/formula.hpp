// Formula syntax tree for depth-bounded epistemic logic.
//
// Core constructors: atoms, exact/at-least depth atoms, negation,
// conjunction, bounded knowledge K, unbounded knowledge Ki, and public
// announcement [phi]psi.  Everything else (true, false, |, ->, <->,
// <phi>psi) is parser sugar expanded into these eight.

#ifndef DBEL_FORMULA_HPP
#define DBEL_FORMULA_HPP

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace dbel {

// Agent names are free-form tokens (letters, digits, underscore); muddy
// children experiments use bare numerals like "0".
struct AgentId {
  std::string name;

  friend bool operator==(const AgentId& a, const AgentId& b) { return a.name == b.name; }
  friend bool operator!=(const AgentId& a, const AgentId& b) { return a.name != b.name; }
  friend bool operator<(const AgentId& a, const AgentId& b) { return a.name < b.name; }
};

class Formula {
 public:
  enum class Kind : std::uint8_t {
    Atom,          // propositional atom; "true" is reserved and always holds
    ExactDepth,    // E[a,d]
    AtLeastDepth,  // P[a,d]
    Not,
    And,
    Knows,         // K[a]
    KnowsInf,      // Ki[a]
    Announce,      // [phi]psi
  };

  Formula() = default;  // empty handle; only valid as a target of assignment

  static Formula atom(std::string name);
  static Formula exact_depth(AgentId agent, std::int64_t depth);
  static Formula at_least_depth(AgentId agent, std::int64_t depth);
  static Formula negation(Formula sub);
  static Formula conjunction(Formula left, Formula right);
  static Formula knows(AgentId agent, Formula sub);
  static Formula knows_inf(AgentId agent, Formula sub);
  static Formula announce(Formula announced, Formula body);

  // Sugar, expanded on construction.
  static Formula truth();                               // reserved atom "true"
  static Formula falsity();                             // ~true
  static Formula disjunction(Formula left, Formula right);   // ~(~l & ~r)
  static Formula implies(Formula left, Formula right);       // ~(l & ~r)
  static Formula iff(Formula left, Formula right);
  static Formula diamond(Formula announced, Formula body);   // ~[phi]~psi

  bool valid() const { return node_ != nullptr; }
  Kind kind() const;

  const std::string& atom_name() const;       // Atom
  const AgentId& agent() const;               // ExactDepth/AtLeastDepth/Knows/KnowsInf
  std::int64_t depth_bound() const;           // ExactDepth/AtLeastDepth
  Formula child() const;                      // Not/Knows/KnowsInf
  Formula left() const;                       // And
  Formula right() const;                      // And
  Formula announced() const;                  // Announce
  Formula body() const;                       // Announce

  bool is_truth() const;  // the reserved atom "true"

  // Modal depth per the recursive definition: K and Ki add one, announcements
  // add the depths of both parts.  Cached at construction.
  int modal_depth() const;

  std::size_t hash() const;

  // Structural equality / ordering on core constructors.
  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }
  friend bool operator<(const Formula& a, const Formula& b);

  // Identity of the underlying shared node; used for memoization keys.
  const void* node_id() const { return node_.get(); }

  struct Node;

 private:
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

// Renders with minimal parentheses under the grammar's precedence; negative
// depth parameters keep their sign.  parse(render(f)) == f for any formula
// whose depth parameters are non-negative.
std::string render(const Formula& f);

// Syntactic fragments of the language.
struct Fragment {
  enum class Kind {
    Linf,       // full language
    L,          // no Ki
    Hinf,       // no announcements
    H,          // no Ki, no announcements
    LagentInf,  // no depth atoms, no modal operators for other agents
    S5D,        // atoms, E, ~, &, Ki only
  };

  Kind kind = Kind::Linf;
  AgentId agent;  // only for LagentInf

  static Fragment linf() { return {Kind::Linf, {}}; }
  static Fragment l() { return {Kind::L, {}}; }
  static Fragment hinf() { return {Kind::Hinf, {}}; }
  static Fragment h() { return {Kind::H, {}}; }
  static Fragment lagent_inf(AgentId a) { return {Kind::LagentInf, std::move(a)}; }
  static Fragment s5d() { return {Kind::S5D, {}}; }
};

bool in_fragment(const Formula& f, const Fragment& frag);

// Agents / atom names occurring in a formula (sorted, unique).
std::vector<AgentId> agents_of(const Formula& f);
std::vector<std::string> atoms_of(const Formula& f);

bool contains_announce(const Formula& f);
bool contains_knows(const Formula& f);

}  // namespace dbel

#endif  // DBEL_FORMULA_HPP
