// Shared helpers for the test suites: seeded random formulas and models.

#ifndef DBEL_TEST_UTIL_HPP
#define DBEL_TEST_UTIL_HPP

#include <random>
#include <string>
#include <vector>

#include "dbel/formula.hpp"
#include "dbel/model.hpp"

namespace dbel_test {

struct GenOptions {
  std::vector<std::string> atoms{"p", "q"};
  std::vector<std::string> agents{"a", "b"};
  int max_nodes = 12;
  int max_depth_param = 3;
  bool allow_announce = true;
  bool allow_knows = true;
  bool allow_knows_inf = true;
  bool allow_depth_atoms = true;
};

inline dbel::Formula random_formula(std::mt19937_64& rng, const GenOptions& opt,
                                    int budget = -1) {
  using dbel::Formula;
  if (budget < 0) budget = opt.max_nodes;
  auto pick_agent = [&] {
    return dbel::AgentId{opt.agents[rng() % opt.agents.size()]};
  };
  std::vector<int> choices;  // 0 atom, 1 E, 2 P, 3 not, 4 and, 5 K, 6 Ki, 7 announce
  choices.push_back(0);
  if (opt.allow_depth_atoms) {
    choices.push_back(1);
    choices.push_back(2);
  }
  if (budget > 1) {
    choices.push_back(3);
    choices.push_back(3);
    if (opt.allow_knows) choices.push_back(5);
    if (opt.allow_knows_inf) choices.push_back(6);
  }
  if (budget > 2) {
    choices.push_back(4);
    choices.push_back(4);
    if (opt.allow_announce) choices.push_back(7);
  }
  switch (choices[rng() % choices.size()]) {
    case 0:
      return Formula::atom(opt.atoms[rng() % opt.atoms.size()]);
    case 1:
      return Formula::exact_depth(pick_agent(),
                                  static_cast<std::int64_t>(rng() % (opt.max_depth_param + 1)));
    case 2:
      return Formula::at_least_depth(
          pick_agent(), static_cast<std::int64_t>(rng() % (opt.max_depth_param + 1)));
    case 3:
      return Formula::negation(random_formula(rng, opt, budget - 1));
    case 4: {
      int half = (budget - 1) / 2;
      return Formula::conjunction(random_formula(rng, opt, half),
                                  random_formula(rng, opt, budget - 1 - half));
    }
    case 5:
      return Formula::knows(pick_agent(), random_formula(rng, opt, budget - 1));
    case 6:
      return Formula::knows_inf(pick_agent(), random_formula(rng, opt, budget - 1));
    default: {
      int half = (budget - 1) / 2;
      return Formula::announce(random_formula(rng, opt, half),
                               random_formula(rng, opt, budget - 1 - half));
    }
  }
}

struct ModelGenOptions {
  int worlds = 3;
  std::vector<std::string> agents{"a", "b"};
  std::vector<std::string> atoms{"p", "q"};
  int max_depth = 3;
  dbel::RelationKind kind = dbel::RelationKind::Equivalence;
};

inline dbel::KripkeModel random_model(std::mt19937_64& rng, const ModelGenOptions& opt) {
  using namespace dbel;
  ModelBuilder b(opt.kind);
  std::vector<WorldId> ws;
  for (int i = 0; i < opt.worlds; ++i) {
    ws.push_back("w" + std::to_string(i));
    b.add_world(ws.back());
  }
  for (const auto& a : opt.agents) b.add_agent(AgentId{a});
  for (const auto& p : opt.atoms) {
    b.declare_atom(p);
    for (const auto& w : ws)
      if (rng() % 2) b.set_atom(p, w);
  }
  for (const auto& a : opt.agents) {
    for (const auto& w : ws)
      b.set_depth(AgentId{a}, w, static_cast<std::int64_t>(rng() % (opt.max_depth + 1)));
    if (opt.kind == RelationKind::Equivalence) {
      // Random restricted-growth string = random set partition.
      std::vector<int> block(opt.worlds, 0);
      int maxb = 0;
      for (int i = 1; i < opt.worlds; ++i) {
        block[i] = static_cast<int>(rng() % (maxb + 2));
        maxb = std::max(maxb, block[i]);
      }
      for (int i = 0; i < opt.worlds; ++i)
        for (int j = i + 1; j < opt.worlds; ++j)
          if (block[i] == block[j]) b.add_undirected(AgentId{a}, ws[i], ws[j]);
    } else {
      for (int i = 0; i < opt.worlds; ++i)
        for (int j = 0; j < opt.worlds; ++j)
          if (i != j && rng() % 3 == 0) b.add_directed(AgentId{a}, ws[i], ws[j]);
    }
  }
  return b.finalize(opt.kind == RelationKind::Equivalence);
}

}  // namespace dbel_test

#endif  // DBEL_TEST_UTIL_HPP
