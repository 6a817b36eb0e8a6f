#include "dbel/muddy.hpp"

#include <omp.h>

#include <random>
#include <sstream>
#include <stdexcept>

#include "dbel/parser.hpp"

namespace dbel {

DepthSpec DepthSpec::uniform(std::int64_t d) {
  DepthSpec s;
  s.uniform_ = d;
  return s;
}

DepthSpec DepthSpec::constant(std::vector<std::int64_t> per_child) {
  DepthSpec s;
  s.per_child_ = std::move(per_child);
  return s;
}

DepthSpec DepthSpec::descending(int k) {
  std::vector<std::int64_t> v;
  for (int i = 0; i < k; ++i) v.push_back(std::max<std::int64_t>(k - 1 - i, 0));
  return constant(std::move(v));
}

DepthSpec& DepthSpec::set(int child, const WorldId& world, std::int64_t d) {
  overrides_[{child, world}] = d;
  return *this;
}

std::int64_t DepthSpec::at(int child, const WorldId& world) const {
  auto it = overrides_.find({child, world});
  if (it != overrides_.end()) return it->second;
  if (child < static_cast<int>(per_child_.size())) return per_child_[child];
  return uniform_;
}

std::string DepthSpec::describe() const {
  std::ostringstream os;
  if (per_child_.empty()) {
    os << "*=" << uniform_;
  } else {
    for (std::size_t i = 0; i < per_child_.size(); ++i)
      os << (i ? "," : "") << i << "=" << per_child_[i];
  }
  for (const auto& [key, d] : overrides_)
    os << " " << key.first << "@" << key.second << "=" << d;
  return os.str();
}

namespace {

std::string world_name(int bits, int n) {
  std::string s(n, '0');
  for (int i = 0; i < n; ++i)
    if ((bits >> i) & 1) s[i] = '1';
  return s;
}

}  // namespace

MuddyInstance muddy_model(int n, int k, const DepthSpec& depths, int max_n) {
  if (n < 1 || k < 1 || k > n || n > max_n)
    throw std::invalid_argument("muddy_model: need 1 <= k <= n <= " + std::to_string(max_n));

  ModelBuilder b(RelationKind::Equivalence);
  for (int v = 1; v < (1 << n); ++v) b.add_world(world_name(v, n));
  for (int i = 0; i < n; ++i) b.add_agent(AgentId{std::to_string(i)});
  for (int i = 0; i < n; ++i) {
    b.declare_atom("m" + std::to_string(i));
    for (int v = 1; v < (1 << n); ++v)
      if ((v >> i) & 1) b.set_atom("m" + std::to_string(i), world_name(v, n));
  }
  for (int i = 0; i < n; ++i)
    for (int v = 1; v < (1 << n); ++v) {
      int flipped = v ^ (1 << i);
      if (flipped > v && flipped != 0)
        b.add_undirected(AgentId{std::to_string(i)}, world_name(v, n), world_name(flipped, n));
    }
  for (int i = 0; i < n; ++i)
    for (int v = 1; v < (1 << n); ++v)
      b.set_depth(AgentId{std::to_string(i)}, world_name(v, n), depths.at(i, world_name(v, n)));

  MuddyInstance inst;
  inst.n = n;
  inst.k = k;
  inst.model = b.finalize(true);
  inst.true_world = world_name((1 << k) - 1, n);
  return inst;
}

Formula phi_chain(int k) {
  if (k < 1) throw std::invalid_argument("phi_chain: k >= 1");
  Formula f = Formula::knows(AgentId{"0"}, Formula::atom("m0"));
  for (int i = 1; i < k; ++i)
    f = Formula::diamond(
        Formula::negation(Formula::knows(AgentId{std::to_string(i)},
                                         Formula::atom("m" + std::to_string(i)))),
        f);
  return f;
}

Formula depth_ladder(int k) {
  if (k < 1) throw std::invalid_argument("depth_ladder: k >= 1");
  Formula f = Formula::knows(AgentId{std::to_string(k - 1)},
                             Formula::at_least_depth(AgentId{std::to_string(k - 1)}, 0));
  for (int i = k - 2; i >= 0; --i) {
    AgentId a{std::to_string(i)};
    f = Formula::knows(
        a, Formula::conjunction(Formula::at_least_depth(a, k - 1 - i), f));
  }
  return f;
}

ShowcaseResult run_showcases() {
  MuddyInstance inst = muddy_model(3, 3, DepthSpec::descending(3));
  Formula amnesia = parse("<~K[2]m2> <~K[1]m1> ~K[2] true");
  Formula leakage = parse("<K[1] ~K[2]m2> K[1] K[0] m0");

  ShowcaseResult r;
  r.amnesia_edpal = eval(inst.model, inst.true_world, amnesia, Semantics::EDPAL);
  r.amnesia_dpal = eval(inst.model, inst.true_world, amnesia, Semantics::DPAL);
  r.amnesia_adpal = eval(inst.model, inst.true_world, amnesia, Semantics::ADPAL);
  r.leakage_adpal = eval(inst.model, inst.true_world, leakage, Semantics::ADPAL);
  r.leakage_dpal = eval(inst.model, inst.true_world, leakage, Semantics::DPAL);
  r.leakage_edpal = eval(inst.model, inst.true_world, leakage, Semantics::EDPAL);
  return r;
}

namespace {

struct MuddyDense {
  DenseModel skeleton;  // relations, atoms; depths filled per spec
  int true_world_index;
};

MuddyDense dense_skeleton(int n, int k) {
  MuddyInstance inst = muddy_model(n, k, DepthSpec::uniform(0));
  MuddyDense d;
  d.skeleton = to_dense(inst.model);
  d.true_world_index = inst.model.world_index(inst.true_world);
  return d;
}

void merge_failure(MuddySweep& into, const MuddySweep& part) {
  into.checked += part.checked;
  into.applicable += part.applicable;
  into.failures += part.failures;
  if (part.failures &&
      (into.first_failure_index < 0 || part.first_failure_index < into.first_failure_index)) {
    into.first_failure_index = part.first_failure_index;
    into.first_failure = part.first_failure;
  }
  into.stats.merge(part.stats);
}

}  // namespace

MuddySweep upper_bound_sweep(int k, Semantics sem, std::int64_t max_value,
                             const std::vector<DepthSpec>& extra, bool parallel) {
  Formula ladder = depth_ladder(k);
  Formula chain = phi_chain(k);

  std::vector<DepthSpec> specs;
  std::uint64_t combos = 1;
  for (int i = 0; i < k; ++i) combos *= static_cast<std::uint64_t>(max_value + 1);
  for (std::uint64_t ix = 0; ix < combos; ++ix) {
    std::uint64_t rest = ix;
    std::vector<std::int64_t> v;
    for (int i = 0; i < k; ++i) {
      v.push_back(static_cast<std::int64_t>(rest % (max_value + 1)));
      rest /= max_value + 1;
    }
    specs.push_back(DepthSpec::constant(std::move(v)));
  }
  specs.insert(specs.end(), extra.begin(), extra.end());

  const bool dense_ok = k <= 3;
  MuddyDense skel;
  CompiledFormula cf_ladder, cf_chain;
  MuddyInstance base;
  if (dense_ok) {
    skel = dense_skeleton(k, k);
    base = muddy_model(k, k, DepthSpec::uniform(0));
    cf_ladder = compile_formula(ladder, base.model.agents(), base.model.atoms());
    cf_chain = compile_formula(chain, base.model.agents(), base.model.atoms());
  }

  MuddySweep total;
  const std::int64_t count = static_cast<std::int64_t>(specs.size());
#pragma omp parallel if (parallel)
  {
    MuddySweep local;
#pragma omp for schedule(dynamic, 8)
    for (std::int64_t i = 0; i < count; ++i) {
      const DepthSpec& spec = specs[static_cast<std::size_t>(i)];
      bool antecedent, consequent;
      if (dense_ok) {
        DenseModel m = skel.skeleton;
        for (int a = 0; a < m.n_agents; ++a)
          for (int w = 0; w < m.n_worlds; ++w)
            m.depth[a][w] =
                static_cast<std::int32_t>(spec.at(a, base.model.worlds()[w]));
        antecedent = (dense_labels(m, cf_ladder, sem, &local.stats) >>
                      skel.true_world_index) & 1;
        consequent = (dense_labels(m, cf_chain, sem, &local.stats) >>
                      skel.true_world_index) & 1;
      } else {
        MuddyInstance inst = muddy_model(k, k, spec);
        antecedent = eval(inst.model, inst.true_world, ladder, sem);
        consequent = antecedent ? eval(inst.model, inst.true_world, chain, sem) : false;
      }
      ++local.checked;
      if (antecedent) {
        ++local.applicable;
        if (!consequent) {
          ++local.failures;
          if (local.first_failure_index < 0 || i < local.first_failure_index) {
            local.first_failure_index = i;
            local.first_failure = spec.describe();
          }
        }
      }
    }
#pragma omp critical
    merge_failure(total, local);
  }
  return total;
}

MuddySweep lower_bound_sweep(int n, const LowerBoundOptions& opt) {
  using Family = LowerBoundOptions::Family;
  const int k = n;
  const int n_worlds = (1 << n) - 1;
  const std::uint64_t values = static_cast<std::uint64_t>(k) + 1;

  MuddyDense skel = dense_skeleton(n, k);
  MuddyInstance base = muddy_model(n, k, DepthSpec::uniform(0));
  Formula goal = Formula::implies(
      phi_chain(k), Formula::knows(AgentId{"0"}, Formula::at_least_depth(AgentId{"0"}, k - 1)));
  CompiledFormula cf = compile_formula(goal, base.model.agents(), base.model.atoms());

  // Depth functions are decoded from a flat index; the family picks which
  // cells the index ranges over.
  int cells = 0;
  switch (opt.family) {
    case Family::Exhaustive: cells = n * n_worlds; break;
    case Family::Constants: cells = n; break;
    case Family::Child0Rows: cells = n_worlds + (n - 1); break;
    case Family::Random: cells = n * n_worlds; break;
  }
  std::uint64_t combos = 1;
  for (int c = 0; c < cells; ++c) combos *= values;
  if (opt.family == Family::Random) combos = opt.samples;
  if (opt.family == Family::Exhaustive && n > 2)
    throw std::invalid_argument(
        "lower_bound_sweep: exhaustive per-world enumeration is only feasible for n = 2");

  auto fill_depths = [&](DenseModel& m, std::uint64_t ix, std::mt19937_64* rng) {
    switch (opt.family) {
      case Family::Exhaustive:
        for (int a = 0; a < n; ++a)
          for (int w = 0; w < n_worlds; ++w) {
            m.depth[a][w] = static_cast<std::int32_t>(ix % values);
            ix /= values;
          }
        break;
      case Family::Constants:
        for (int a = 0; a < n; ++a) {
          auto d = static_cast<std::int32_t>(ix % values);
          ix /= values;
          for (int w = 0; w < n_worlds; ++w) m.depth[a][w] = d;
        }
        break;
      case Family::Child0Rows:
        for (int w = 0; w < n_worlds; ++w) {
          m.depth[0][w] = static_cast<std::int32_t>(ix % values);
          ix /= values;
        }
        for (int a = 1; a < n; ++a) {
          auto d = static_cast<std::int32_t>(ix % values);
          ix /= values;
          for (int w = 0; w < n_worlds; ++w) m.depth[a][w] = d;
        }
        break;
      case Family::Random:
        for (int a = 0; a < n; ++a)
          for (int w = 0; w < n_worlds; ++w)
            m.depth[a][w] = static_cast<std::int32_t>((*rng)() % values);
        break;
    }
  };

  MuddySweep total;
  const std::int64_t count = static_cast<std::int64_t>(combos);
#pragma omp parallel if (opt.parallel)
  {
    MuddySweep local;
#pragma omp for schedule(dynamic, 256)
    for (std::int64_t i = 0; i < count; ++i) {
      DenseModel m = skel.skeleton;
      std::mt19937_64 rng(opt.seed * 0x9e3779b97f4a7c15ull + static_cast<std::uint64_t>(i));
      fill_depths(m, static_cast<std::uint64_t>(i),
                  opt.family == Family::Random ? &rng : nullptr);
      ++local.checked;
      ++local.applicable;
      if (!dense_valid(m, cf, Semantics::DPAL, &local.stats)) {
        ++local.failures;
        if (local.first_failure_index < 0 || i < local.first_failure_index) {
          local.first_failure_index = i;
          std::ostringstream os;
          os << "depth function #" << i << " (family " << static_cast<int>(opt.family) << ")";
          local.first_failure = os.str();
        }
      }
    }
#pragma omp critical
    merge_failure(total, local);
  }
  return total;
}

}  // namespace dbel
