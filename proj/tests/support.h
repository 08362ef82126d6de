#ifndef XPLAIN_TESTS_SUPPORT_H_
#define XPLAIN_TESTS_SUPPORT_H_

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "xplain/pddl.h"
#include "xplain/planning.h"

namespace xplain::testing {

inline std::string DataPath(const std::string& name) {
  return std::string(XPLAIN_DATA_DIR) + "/" + name;
}

struct Blocks {
  std::string domain_text;
  std::string problem_text;
  std::string plan_text;
  PlanningProblem problem;
  Plan plan;
};

inline const Blocks& LoadBlocks() {
  static const Blocks blocks = [] {
    Blocks b;
    b.domain_text = ReadFile(DataPath("blocks/domain.pddl"));
    b.problem_text = ReadFile(DataPath("blocks/problem.pddl"));
    b.plan_text = ReadFile(DataPath("blocks/plan.txt"));
    b.problem = LoadProblem(b.domain_text, b.problem_text);
    b.plan = ParsePlan(b.plan_text, b.problem);
    return b;
  }();
  return blocks;
}

inline Atom A(const std::string& predicate, std::vector<std::string> args = {}) {
  return Atom{predicate, std::move(args)};
}

inline State StateOf(std::initializer_list<Atom> atoms) {
  return State(AtomSet(atoms));
}

// Hand-simulated states of the four-block plan, 0-based.
inline std::vector<State> ExpectedBlocksTrace() {
  return {
      StateOf({A("ONTABLE", {"D"}), A("ON", {"C", "D"}), A("ON", {"B", "C"}),
               A("ON", {"A", "B"}), A("CLEAR", {"A"})}),
      StateOf({A("ONTABLE", {"D"}), A("ON", {"C", "D"}), A("ON", {"B", "C"}),
               A("CLEAR", {"A"}), A("ONTABLE", {"A"}), A("CLEAR", {"B"})}),
      StateOf({A("ONTABLE", {"D"}), A("ON", {"C", "D"}), A("CLEAR", {"A"}),
               A("ONTABLE", {"A"}), A("CLEAR", {"B"}), A("ONTABLE", {"B"}),
               A("CLEAR", {"C"})}),
      StateOf({A("ONTABLE", {"D"}), A("CLEAR", {"A"}), A("ONTABLE", {"A"}),
               A("CLEAR", {"B"}), A("ONTABLE", {"B"}), A("CLEAR", {"C"}),
               A("ONTABLE", {"C"}), A("CLEAR", {"D"})}),
      StateOf({A("ON", {"C", "A"}), A("ON", {"D", "B"}), A("ONTABLE", {"A"}),
               A("ONTABLE", {"B"}), A("CLEAR", {"C"}), A("CLEAR", {"D"})}),
  };
}

/// Plain set algebra used as an independent model of the transition function.
inline AtomSet ApplyNaive(const AtomSet& state, const GroundAction& action) {
  AtomSet out;
  for (const Atom& a : state) {
    if (!action.del.count(a)) out.insert(a);
  }
  for (const Atom& a : action.add) out.insert(a);
  return out;
}

using Diagnosis = std::set<std::tuple<int, std::string, std::string, AtomSet>>;

/// Clause-level violations of a concurrent set, computed pair by pair.
inline Diagnosis ExpectedViolations(const AtomSet& state,
                                    const std::vector<GroundAction>& actions) {
  Diagnosis expected;
  for (const auto& a : actions) {
    AtomSet missing;
    for (const Atom& p : a.pre) {
      if (!state.count(p)) missing.insert(p);
    }
    if (!missing.empty()) expected.insert({1, a.name, "", missing});
  }
  for (const auto& a : actions) {
    for (const auto& b : actions) {
      if (a.name == b.name) continue;
      AtomSet clash, undermine;
      for (const Atom& x : a.add) {
        if (b.del.count(x)) clash.insert(x);
      }
      for (const Atom& x : a.del) {
        if (b.pre.count(x)) undermine.insert(x);
      }
      if (!clash.empty()) expected.insert({2, a.name, b.name, clash});
      if (!undermine.empty()) expected.insert({3, a.name, b.name, undermine});
    }
  }
  return expected;
}

/// (S minus every delete set) plus every add set.
inline AtomSet UnionResult(const AtomSet& state, const std::vector<GroundAction>& actions) {
  AtomSet out;
  for (const Atom& x : state) {
    bool deleted = false;
    for (const auto& a : actions) deleted |= a.del.count(x) > 0;
    if (!deleted) out.insert(x);
  }
  for (const auto& a : actions) out.insert(a.add.begin(), a.add.end());
  return out;
}

/// True when every execution order is applicable step by step and ends in `expected`.
inline bool AllOrdersReach(const AtomSet& state, const std::vector<GroundAction>& actions,
                           const AtomSet& expected) {
  std::vector<std::size_t> order(actions.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  do {
    AtomSet s = state;
    for (std::size_t i : order) {
      if (!std::includes(s.begin(), s.end(), actions[i].pre.begin(), actions[i].pre.end())) {
        return false;
      }
      s = ApplyNaive(s, actions[i]);
    }
    if (s != expected) return false;
  } while (std::next_permutation(order.begin(), order.end()));
  return true;
}

/// Random ground actions over nullary atoms P0..P{n-1}.
struct RandomActions {
  std::vector<Atom> universe;
  std::mt19937 rng;

  RandomActions(std::size_t atoms, unsigned seed) : rng(seed) {
    for (std::size_t i = 0; i < atoms; ++i) {
      universe.push_back(A("P" + std::to_string(i)));
    }
  }

  AtomSet Subset(double p) {
    std::bernoulli_distribution pick(p);
    AtomSet out;
    for (const Atom& a : universe) {
      if (pick(rng)) out.insert(a);
    }
    return out;
  }

  AtomSet SubsetOf(const AtomSet& from, double p) {
    std::bernoulli_distribution pick(p);
    AtomSet out;
    for (const Atom& a : from) {
      if (pick(rng)) out.insert(a);
    }
    return out;
  }

  GroundAction Action(const std::string& name, const AtomSet& state,
                      double effect_p) {
    GroundAction g;
    g.name = name;
    g.pre = SubsetOf(state, 0.3);
    for (const Atom& a : Subset(0.02)) g.pre.insert(a);
    g.add = Subset(effect_p);
    for (const Atom& a : Subset(effect_p)) {
      if (!g.add.count(a)) g.del.insert(a);
    }
    return g;
  }
};

}  // namespace xplain::testing

#endif  // XPLAIN_TESTS_SUPPORT_H_
