#include "xplain/planning.h"

#include <algorithm>
#include <deque>
#include <iterator>
#include <sstream>
#include <stdexcept>
#include <tuple>
#include <utility>

namespace xplain {

namespace {

AtomSet Intersect(const AtomSet& a, const AtomSet& b) {
  AtomSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::inserter(out, out.end()));
  return out;
}

std::string JoinArgs(const std::vector<std::string>& args) {
  std::string out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i > 0) out += ',';
    out += args[i];
  }
  return out;
}

}  // namespace

std::string Atom::ToString() const {
  if (args.empty()) return predicate;
  return predicate + "(" + JoinArgs(args) + ")";
}

std::string Literal::ToString() const {
  return positive ? atom.ToString() : "¬" + atom.ToString();
}

std::string JoinAtoms(const AtomSet& atoms) {
  if (atoms.empty()) return "∅";
  std::string out;
  for (const Atom& atom : atoms) {
    if (!out.empty()) out += " ∧ ";
    out += atom.ToString();
  }
  return out;
}

std::string JoinGoals(const std::vector<Goal>& goals) {
  std::string out = "{";
  for (std::size_t i = 0; i < goals.size(); ++i) {
    if (i > 0) out += ", ";
    out += goals[i].ToString();
  }
  return out + "}";
}

std::string State::ToString() const { return JoinAtoms(atoms_); }

std::string GroundAction::ToString() const {
  if (args.empty()) return name;
  return name + "(" + JoinArgs(args) + ")";
}

PlanStep PlanStep::Single(GroundAction action) {
  PlanStep step;
  step.actions_.push_back(std::move(action));
  return step;
}

PlanStep PlanStep::Concurrent(std::vector<GroundAction> actions) {
  if (actions.size() < 2) {
    throw PreconditionError("a concurrent step requires at least two actions");
  }
  std::sort(actions.begin(), actions.end());
  for (std::size_t i = 1; i < actions.size(); ++i) {
    if (actions[i - 1].name == actions[i].name &&
        actions[i - 1].args == actions[i].args) {
      throw PreconditionError("duplicate action " + actions[i].ToString() +
                              " in concurrent step");
    }
  }
  PlanStep step;
  step.actions_ = std::move(actions);
  return step;
}

std::string PlanStep::ToString() const {
  if (!concurrent()) return action().ToString();
  std::string out = "(";
  for (std::size_t i = 0; i < actions_.size(); ++i) {
    if (i > 0) out += ", ";
    out += actions_[i].ToString();
  }
  return out + ")";
}

std::string Plan::ToString() const {
  std::string out = "⟨";
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (i > 0) out += ", ";
    out += steps[i].ToString();
  }
  return out + "⟩";
}

Goal Goal::Of(Atom atom) {
  Goal goal;
  goal.requirements.insert(Literal{std::move(atom), true});
  return goal;
}

std::string Goal::ToString() const {
  if (requirements.size() == 1) return requirements.begin()->ToString();
  std::string out = "(";
  for (const Literal& literal : requirements) {
    if (out.size() > 1) out += " ∧ ";
    out += literal.ToString();
  }
  return out + ")";
}

void PlanningProblem::CheckAtom(const Atom& atom) const {
  auto it = predicates.find(atom.predicate);
  if (it == predicates.end()) {
    throw VocabularyError("undeclared predicate " + atom.predicate);
  }
  if (it->second.arity() != atom.args.size()) {
    throw VocabularyError("predicate " + atom.predicate + " expects " +
                          std::to_string(it->second.arity()) +
                          " arguments, got " +
                          std::to_string(atom.args.size()));
  }
  for (const std::string& arg : atom.args) {
    if (objects.count(arg) == 0) {
      throw VocabularyError("undeclared object " + arg + " in " +
                            atom.ToString());
    }
  }
}

const GroundAction* PlanningProblem::FindAction(
    const std::string& name, const std::vector<std::string>& args) const {
  auto it = std::lower_bound(
      ground_actions.begin(), ground_actions.end(), std::tie(name, args),
      [](const GroundAction& a,
         const std::tuple<const std::string&, const std::vector<std::string>&>&
             key) { return std::tie(a.name, a.args) < key; });
  if (it == ground_actions.end() || it->name != name || it->args != args) {
    return nullptr;
  }
  return &*it;
}

bool Holds(const State& state, const Literal& literal) {
  return state.Contains(literal.atom) == literal.positive;
}

bool Holds(const PlanningProblem& problem, const State& state,
           const Literal& literal) {
  problem.CheckAtom(literal.atom);
  return Holds(state, literal);
}

bool Holds(const State& state, const Goal& goal) {
  return std::all_of(
      goal.requirements.begin(), goal.requirements.end(),
      [&state](const Literal& literal) { return Holds(state, literal); });
}

bool Applicable(const State& state, const GroundAction& action) {
  return std::includes(state.begin(), state.end(), action.pre.begin(),
                       action.pre.end());
}

AtomSet MissingPreconditions(const State& state, const GroundAction& action) {
  AtomSet missing;
  std::set_difference(action.pre.begin(), action.pre.end(), state.begin(),
                      state.end(), std::inserter(missing, missing.end()));
  return missing;
}

NotApplicableError::NotApplicableError(const GroundAction& action,
                                       AtomSet missing)
    : Error("action " + action.ToString() +
            " is not applicable: missing " + JoinAtoms(missing)),
      action_(action.ToString()),
      missing_(std::move(missing)) {}

State Transition(const State& state, const GroundAction& action) {
  AtomSet missing = MissingPreconditions(state, action);
  if (!missing.empty()) throw NotApplicableError(action, std::move(missing));
  AtomSet atoms = state.atoms();
  for (const Atom& atom : action.del) atoms.erase(atom);
  atoms.insert(action.add.begin(), action.add.end());
  return State(std::move(atoms));
}

std::string ConsistencyViolation::ToString() const {
  switch (clause) {
    case 1:
      return "clause 1: " + action + " is not applicable (missing " +
             JoinAtoms(atoms) + ")";
    case 2:
      return "clause 2: " + action + " adds " + JoinAtoms(atoms) +
             " which " + other + " deletes";
    case 3:
      return "clause 3: " + action + " deletes " + JoinAtoms(atoms) +
             " which " + other + " requires";
    default:
      return "clause " + std::to_string(clause);
  }
}

ConsistencyReport CheckConcurrent(const State& state,
                                  std::span<const GroundAction> actions) {
  if (actions.size() < 2) {
    throw PreconditionError("concurrent execution needs at least two actions");
  }
  ConsistencyReport report;
  for (const GroundAction& action : actions) {
    AtomSet missing = MissingPreconditions(state, action);
    if (!missing.empty()) {
      report.violations.push_back({1, action.ToString(), "", std::move(missing)});
    }
  }
  for (std::size_t i = 0; i < actions.size(); ++i) {
    for (std::size_t j = 0; j < actions.size(); ++j) {
      if (i == j) continue;
      AtomSet clobbered = Intersect(actions[i].add, actions[j].del);
      if (!clobbered.empty()) {
        report.violations.push_back({2, actions[i].ToString(),
                                     actions[j].ToString(),
                                     std::move(clobbered)});
      }
    }
  }
  for (std::size_t i = 0; i < actions.size(); ++i) {
    for (std::size_t j = 0; j < actions.size(); ++j) {
      if (i == j) continue;
      AtomSet undermined = Intersect(actions[i].del, actions[j].pre);
      if (!undermined.empty()) {
        report.violations.push_back({3, actions[i].ToString(),
                                     actions[j].ToString(),
                                     std::move(undermined)});
      }
    }
  }
  report.consistent = report.violations.empty();
  return report;
}

namespace {

std::string DescribeStepFailure(std::size_t index, const std::string& step,
                                const AtomSet& missing,
                                const std::vector<ConsistencyViolation>& v) {
  std::ostringstream ss;
  ss << "step " << index << " (" << step << ") cannot be executed";
  if (!missing.empty()) ss << ": missing " << JoinAtoms(missing);
  for (const ConsistencyViolation& violation : v) {
    ss << "; " << violation.ToString();
  }
  return ss.str();
}

}  // namespace

StepError::StepError(std::size_t step_index, std::string step, AtomSet missing,
                     std::vector<ConsistencyViolation> violations)
    : Error(DescribeStepFailure(step_index, step, missing, violations)),
      step_index_(step_index),
      step_(std::move(step)),
      missing_(std::move(missing)),
      violations_(std::move(violations)) {}

State TransitionStep(const State& state, const PlanStep& step,
                     std::size_t step_index) {
  if (!step.concurrent()) {
    AtomSet missing = MissingPreconditions(state, step.action());
    if (!missing.empty()) {
      throw StepError(step_index, step.ToString(), std::move(missing), {});
    }
    return Transition(state, step.action());
  }

  ConsistencyReport report = CheckConcurrent(state, step.actions());
  if (!report.consistent) {
    AtomSet missing;
    for (const ConsistencyViolation& v : report.violations) {
      if (v.clause == 1) missing.insert(v.atoms.begin(), v.atoms.end());
    }
    throw StepError(step_index, step.ToString(), std::move(missing),
                    std::move(report.violations));
  }

  State sequential = state;
  AtomSet deleted;
  AtomSet added;
  for (const GroundAction& action : step.actions()) {
    sequential = Transition(sequential, action);
    deleted.insert(action.del.begin(), action.del.end());
    added.insert(action.add.begin(), action.add.end());
  }
  AtomSet joint = state.atoms();
  for (const Atom& atom : deleted) joint.erase(atom);
  joint.insert(added.begin(), added.end());
  if (sequential.atoms() != joint) {
    throw std::logic_error("concurrent step " + step.ToString() +
                           " is order dependent despite passing the "
                           "consistency check");
  }
  return sequential;
}

RunResult RunPlan(const PlanningProblem& problem, const Plan& plan) {
  RunResult result;
  result.trace.states.push_back(problem.initial);
  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    const PlanStep& step = plan.steps[i];
    try {
      State next = TransitionStep(result.trace.states.back(), step, i);
      StepRecord record{step, {}, {}};
      for (const GroundAction& action : step.actions()) {
        record.deleted.insert(action.del.begin(), action.del.end());
        record.added.insert(action.add.begin(), action.add.end());
      }
      result.trace.states.push_back(std::move(next));
      result.trace.steps.push_back(std::move(record));
    } catch (const StepError& e) {
      result.failure = StepFailure{e.step_index(), e.step(), e.missing(),
                                   e.violations(), e.what()};
      break;
    }
  }
  return result;
}

namespace {

bool GoalsConsistent(const std::vector<Goal>& goals) {
  std::set<Literal> seen;
  for (const Goal& goal : goals) {
    seen.insert(goal.requirements.begin(), goal.requirements.end());
  }
  for (const Literal& literal : seen) {
    if (literal.positive && seen.count(Literal{literal.atom, false}) > 0) {
      return false;
    }
  }
  return true;
}

}  // namespace

SolutionVerdict CheckSolution(const PlanningProblem& problem,
                              const Plan& plan) {
  SolutionVerdict verdict;
  RunResult run = RunPlan(problem, plan);

  // 1: the trace starts in exactly the initial state over declared atoms.
  try {
    for (const Atom& atom : problem.initial) problem.CheckAtom(atom);
    if (run.trace.states.front() != problem.initial) {
      verdict.failures.push_back(
          {1, std::nullopt, std::nullopt, {},
           "the first state of the trace differs from the initial state"});
    }
  } catch (const VocabularyError& e) {
    verdict.failures.push_back({1, std::nullopt, std::nullopt, {}, e.what()});
  }

  // 2: every step is executable in the state where it is applied.
  if (run.failure) {
    verdict.failures.push_back({2, run.failure->step_index, std::nullopt,
                                run.failure->missing, run.failure->message});
    verdict.failures.push_back(
        {3, std::nullopt, std::nullopt, {},
         "the final state is undefined because step " +
             std::to_string(run.failure->step_index) + " cannot be executed"});
    verdict.failures.push_back(
        {4, std::nullopt, std::nullopt, {},
         "no goals are satisfied by a plan that cannot be executed"});
    return verdict;
  }

  // 3: the final state satisfies every goal.
  const State& final_state = run.trace.final_state();
  for (const Goal& goal : problem.goals) {
    if (Holds(final_state, goal)) {
      verdict.satisfied_goals.push_back(goal);
      continue;
    }
    AtomSet missing;
    for (const Literal& literal : goal.requirements) {
      if (!Holds(final_state, literal)) missing.insert(literal.atom);
    }
    verdict.failures.push_back({3, std::nullopt, goal, std::move(missing),
                                "goal " + goal.ToString() +
                                    " does not hold in the final state"});
  }

  // 4: the satisfied goals are a nonempty, consistent set.
  if (verdict.satisfied_goals.empty()) {
    verdict.failures.push_back(
        {4, std::nullopt, std::nullopt, {}, "the plan satisfies no goal"});
  } else if (!GoalsConsistent(verdict.satisfied_goals)) {
    verdict.failures.push_back(
        {4, std::nullopt, std::nullopt, {},
         "the satisfied goals require complementary literals"});
  }

  verdict.is_solution = verdict.failures.empty();
  return verdict;
}

Achievement AchievedGoals(const PlanningProblem& problem, const Trace& trace,
                          std::size_t step_index) {
  if (step_index >= trace.steps.size()) {
    throw PreconditionError("step index " + std::to_string(step_index) +
                            " is outside the trace");
  }
  const StepRecord& record = trace.steps[step_index];
  const State& after = trace.states[step_index + 1];

  Achievement result;
  for (const Goal& goal : problem.goals) {
    std::size_t established = 0;
    for (const Literal& literal : goal.requirements) {
      const AtomSet& effect = literal.positive ? record.added : record.deleted;
      if (effect.count(literal.atom) > 0) ++established;
    }
    if (established == 0) continue;
    if (established == goal.requirements.size() && Holds(after, goal)) {
      result.direct.push_back(goal);
    } else {
      result.partial.push_back(goal);
    }
  }

  for (const Atom& atom : record.added) {
    for (std::size_t j = step_index + 1; j < trace.steps.size(); ++j) {
      if (!trace.states[j].Contains(atom)) break;
      for (const GroundAction& consumer : trace.steps[j].step.actions()) {
        if (consumer.pre.count(atom) > 0) {
          result.links.push_back({atom, j, consumer});
        }
      }
      if (trace.steps[j].deleted.count(atom) > 0) break;
    }
  }
  return result;
}

FeasibilityResult GoalFeasible(const PlanningProblem& problem,
                               const Goal& goal, std::size_t bound,
                               std::size_t budget) {
  for (const Literal& literal : goal.requirements) {
    problem.CheckAtom(literal.atom);
  }
  FeasibilityResult result;
  if (Holds(problem.initial, goal)) {
    result.status = Feasibility::kFeasible;
    result.depth = 0;
    return result;
  }

  std::set<State> visited{problem.initial};
  std::vector<State> frontier{problem.initial};
  for (std::size_t depth = 1; depth <= bound && !frontier.empty(); ++depth) {
    std::vector<State> next;
    for (const State& state : frontier) {
      if (++result.expanded > budget) {
        result.status = Feasibility::kBudgetExceeded;
        return result;
      }
      for (const GroundAction& action : problem.ground_actions) {
        if (!Applicable(state, action)) continue;
        State successor = Transition(state, action);
        if (Holds(successor, goal)) {
          result.status = Feasibility::kFeasible;
          result.depth = depth;
          return result;
        }
        if (visited.insert(successor).second) {
          next.push_back(std::move(successor));
        }
      }
    }
    frontier = std::move(next);
  }
  result.status = Feasibility::kUnreachable;
  return result;
}

}  // namespace xplain
