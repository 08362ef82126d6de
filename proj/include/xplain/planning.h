#ifndef XPLAIN_PLANNING_H_
#define XPLAIN_PLANNING_H_

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "xplain/errors.h"

namespace xplain {

/// A predicate symbol applied to object constants, e.g. ON(A,B).
///
/// Inside action templates the arguments may be variables ("?X"); everywhere
/// else they are constants. Ordering is by predicate name, then arguments,
/// which is the iteration order of every atom set in the library.
struct Atom {
  std::string predicate;
  std::vector<std::string> args;

  auto operator<=>(const Atom&) const = default;
  bool operator==(const Atom&) const = default;

  std::string ToString() const;
};

using AtomSet = std::set<Atom>;

struct Literal {
  Atom atom;
  bool positive = true;

  auto operator<=>(const Literal&) const = default;
  bool operator==(const Literal&) const = default;

  std::string ToString() const;
};

/// Closed-world state: the stored atoms are true, every other atom is false.
class State {
 public:
  State() = default;
  explicit State(AtomSet atoms) : atoms_(std::move(atoms)) {}

  bool Contains(const Atom& atom) const { return atoms_.count(atom) > 0; }
  const AtomSet& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }
  AtomSet::const_iterator begin() const { return atoms_.begin(); }
  AtomSet::const_iterator end() const { return atoms_.end(); }

  bool operator==(const State&) const = default;
  auto operator<=>(const State&) const = default;

  /// Atoms joined with " ∧ " in lexicographic order; "∅" when empty.
  std::string ToString() const;

 private:
  AtomSet atoms_;
};

/// A fully instantiated STRIPS operator. The add and delete sets are disjoint.
struct GroundAction {
  std::string name;
  std::vector<std::string> args;
  AtomSet pre;
  AtomSet add;
  AtomSet del;

  auto operator<=>(const GroundAction&) const = default;
  bool operator==(const GroundAction&) const = default;

  /// NAME(ARG,...), or NAME for nullary actions.
  std::string ToString() const;
};

/// One element of a plan: a single action or a set of >= 2 concurrent ones.
///
/// Concurrent actions are kept sorted so the "last" action of a set is always
/// the lexicographically greatest.
class PlanStep {
 public:
  static PlanStep Single(GroundAction action);
  /// Throws PreconditionError for fewer than two or duplicated actions.
  static PlanStep Concurrent(std::vector<GroundAction> actions);

  bool concurrent() const { return actions_.size() > 1; }
  const std::vector<GroundAction>& actions() const { return actions_; }
  const GroundAction& action() const { return actions_.front(); }

  bool operator==(const PlanStep&) const = default;

  /// UNSTACK(A,B) for a single step, (STACK(C,A), STACK(D,B)) for a set.
  std::string ToString() const;

 private:
  std::vector<GroundAction> actions_;
};

struct Plan {
  std::vector<PlanStep> steps;

  bool operator==(const Plan&) const = default;

  /// ⟨UNSTACK(A,B), ..., (STACK(C,A), STACK(D,B))⟩
  std::string ToString() const;
};

/// A nonempty set of ground literals that must all hold.
struct Goal {
  std::set<Literal> requirements;

  static Goal Of(Atom atom);

  auto operator<=>(const Goal&) const = default;
  bool operator==(const Goal&) const = default;

  std::string ToString() const;
};

struct PredicateDecl {
  std::string name;
  /// One type name per argument position ("OBJECT" when untyped).
  std::vector<std::string> types;

  std::size_t arity() const { return types.size(); }
  bool operator==(const PredicateDecl&) const = default;
};

struct Parameter {
  std::string name;  // including the leading '?'
  std::string type;

  bool operator==(const Parameter&) const = default;
};

/// Lifted action schema as written in the domain file.
struct ActionTemplate {
  std::string name;
  std::vector<Parameter> parameters;
  std::vector<Atom> precondition;
  std::vector<Atom> add;
  std::vector<Atom> del;

  bool operator==(const ActionTemplate&) const = default;
};

/// The planning problem: objects, predicates, initial and goal states,
/// goals, and the ground actions obtained from the lifted templates.
struct PlanningProblem {
  std::string name;
  std::string domain_name;
  std::map<std::string, std::string> objects;  // constant -> type
  std::map<std::string, PredicateDecl> predicates;
  State initial;
  AtomSet goal_state;
  std::vector<Goal> goals;
  std::vector<ActionTemplate> templates;
  std::vector<GroundAction> ground_actions;  // sorted

  /// Throws VocabularyError unless `atom` is well formed over the vocabulary.
  void CheckAtom(const Atom& atom) const;
  /// Ground action with the given name and arguments, or nullptr.
  const GroundAction* FindAction(const std::string& name,
                                 const std::vector<std::string>& args) const;
};

// ---------------------------------------------------------------------------
// State semantics
// ---------------------------------------------------------------------------

bool Holds(const State& state, const Literal& literal);
/// Same as above after checking `literal` against the problem vocabulary.
bool Holds(const PlanningProblem& problem, const State& state,
           const Literal& literal);
bool Holds(const State& state, const Goal& goal);

bool Applicable(const State& state, const GroundAction& action);
AtomSet MissingPreconditions(const State& state, const GroundAction& action);

/// The transition function is undefined when `action` is not applicable.
class NotApplicableError : public Error {
 public:
  NotApplicableError(const GroundAction& action, AtomSet missing);

  const std::string& action() const { return action_; }
  const AtomSet& missing() const { return missing_; }

 private:
  std::string action_;
  AtomSet missing_;
};

/// (state \ del) ∪ add. Throws NotApplicableError naming the missing atoms.
State Transition(const State& state, const GroundAction& action);

/// One violated clause of the concurrent-execution conditions:
///   1. `action` is not applicable in the state (`atoms` are missing),
///   2. `action` adds `atoms` that `other` deletes,
///   3. `action` deletes `atoms` that `other` requires.
struct ConsistencyViolation {
  int clause = 0;
  std::string action;
  std::string other;
  AtomSet atoms;

  bool operator==(const ConsistencyViolation&) const = default;
  std::string ToString() const;
};

struct ConsistencyReport {
  bool consistent = true;
  std::vector<ConsistencyViolation> violations;
};

/// Requires at least two actions (PreconditionError otherwise).
ConsistencyReport CheckConcurrent(const State& state,
                                  std::span<const GroundAction> actions);

/// A plan step could not be executed.
class StepError : public Error {
 public:
  StepError(std::size_t step_index, std::string step, AtomSet missing,
            std::vector<ConsistencyViolation> violations);

  std::size_t step_index() const { return step_index_; }
  const std::string& step() const { return step_; }
  const AtomSet& missing() const { return missing_; }
  const std::vector<ConsistencyViolation>& violations() const {
    return violations_;
  }

 private:
  std::size_t step_index_;
  std::string step_;
  AtomSet missing_;
  std::vector<ConsistencyViolation> violations_;
};

/// Applies a single or concurrent step. Concurrent sets are checked for
/// consistency and then applied in sorted order; the result is verified to be
/// independent of the order. `step_index` is only used for error reporting.
State TransitionStep(const State& state, const PlanStep& step,
                     std::size_t step_index = 0);

// ---------------------------------------------------------------------------
// Plans
// ---------------------------------------------------------------------------

struct StepRecord {
  PlanStep step;
  AtomSet deleted;  // union of the delete sets of the step's actions
  AtomSet added;    // union of the add sets

  bool operator==(const StepRecord&) const = default;
};

/// states[0] is the initial state and states[i + 1] results from steps[i].
struct Trace {
  std::vector<State> states;
  std::vector<StepRecord> steps;

  bool operator==(const Trace&) const = default;
  const State& final_state() const { return states.back(); }
};

struct StepFailure {
  std::size_t step_index = 0;
  std::string step;
  AtomSet missing;
  std::vector<ConsistencyViolation> violations;
  std::string message;
};

struct RunResult {
  Trace trace;  // partial when `failure` is set
  std::optional<StepFailure> failure;

  bool ok() const { return !failure.has_value(); }
};

/// Executes `plan` from the initial state, stopping at the first failure.
RunResult RunPlan(const PlanningProblem& problem, const Plan& plan);

struct VerdictFailure {
  int condition = 0;  // 1..4
  std::optional<std::size_t> step;
  std::optional<Goal> goal;
  AtomSet missing;
  std::string explanation;
};

struct SolutionVerdict {
  bool is_solution = false;
  std::vector<VerdictFailure> failures;
  std::vector<Goal> satisfied_goals;
};

/// Evaluates the four solution conditions:
///   1. the trace starts in the initial state,
///   2. every step is executable where it is applied,
///   3. the final state satisfies every goal,
///   4. the satisfied goals form a nonempty, consistent set.
SolutionVerdict CheckSolution(const PlanningProblem& problem, const Plan& plan);

/// An atom added by one step and required by a later one.
struct CausalLink {
  Atom atom;
  std::size_t consumer_step = 0;
  GroundAction consumer;

  bool operator==(const CausalLink&) const = default;
};

struct Achievement {
  /// Goals whose requirements are all established by the step and hold after it.
  std::vector<Goal> direct;
  /// Multi-requirement goals the step only partly establishes.
  std::vector<Goal> partial;
  std::vector<CausalLink> links;
};

Achievement AchievedGoals(const PlanningProblem& problem, const Trace& trace,
                          std::size_t step_index);

enum class Feasibility { kFeasible, kUnreachable, kBudgetExceeded };

struct FeasibilityResult {
  Feasibility status = Feasibility::kUnreachable;
  std::size_t expanded = 0;
  std::optional<std::size_t> depth;  // plan length reaching the goal

  bool feasible() const { return status == Feasibility::kFeasible; }
};

inline constexpr std::size_t kDefaultSearchBudget = 200000;

/// Breadth-first search over sequential actions from the initial state.
/// `budget` caps the number of expanded states.
FeasibilityResult GoalFeasible(const PlanningProblem& problem, const Goal& goal,
                               std::size_t bound,
                               std::size_t budget = kDefaultSearchBudget);

/// " ∧ "-joined atoms, "∅" when empty.
std::string JoinAtoms(const AtomSet& atoms);
std::string JoinGoals(const std::vector<Goal>& goals);

}  // namespace xplain

#endif  // XPLAIN_PLANNING_H_
