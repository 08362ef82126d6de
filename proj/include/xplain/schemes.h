#ifndef XPLAIN_SCHEMES_H_
#define XPLAIN_SCHEMES_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xplain/planning.h"

namespace xplain {

/// The five argument schemes. Premise counts are fixed per scheme:
/// action 4, concurrent action 5, state transition 1, goal 2, plan summary 3.
enum class SchemeKind {
  kAction,
  kConcurrentAction,
  kStateTransition,
  kGoal,
  kPlanSummary,
};

enum class PremiseKind { kHold, kTransition, kAchieve, kAchieveSet };

enum class ConclusionKind { kExecute, kExecuteC, kStateTrue, kAchieve, kSolution };

/// Why an action is cited for a goal.
enum class AchieveLabel {
  kDirect,     // the step establishes every requirement of the goal
  kEnabling,   // the step establishes a precondition of a later step
  kPreserved,  // the goal holds after the step, which does not establish it
};

std::string_view SchemeName(SchemeKind kind);      // "Arg_a", "Arg_pi", ...
std::string_view SchemeTitle(SchemeKind kind);     // "action argument", ...
std::string_view PremiseKindName(PremiseKind kind);
std::string_view ConclusionKindName(ConclusionKind kind);
std::string_view AchieveLabelName(AchieveLabel label);

/// A state mentioned by an argument. Intermediate states inside a concurrent
/// step have no trace index.
struct StateRef {
  std::optional<std::size_t> trace_index;
  State state;

  bool operator==(const StateRef&) const = default;
};

/// Hold(X, S): every atom and goal in X is true in S.
struct HoldClaim {
  AtomSet atoms;
  std::vector<Goal> goals;
  std::optional<GroundAction> precondition_of;  // atoms == pre(action)
  StateRef state;

  bool operator==(const HoldClaim&) const = default;
};

/// γ(from, actions) = to, with the applied delete and add sets.
struct TransitionClaim {
  StateRef from;
  std::vector<GroundAction> actions;
  StateRef to;
  AtomSet deleted;
  AtomSet added;
  std::optional<std::size_t> step_index;
  /// True when `actions` is the whole plan step, so from/to are trace states.
  bool whole_step = true;

  bool operator==(const TransitionClaim&) const = default;
};

/// Achieve(a, g) or Achieve(π, G).
struct AchieveClaim {
  std::vector<GroundAction> actions;
  bool by_plan = false;
  std::vector<Goal> goals;
  AchieveLabel label = AchieveLabel::kDirect;
  std::vector<CausalLink> links;  // populated for enabling justifications

  bool operator==(const AchieveClaim&) const = default;
};

struct Premise {
  int index = 0;  // 1-based
  PremiseKind kind = PremiseKind::kHold;
  std::vector<HoldClaim> holds;
  std::vector<TransitionClaim> transitions;
  std::optional<AchieveClaim> achieve;
  std::string formal;
  std::string text;

  bool operator==(const Premise&) const = default;
};

struct Conclusion {
  ConclusionKind kind = ConclusionKind::kExecute;
  std::vector<GroundAction> actions;
  std::optional<StateRef> state;
  std::vector<Goal> goals;
  std::string formal;
  std::string text;

  bool operator==(const Conclusion&) const = default;
};

enum class SubjectKind { kPlan, kStep, kState, kGoal };

struct Subject {
  SubjectKind kind = SubjectKind::kPlan;
  std::size_t index = 0;  // step or state index
  std::optional<Goal> goal;

  bool operator==(const Subject&) const = default;
};

struct Argument {
  std::string id;
  SchemeKind scheme = SchemeKind::kPlanSummary;
  Subject subject;
  std::vector<Premise> premises;
  Conclusion conclusion;
  /// Set for the "true by the initial state" and "holds initially" answers,
  /// which have a conclusion but no premises.
  bool degenerate = false;

  bool operator==(const Argument&) const = default;
};

std::size_t PremiseCount(SchemeKind kind);

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// State 0 needs no transition: it is true by the initial state.
class InitialStateError : public ExplanationError {
 public:
  InitialStateError()
      : ExplanationError("state 0 is true by the initial state") {}
};

/// The goal is true initially and no step re-establishes it.
class HoldsInitiallyError : public ExplanationError {
 public:
  explicit HoldsInitiallyError(const Goal& goal)
      : ExplanationError("goal " + goal.ToString() +
                         " holds in the initial state and is never "
                         "re-established by the plan") {}
};

/// No step of the trace makes the goal true.
class NoAchieverError : public ExplanationError {
 public:
  NoAchieverError(const Goal& goal, std::size_t nearest_state, AtomSet missing,
                  FeasibilityResult feasibility);

  std::size_t nearest_state() const { return nearest_state_; }
  const AtomSet& missing() const { return missing_; }
  const FeasibilityResult& feasibility() const { return feasibility_; }

 private:
  std::size_t nearest_state_;
  AtomSet missing_;
  FeasibilityResult feasibility_;
};

/// The plan summary scheme only applies to solutions.
class NotASolutionError : public ExplanationError {
 public:
  explicit NotASolutionError(SolutionVerdict verdict);

  const SolutionVerdict& verdict() const { return verdict_; }

 private:
  SolutionVerdict verdict_;
};

// ---------------------------------------------------------------------------
// Builders. `trace` must come from a successful RunPlan of `problem`.
// ---------------------------------------------------------------------------

/// Explains a single-action step. Without `goal`, cites the first goal the
/// step achieves directly, or falls back to the causal links it supplies to
/// later steps.
Argument BuildActionArgument(const PlanningProblem& problem, const Trace& trace,
                             std::size_t step_index,
                             const std::optional<Goal>& goal = std::nullopt);

/// Explains a concurrent step. Its goal set is every goal that holds after the
/// step but not before it.
Argument BuildConcurrentArgument(const PlanningProblem& problem,
                                 const Trace& trace, std::size_t step_index);

/// Explains how state `state_index` (>= 1) arises from its predecessor.
/// Throws InitialStateError for state 0.
Argument BuildStateArgument(const Trace& trace, std::size_t state_index);

/// Degenerate answer for state 0.
Argument InitialStateArgument(const Trace& trace);

/// Cites the earliest step after which `goal` becomes true. When no step does,
/// throws HoldsInitiallyError or NoAchieverError (the latter reports whether
/// the goal is reachable at all within `feasibility_bound` steps).
Argument BuildGoalArgument(const PlanningProblem& problem, const Trace& trace,
                           const Goal& goal,
                           std::size_t feasibility_bound = 10);

/// Degenerate answer for a goal that is true from the start.
Argument HoldsInitiallyArgument(const Trace& trace, const Goal& goal);

/// Throws NotASolutionError carrying the verdict when `plan` is not a solution.
Argument BuildPlanSummaryArgument(const PlanningProblem& problem,
                                  const Plan& plan);

/// Deterministic English rendering, premise by premise.
std::string RenderText(const Argument& argument);

/// Re-evaluates every claim of `argument` against the trace; returns the
/// 1-based indices of false premises (0 stands for the conclusion).
std::vector<int> UnsoundPremises(const PlanningProblem& problem,
                                 const Trace& trace, const Argument& argument);

/// URL-safe slug of a goal, e.g. "on-c-a".
std::string GoalSlug(const Goal& goal);

}  // namespace xplain

#endif  // XPLAIN_SCHEMES_H_
