#include "xplain/schemes.h"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace xplain {

std::string_view SchemeName(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::kAction: return "Arg_a";
    case SchemeKind::kConcurrentAction: return "Arg_ac";
    case SchemeKind::kStateTransition: return "Arg_S";
    case SchemeKind::kGoal: return "Arg_g";
    case SchemeKind::kPlanSummary: return "Arg_pi";
  }
  return "?";
}

std::string_view SchemeTitle(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::kAction: return "action argument";
    case SchemeKind::kConcurrentAction: return "concurrent action argument";
    case SchemeKind::kStateTransition: return "state transition argument";
    case SchemeKind::kGoal: return "goal argument";
    case SchemeKind::kPlanSummary: return "plan summary argument";
  }
  return "?";
}

std::string_view PremiseKindName(PremiseKind kind) {
  switch (kind) {
    case PremiseKind::kHold: return "Hold";
    case PremiseKind::kTransition: return "Transition";
    case PremiseKind::kAchieve: return "Achieve";
    case PremiseKind::kAchieveSet: return "AchieveSet";
  }
  return "?";
}

std::string_view ConclusionKindName(ConclusionKind kind) {
  switch (kind) {
    case ConclusionKind::kExecute: return "Execute";
    case ConclusionKind::kExecuteC: return "ExecuteC";
    case ConclusionKind::kStateTrue: return "StateTrue";
    case ConclusionKind::kAchieve: return "Achieve";
    case ConclusionKind::kSolution: return "Solution";
  }
  return "?";
}

std::string_view AchieveLabelName(AchieveLabel label) {
  switch (label) {
    case AchieveLabel::kDirect: return "direct";
    case AchieveLabel::kEnabling: return "enabling";
    case AchieveLabel::kPreserved: return "preserved";
  }
  return "?";
}

std::size_t PremiseCount(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::kAction: return 4;
    case SchemeKind::kConcurrentAction: return 5;
    case SchemeKind::kStateTransition: return 1;
    case SchemeKind::kGoal: return 2;
    case SchemeKind::kPlanSummary: return 3;
  }
  return 0;
}

NoAchieverError::NoAchieverError(const Goal& goal, std::size_t nearest_state,
                                 AtomSet missing, FeasibilityResult feasibility)
    : ExplanationError(
          "no step of the plan achieves goal " + goal.ToString() +
          "; nearest is state " + std::to_string(nearest_state) +
          ", missing " + JoinAtoms(missing) +
          (feasibility.status == Feasibility::kFeasible
               ? " (the goal is feasible)"
               : feasibility.status == Feasibility::kUnreachable
                     ? " (the goal is unreachable within the search bound)"
                     : " (feasibility search budget exceeded)")),
      nearest_state_(nearest_state),
      missing_(std::move(missing)),
      feasibility_(feasibility) {}

namespace {

std::string DescribeVerdict(const SolutionVerdict& verdict) {
  std::string out = "the plan is not a solution";
  for (const VerdictFailure& f : verdict.failures) {
    out += "; condition " + std::to_string(f.condition) + ": " + f.explanation;
  }
  return out;
}

}  // namespace

NotASolutionError::NotASolutionError(SolutionVerdict verdict)
    : ExplanationError(DescribeVerdict(verdict)), verdict_(std::move(verdict)) {}

std::string GoalSlug(const Goal& goal) {
  std::string out;
  for (const Literal& literal : goal.requirements) {
    if (!out.empty()) out += "_";
    if (!literal.positive) out += "not-";
    std::string part = literal.atom.predicate;
    for (const std::string& arg : literal.atom.args) part += "-" + arg;
    for (char c : part) {
      out += std::isalnum(static_cast<unsigned char>(c))
                 ? static_cast<char>(std::tolower(static_cast<unsigned char>(c)))
                 : '-';
    }
  }
  return out;
}

namespace {

StateRef Ref(const Trace& trace, std::size_t index) {
  return StateRef{index, trace.states.at(index)};
}

std::string ActionSet(const std::vector<GroundAction>& actions) {
  std::string out = "{";
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (i > 0) out += ", ";
    out += actions[i].ToString();
  }
  return out + "}";
}

std::string AtomBraces(const AtomSet& atoms) {
  std::string out = "{";
  for (const Atom& atom : atoms) {
    if (out.size() > 1) out += ", ";
    out += atom.ToString();
  }
  return out + "}";
}

std::string GoalText(const std::vector<Goal>& goals) {
  return goals.size() == 1 ? goals.front().ToString() : JoinGoals(goals);
}

AtomSet UnionOf(const std::vector<GroundAction>& actions,
                AtomSet GroundAction::*field) {
  AtomSet out;
  for (const GroundAction& a : actions) {
    out.insert((a.*field).begin(), (a.*field).end());
  }
  return out;
}

bool EstablishesSome(const AtomSet& added, const AtomSet& deleted, const Goal& goal) {
  for (const Literal& literal : goal.requirements) {
    if ((literal.positive ? added : deleted).count(literal.atom) > 0) return true;
  }
  return false;
}

TransitionClaim WholeStep(const Trace& trace, std::size_t step) {
  const StepRecord& record = trace.steps.at(step);
  TransitionClaim claim;
  claim.from = Ref(trace, step);
  claim.actions = record.step.actions();
  claim.to = Ref(trace, step + 1);
  claim.deleted = record.deleted;
  claim.added = record.added;
  claim.step_index = step;
  claim.whole_step = true;
  return claim;
}

HoldClaim HoldPre(const GroundAction& action, StateRef state) {
  HoldClaim hold;
  hold.atoms = action.pre;
  hold.precondition_of = action;
  hold.state = std::move(state);
  return hold;
}

HoldClaim HoldGoals(std::vector<Goal> goals, StateRef state) {
  HoldClaim hold;
  hold.goals = std::move(goals);
  hold.state = std::move(state);
  return hold;
}

void CheckStep(const Trace& trace, std::size_t step) {
  if (step >= trace.steps.size()) {
    throw PreconditionError("step " + std::to_string(step) +
                            " is outside the plan (" +
                            std::to_string(trace.steps.size()) + " steps)");
  }
}

std::string DescribeLinks(const std::vector<CausalLink>& links) {
  std::string out;
  for (const CausalLink& link : links) {
    if (!out.empty()) out += "; ";
    out += "it establishes " + link.atom.ToString() + ", a precondition of " +
           link.consumer.ToString() + " at step " +
           std::to_string(link.consumer_step);
  }
  return out;
}

std::vector<Goal> LinkGoals(const std::vector<CausalLink>& links) {
  std::vector<Goal> goals;
  for (const CausalLink& link : links) {
    Goal goal = Goal::Of(link.atom);
    if (std::find(goals.begin(), goals.end(), goal) == goals.end()) {
      goals.push_back(std::move(goal));
    }
  }
  std::sort(goals.begin(), goals.end());
  return goals;
}

}  // namespace

Argument BuildActionArgument(const PlanningProblem& problem, const Trace& trace,
                             std::size_t step_index,
                             const std::optional<Goal>& goal) {
  CheckStep(trace, step_index);
  const StepRecord& record = trace.steps[step_index];
  if (record.step.concurrent()) {
    throw WrongSchemeError("step " + std::to_string(step_index) +
                           " is concurrent; use the concurrent action scheme");
  }
  const GroundAction& action = record.step.action();
  const StateRef s1 = Ref(trace, step_index);
  const StateRef s2 = Ref(trace, step_index + 1);
  const Achievement achievement = AchievedGoals(problem, trace, step_index);

  AchieveClaim achieve;
  achieve.actions = {action};
  std::string id = "a" + std::to_string(step_index);
  if (goal) {
    if (!Holds(s2.state, *goal)) {
      throw ExplanationError("goal " + goal->ToString() +
                             " does not hold after step " +
                             std::to_string(step_index));
    }
    achieve.goals = {*goal};
    if (std::find(achievement.direct.begin(), achievement.direct.end(),
                  *goal) != achievement.direct.end()) {
      achieve.label = AchieveLabel::kDirect;
    } else {
      for (const CausalLink& link : achievement.links) {
        for (const Literal& literal : goal->requirements) {
          if (literal.positive && literal.atom == link.atom) {
            achieve.links.push_back(link);
          }
        }
      }
      // A step that establishes only some requirements still enables the goal.
      const bool partial = EstablishesSome(trace.steps[step_index].added,
                                           trace.steps[step_index].deleted, *goal);
      achieve.label = achieve.links.empty() && !partial ? AchieveLabel::kPreserved
                                                        : AchieveLabel::kEnabling;
    }
    bool is_default = !achievement.direct.empty() &&
                      achievement.direct.front() == *goal;
    if (!is_default) id += "." + GoalSlug(*goal);
  } else if (!achievement.direct.empty()) {
    achieve.goals = {achievement.direct.front()};
    achieve.label = AchieveLabel::kDirect;
  } else if (!achievement.links.empty()) {
    achieve.goals = LinkGoals(achievement.links);
    achieve.links = achievement.links;
    achieve.label = AchieveLabel::kEnabling;
  } else {
    throw ExplanationError("action " + action.ToString() + " at step " +
                           std::to_string(step_index) +
                           " neither achieves a goal nor enables a later step");
  }

  const std::string a = action.ToString();
  const std::string g = GoalText(achieve.goals);
  Argument arg;
  arg.id = id;
  arg.scheme = SchemeKind::kAction;
  arg.subject = {SubjectKind::kStep, step_index, std::nullopt};

  Premise p1;
  p1.index = 1;
  p1.kind = PremiseKind::kHold;
  p1.holds = {HoldPre(action, s1)};
  p1.formal = "Hold(" + JoinAtoms(action.pre) + ", " + s1.state.ToString() + ")";
  p1.text = "In the current state " + s1.state.ToString() +
            ", the pre-condition " + JoinAtoms(action.pre) + " of action " + a +
            " holds.";

  Premise p2;
  p2.index = 2;
  p2.kind = PremiseKind::kTransition;
  p2.transitions = {WholeStep(trace, step_index)};
  p2.formal = "γ(" + s1.state.ToString() + ", " + a + ") = " + s2.state.ToString();
  p2.text = "When we execute action " + a + " in the current state " +
            s1.state.ToString() + ", it results in the next state " +
            s2.state.ToString() + ".";

  Premise p3;
  p3.index = 3;
  p3.kind = PremiseKind::kHold;
  p3.holds = {HoldGoals(achieve.goals, s2)};
  p3.formal = "Hold(" + g + ", " + s2.state.ToString() + ")";
  p3.text = "In the next state " + s2.state.ToString() +
            (achieve.label == AchieveLabel::kEnabling && !goal
                 ? ", the enabling condition "
                 : ", the goal ") +
            g + " holds.";

  Premise p4;
  p4.index = 4;
  p4.kind = PremiseKind::kAchieve;
  p4.formal = "Achieve(" + a + ", " + g + ")";
  switch (achieve.label) {
    case AchieveLabel::kDirect:
      p4.text = "Action " + a + " achieves goal " + g + ".";
      break;
    case AchieveLabel::kEnabling:
      p4.formal += " [enabling]";
      if (achieve.links.empty()) {
        p4.text = "Action " + a + " establishes part of goal " + g +
                  " (enabling justification).";
      } else {
        p4.text = "Action " + a + (goal ? " supports goal " + g + ": "
                                        : " achieves no goal directly; ") +
                  DescribeLinks(achieve.links) + " (enabling justification).";
      }
      break;
    case AchieveLabel::kPreserved:
      p4.formal += " [preserved]";
      p4.text = "Action " + a + " preserves goal " + g +
                ": the goal holds once the action is executed.";
      break;
  }
  p4.achieve = achieve;

  arg.premises = {p1, p2, p3, p4};
  arg.conclusion.kind = ConclusionKind::kExecute;
  arg.conclusion.actions = {action};
  arg.conclusion.state = s1;
  arg.conclusion.formal = "Execute(" + a + ", " + s1.state.ToString() + ")";
  arg.conclusion.text = "Therefore, we should execute action " + a +
                        " in the current state " + s1.state.ToString() + ".";
  return arg;
}

Argument BuildConcurrentArgument(const PlanningProblem& problem,
                                 const Trace& trace, std::size_t step_index) {
  CheckStep(trace, step_index);
  const StepRecord& record = trace.steps[step_index];
  if (!record.step.concurrent()) {
    throw WrongSchemeError("step " + std::to_string(step_index) +
                           " is a single action; use the action scheme");
  }
  const std::vector<GroundAction>& actions = record.step.actions();
  const StateRef s1 = Ref(trace, step_index);
  ConsistencyReport report = CheckConcurrent(s1.state, actions);
  if (!report.consistent) {
    std::string message = "concurrent step " + std::to_string(step_index) +
                          " is inconsistent";
    for (const ConsistencyViolation& v : report.violations) {
      message += "; " + v.ToString();
    }
    throw ExplanationError(message);
  }

  const std::string set = ActionSet(actions);
  Argument arg;
  arg.id = "ac" + std::to_string(step_index);
  arg.scheme = SchemeKind::kConcurrentAction;
  arg.subject = {SubjectKind::kStep, step_index, std::nullopt};

  Premise p1;
  p1.index = 1;
  p1.kind = PremiseKind::kHold;
  p1.text = "In the current state " + s1.state.ToString();
  for (std::size_t i = 0; i < actions.size(); ++i) {
    p1.holds.push_back(HoldPre(actions[i], s1));
    if (i > 0) p1.formal += " ∧ ";
    p1.formal += "Hold(" + JoinAtoms(actions[i].pre) + ", " +
                 s1.state.ToString() + ")";
    p1.text += (i == 0 ? ", the precondition " : " and the precondition ") +
               JoinAtoms(actions[i].pre) + " of action " +
               actions[i].ToString() + " holds";
  }
  p1.text += ".";

  // Ordered pairs (i, j), i != j, in lexicographic order of the sorted set.
  Premise p2;
  p2.index = 2;
  p2.kind = PremiseKind::kTransition;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    State after = Transition(s1.state, actions[i]);
    for (std::size_t j = 0; j < actions.size(); ++j) {
      if (i == j) continue;
      TransitionClaim step;
      step.from = s1;
      step.actions = {actions[i]};
      step.to = StateRef{std::nullopt, after};
      step.deleted = actions[i].del;
      step.added = actions[i].add;
      step.step_index = step_index;
      step.whole_step = false;
      p2.transitions.push_back(step);
      p2.holds.push_back(HoldPre(actions[j], StateRef{std::nullopt, after}));
      if (!p2.formal.empty()) p2.formal += " ∧ ";
      p2.formal += "(γ(" + s1.state.ToString() + ", " + actions[i].ToString() +
                   ") = " + after.ToString() + " ∧ Hold(" +
                   JoinAtoms(actions[j].pre) + ", " + after.ToString() + "))";
      if (!p2.text.empty()) p2.text += " ";
      p2.text += "When we execute the concurrent action " +
                 actions[i].ToString() + " in the state " +
                 s1.state.ToString() + ", it results in the next state " +
                 after.ToString() + ", and the precondition " +
                 JoinAtoms(actions[j].pre) + " of the other concurrent action " +
                 actions[j].ToString() + " holds in the next state " +
                 after.ToString() + ".";
    }
  }

  // The last action runs in the state left by all the others.
  State penultimate = s1.state;
  for (std::size_t i = 0; i + 1 < actions.size(); ++i) {
    penultimate = Transition(penultimate, actions[i]);
  }
  const GroundAction& last = actions.back();
  const StateRef sg = Ref(trace, step_index + 1);
  Premise p3;
  p3.index = 3;
  p3.kind = PremiseKind::kTransition;
  TransitionClaim final_step;
  final_step.from = StateRef{std::nullopt, penultimate};
  final_step.actions = {last};
  final_step.to = sg;
  final_step.deleted = last.del;
  final_step.added = last.add;
  final_step.step_index = step_index;
  final_step.whole_step = false;
  p3.transitions = {final_step};
  p3.formal = "γ(" + penultimate.ToString() + ", " + last.ToString() + ") = " +
              sg.state.ToString();
  p3.text = "When we execute the last concurrent action " + last.ToString() +
            " in the state " + penultimate.ToString() +
            ", it results in the next state " + sg.state.ToString() + ".";

  std::vector<Goal> goals;
  for (const Goal& goal : problem.goals) {
    if (Holds(sg.state, goal) && !Holds(s1.state, goal)) goals.push_back(goal);
  }
  const std::string gset = JoinGoals(goals);

  Premise p4;
  p4.index = 4;
  p4.kind = PremiseKind::kHold;
  p4.holds = {HoldGoals(goals, sg)};
  p4.formal = "Hold(" + gset + ", " + sg.state.ToString() + ")";
  p4.text = "In the next state " + sg.state.ToString() + ", the set of goals " +
            gset + " holds.";

  Premise p5;
  p5.index = 5;
  p5.kind = PremiseKind::kAchieveSet;
  AchieveClaim achieve;
  achieve.actions = actions;
  achieve.goals = goals;
  achieve.label = AchieveLabel::kDirect;
  p5.formal = "Achieve(" + set + ", " + gset + ")";
  p5.text = "The set of concurrent actions " + set +
            " achieves the set of goals " + gset + ".";
  if (goals.empty()) {
    achieve.label = AchieveLabel::kEnabling;
    achieve.links = AchievedGoals(problem, trace, step_index).links;
    p5.formal += " [enabling]";
    if (!achieve.links.empty()) {
      p5.text += " It achieves no new goal directly; " +
                 DescribeLinks(achieve.links) + " (enabling justification).";
    }
  }
  p5.achieve = achieve;

  arg.premises = {p1, p2, p3, p4, p5};
  arg.conclusion.kind = ConclusionKind::kExecuteC;
  arg.conclusion.actions = actions;
  arg.conclusion.state = s1;
  arg.conclusion.formal = "ExecuteC(" + set + ", " + s1.state.ToString() + ")";
  arg.conclusion.text =
      "Therefore, we should execute all the concurrent actions in the set " +
      set + " in the current state " + s1.state.ToString() + ".";
  return arg;
}

Argument BuildStateArgument(const Trace& trace, std::size_t state_index) {
  if (state_index == 0) throw InitialStateError();
  if (state_index >= trace.states.size()) {
    throw PreconditionError("state " + std::to_string(state_index) +
                            " is outside the trace (" +
                            std::to_string(trace.states.size()) + " states)");
  }
  const std::size_t step = state_index - 1;
  const TransitionClaim transition = WholeStep(trace, step);
  const PlanStep& plan_step = trace.steps[step].step;
  const std::string s1 = transition.from.state.ToString();
  const std::string s = transition.to.state.ToString();
  const std::string del = AtomBraces(transition.deleted);
  const std::string add = AtomBraces(transition.added);

  Argument arg;
  arg.id = "s" + std::to_string(state_index);
  arg.scheme = SchemeKind::kStateTransition;
  arg.subject = {SubjectKind::kState, state_index, std::nullopt};

  Premise p1;
  p1.index = 1;
  p1.kind = PremiseKind::kTransition;
  p1.transitions = {transition};
  p1.formal = "γ(" + s1 + ", " + plan_step.ToString() + ") = (" + s1 + " − " +
              del + ") ∪ " + add + " = " + s;
  p1.text = "In the current state " + s1 + ", we should execute " +
            (plan_step.concurrent()
                 ? "all the concurrent actions in the set " +
                       ActionSet(plan_step.actions())
                 : "the action " + plan_step.ToString()) +
            " by deleting the negative postconditions " + del +
            " and adding the positive postconditions " + add +
            " to the current state " + s1 + ", that results in the state " + s +
            ".";
  arg.premises = {p1};

  arg.conclusion.kind = ConclusionKind::kStateTrue;
  arg.conclusion.state = transition.to;
  arg.conclusion.formal = "True(" + s + ")";
  arg.conclusion.text = "Therefore, the state " + s + " is true.";
  return arg;
}

Argument InitialStateArgument(const Trace& trace) {
  Argument arg;
  arg.id = "s0";
  arg.scheme = SchemeKind::kStateTransition;
  arg.subject = {SubjectKind::kState, 0, std::nullopt};
  arg.degenerate = true;
  arg.conclusion.kind = ConclusionKind::kStateTrue;
  arg.conclusion.state = Ref(trace, 0);
  const std::string s = trace.states.front().ToString();
  arg.conclusion.formal = "True(" + s + ")";
  arg.conclusion.text =
      "Therefore, the state " + s + " is true by the initial state.";
  return arg;
}

Argument HoldsInitiallyArgument(const Trace& trace, const Goal& goal) {
  Argument arg;
  arg.id = "g-" + GoalSlug(goal);
  arg.scheme = SchemeKind::kGoal;
  arg.subject = {SubjectKind::kGoal, 0, goal};
  arg.degenerate = true;
  arg.conclusion.kind = ConclusionKind::kAchieve;
  arg.conclusion.state = Ref(trace, 0);
  arg.conclusion.goals = {goal};
  const std::string s = trace.states.front().ToString();
  arg.conclusion.formal = "Hold(" + goal.ToString() + ", " + s + ")";
  arg.conclusion.text = "The goal " + goal.ToString() +
                        " holds in the initial state " + s +
                        " and is true by the initial state; no action of the "
                        "plan is needed to achieve it.";
  return arg;
}

Argument BuildGoalArgument(const PlanningProblem& problem, const Trace& trace,
                           const Goal& goal, std::size_t feasibility_bound) {
  std::optional<std::size_t> achiever;
  for (std::size_t k = 0; k + 1 < trace.states.size(); ++k) {
    if (!Holds(trace.states[k], goal) && Holds(trace.states[k + 1], goal)) {
      achiever = k;
      break;
    }
  }
  if (!achiever) {
    if (Holds(trace.states.front(), goal)) throw HoldsInitiallyError(goal);
    std::size_t nearest = 0;
    AtomSet nearest_missing;
    std::size_t best = static_cast<std::size_t>(-1);
    for (std::size_t k = 0; k < trace.states.size(); ++k) {
      AtomSet missing;
      std::size_t violated = 0;
      for (const Literal& literal : goal.requirements) {
        if (!Holds(trace.states[k], literal)) {
          ++violated;
          missing.insert(literal.atom);
        }
      }
      if (violated < best) {
        best = violated;
        nearest = k;
        nearest_missing = std::move(missing);
      }
    }
    throw NoAchieverError(goal, nearest, std::move(nearest_missing),
                          GoalFeasible(problem, goal, feasibility_bound));
  }

  const std::size_t step = *achiever;
  const PlanStep& plan_step = trace.steps[step].step;
  const StateRef s1 = Ref(trace, step);
  const StateRef s2 = Ref(trace, step + 1);
  const std::string a = plan_step.concurrent() ? ActionSet(plan_step.actions())
                                               : plan_step.ToString();
  const std::string g = goal.ToString();

  Argument arg;
  arg.id = "g-" + GoalSlug(goal);
  arg.scheme = SchemeKind::kGoal;
  arg.subject = {SubjectKind::kGoal, step, goal};

  Premise p1;
  p1.index = 1;
  p1.kind = PremiseKind::kTransition;
  p1.transitions = {WholeStep(trace, step)};
  p1.formal = "γ(" + s1.state.ToString() + ", " + a + ") = " + s2.state.ToString();
  p1.text = "In the current state " + s1.state.ToString() +
            ", we should execute " +
            (plan_step.concurrent()
                 ? "all the concurrent actions in the set " + a
                 : "the action " + a) +
            ", that results in the next state " + s2.state.ToString() + ".";

  Premise p2;
  p2.index = 2;
  p2.kind = PremiseKind::kHold;
  p2.holds = {HoldGoals({goal}, s2)};
  p2.formal = "Hold(" + g + ", " + s2.state.ToString() + ")";
  p2.text = "In the next state " + s2.state.ToString() + ", the goal " + g +
            " holds.";

  arg.premises = {p1, p2};
  arg.conclusion.kind = ConclusionKind::kAchieve;
  arg.conclusion.actions = plan_step.actions();
  arg.conclusion.goals = {goal};
  arg.conclusion.formal = "Achieve(" + a + ", " + g + ")";
  arg.conclusion.text =
      plan_step.concurrent()
          ? "Therefore, the set of concurrent actions " + a +
                " achieves the goal " + g + "."
          : "Therefore, the action " + a + " achieves the goal " + g + ".";
  return arg;
}

Argument BuildPlanSummaryArgument(const PlanningProblem& problem,
                                  const Plan& plan) {
  SolutionVerdict verdict = CheckSolution(problem, plan);
  if (!verdict.is_solution) throw NotASolutionError(std::move(verdict));
  const Trace trace = RunPlan(problem, plan).trace;
  const std::string pi = plan.ToString();
  const std::size_t n = plan.steps.size();

  Argument arg;
  arg.id = "pi";
  arg.scheme = SchemeKind::kPlanSummary;
  arg.subject = {SubjectKind::kPlan, 0, std::nullopt};

  Premise p1;
  p1.index = 1;
  p1.kind = PremiseKind::kTransition;
  for (std::size_t i = 0; i < n; ++i) {
    TransitionClaim t = WholeStep(trace, i);
    const PlanStep& step = plan.steps[i];
    if (i > 0) p1.formal += ", ";
    p1.formal += "γ(" + t.from.state.ToString() + ", " + step.ToString() +
                 ") = " + t.to.state.ToString();
    if (i > 0) p1.text += " ";
    p1.text += std::string(i == 0 ? "In the initial state " : "In the state ") +
               t.from.state.ToString() + ", we should execute " +
               (step.concurrent()
                    ? "all the concurrent actions in the set " +
                          step.ToString() + " that result in "
                    : "the action " + step.ToString() + " that results in ") +
               (i + 1 == n ? "the goal state " : "the next state ") +
               t.to.state.ToString() + ".";
    p1.transitions.push_back(std::move(t));
  }
  const StateRef goal_state = Ref(trace, n);
  if (n == 0) {
    p1.formal = "γ(" + goal_state.state.ToString() + ", ⟨⟩) = " +
                goal_state.state.ToString();
    p1.text = "In the initial state " + goal_state.state.ToString() +
              ", no action needs to be executed: it is already the goal state.";
  }

  const std::string gset = JoinGoals(verdict.satisfied_goals);
  Premise p2;
  p2.index = 2;
  p2.kind = PremiseKind::kHold;
  p2.holds = {HoldGoals(verdict.satisfied_goals, goal_state)};
  p2.formal = "Hold(" + gset + ", " + goal_state.state.ToString() + ")";
  p2.text = "In the goal state " + goal_state.state.ToString() +
            ", all the goals in the set of goals " + gset + " hold.";

  Premise p3;
  p3.index = 3;
  p3.kind = PremiseKind::kAchieveSet;
  AchieveClaim achieve;
  achieve.by_plan = true;
  achieve.goals = verdict.satisfied_goals;
  p3.achieve = achieve;
  p3.formal = "Achieve(" + pi + ", " + gset + ")";
  p3.text = "The sequence of actions " + pi +
            " achieves the set of all goals " + gset + ".";

  arg.premises = {p1, p2, p3};
  arg.conclusion.kind = ConclusionKind::kSolution;
  arg.conclusion.goals = verdict.satisfied_goals;
  const std::string p = problem.name.empty() ? "P" : problem.name;
  arg.conclusion.formal = "Solution(" + pi + ", " + p + ")";
  arg.conclusion.text =
      "Therefore, " + pi + " is a solution to the planning problem " + p + ".";
  return arg;
}

std::string RenderText(const Argument& argument) {
  std::ostringstream ss;
  ss << "Argument " << argument.id << " (" << SchemeTitle(argument.scheme)
     << ", " << SchemeName(argument.scheme) << ")\n";
  for (const Premise& premise : argument.premises) {
    ss << "Premise " << premise.index << ": " << premise.formal << "\n";
    ss << "  " << premise.text << "\n";
  }
  ss << "Conclusion: " << argument.conclusion.formal << "\n";
  ss << "  " << argument.conclusion.text << "\n";
  return ss.str();
}

namespace {

bool StateRefSound(const Trace& trace, const StateRef& ref) {
  if (!ref.trace_index) return true;
  return *ref.trace_index < trace.states.size() &&
         trace.states[*ref.trace_index] == ref.state;
}

bool HoldSound(const Trace& trace, const HoldClaim& hold) {
  if (!StateRefSound(trace, hold.state)) return false;
  if (hold.precondition_of && hold.precondition_of->pre != hold.atoms) {
    return false;
  }
  for (const Atom& atom : hold.atoms) {
    if (!hold.state.state.Contains(atom)) return false;
  }
  for (const Goal& goal : hold.goals) {
    if (!Holds(hold.state.state, goal)) return false;
  }
  return true;
}

bool TransitionSound(const Trace& trace, const TransitionClaim& t) {
  if (!StateRefSound(trace, t.from) || !StateRefSound(trace, t.to)) return false;
  if (t.actions.empty()) return false;
  if (t.deleted != UnionOf(t.actions, &GroundAction::del) ||
      t.added != UnionOf(t.actions, &GroundAction::add)) {
    return false;
  }
  try {
    State result = t.actions.size() == 1
                       ? Transition(t.from.state, t.actions.front())
                       : TransitionStep(t.from.state,
                                        PlanStep::Concurrent(t.actions));
    if (result != t.to.state) return false;
  } catch (const Error&) {
    return false;
  }
  if (t.whole_step) {
    if (!t.step_index || *t.step_index >= trace.steps.size()) return false;
    const std::size_t i = *t.step_index;
    return t.from.trace_index == i && t.to.trace_index == i + 1 &&
           trace.steps[i].step.actions() == t.actions;
  }
  return true;
}

bool AchieveSound(const PlanningProblem& problem, const Trace& trace,
                  const AchieveClaim& claim) {
  if (claim.by_plan) {
    for (const Goal& goal : claim.goals) {
      if (!Holds(trace.final_state(), goal)) return false;
    }
    return !claim.goals.empty() || problem.goals.empty();
  }
  const AtomSet added = UnionOf(claim.actions, &GroundAction::add);
  const AtomSet deleted = UnionOf(claim.actions, &GroundAction::del);
  switch (claim.label) {
    case AchieveLabel::kDirect:
      for (const Goal& goal : claim.goals) {
        for (const Literal& literal : goal.requirements) {
          const AtomSet& effect = literal.positive ? added : deleted;
          if (effect.count(literal.atom) == 0) return false;
        }
      }
      return true;
    case AchieveLabel::kEnabling:
      if (claim.links.empty()) {
        for (const Goal& goal : claim.goals) {
          if (!EstablishesSome(added, deleted, goal)) return false;
        }
        return !claim.goals.empty();
      }
      for (const CausalLink& link : claim.links) {
        if (added.count(link.atom) == 0 || link.consumer.pre.count(link.atom) == 0) {
          return false;
        }
        if (link.consumer_step >= trace.steps.size()) return false;
        const auto& consumers = trace.steps[link.consumer_step].step.actions();
        if (std::find(consumers.begin(), consumers.end(), link.consumer) ==
            consumers.end()) {
          return false;
        }
      }
      return true;
    case AchieveLabel::kPreserved:
      for (const Goal& goal : claim.goals) {
        for (const Literal& literal : goal.requirements) {
          const AtomSet& undo = literal.positive ? deleted : added;
          if (undo.count(literal.atom) > 0) return false;
        }
      }
      return true;
  }
  return false;
}

}  // namespace

std::vector<int> UnsoundPremises(const PlanningProblem& problem,
                                 const Trace& trace, const Argument& argument) {
  std::vector<int> bad;
  for (const Premise& premise : argument.premises) {
    bool ok = true;
    for (const HoldClaim& hold : premise.holds) ok = ok && HoldSound(trace, hold);
    for (const TransitionClaim& t : premise.transitions) {
      ok = ok && TransitionSound(trace, t);
    }
    if (premise.achieve) ok = ok && AchieveSound(problem, trace, *premise.achieve);
    if (!ok) bad.push_back(premise.index);
  }
  const Conclusion& c = argument.conclusion;
  bool ok = !c.state || StateRefSound(trace, *c.state);
  if (argument.degenerate && c.state) {
    for (const Goal& goal : c.goals) ok = ok && Holds(c.state->state, goal);
  }
  if (!ok) bad.push_back(0);
  return bad;
}

}  // namespace xplain
