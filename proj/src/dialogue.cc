#include "xplain/dialogue.h"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "xplain/wire.h"

namespace xplain {

namespace {

bool MentionsState(const Premise& premise, std::size_t index) {
  for (const HoldClaim& h : premise.holds) {
    if (h.state.trace_index == index) return true;
  }
  for (const TransitionClaim& t : premise.transitions) {
    if (t.from.trace_index == index || t.to.trace_index == index) return true;
  }
  return false;
}

bool MentionsStep(const Premise& premise, std::size_t index) {
  for (const TransitionClaim& t : premise.transitions) {
    if (t.step_index == index) return true;
  }
  return false;
}

bool MentionsGoal(const Premise& premise, const Goal& goal) {
  for (const HoldClaim& h : premise.holds) {
    if (std::find(h.goals.begin(), h.goals.end(), goal) != h.goals.end()) {
      return true;
    }
  }
  return false;
}

int FirstPremise(const Argument& argument, const Subject& subject) {
  for (const Premise& p : argument.premises) {
    bool hit = false;
    switch (subject.kind) {
      case SubjectKind::kPlan: hit = true; break;
      case SubjectKind::kStep: hit = MentionsStep(p, subject.index); break;
      case SubjectKind::kState: hit = MentionsState(p, subject.index); break;
      case SubjectKind::kGoal: hit = MentionsGoal(p, *subject.goal); break;
    }
    if (hit) return p.index;
  }
  throw std::logic_error("argument " + argument.id +
                         " has no premise mentioning the CQ subject");
}

std::string SubjectTag(const Subject& subject) {
  switch (subject.kind) {
    case SubjectKind::kPlan: return "plan";
    case SubjectKind::kStep: return "step" + std::to_string(subject.index);
    case SubjectKind::kState: return "state" + std::to_string(subject.index);
    case SubjectKind::kGoal: return "goal-" + GoalSlug(*subject.goal);
  }
  return "?";
}

}  // namespace

Session Session::Create(PlanningProblem problem, Plan plan,
                        std::size_t feasibility_bound) {
  Session session;
  session.problem_ = std::make_shared<const PlanningProblem>(std::move(problem));
  session.plan_ = std::move(plan);
  session.feasibility_bound_ = feasibility_bound;
  session.verdict_ = CheckSolution(*session.problem_, session.plan_);
  session.trace_ = RunPlan(*session.problem_, session.plan_).trace;
  if (session.verdict_.is_solution) {
    session.AddArgument(BuildPlanSummaryArgument(*session.problem_, session.plan_));
    session.has_summary_ = true;
  }
  session.CheckShape();
  return session;
}

const Argument& Session::summary() const {
  if (!has_summary_) {
    throw PreconditionError(
        "the plan is not a solution, so there is no summary argument");
  }
  return arguments_.at("pi");
}

bool Session::HasArgument(const std::string& id) const {
  return arguments_.count(id) > 0;
}

const Argument& Session::argument(const std::string& id) const {
  auto it = arguments_.find(id);
  if (it == arguments_.end()) throw NotFoundError("unknown argument " + id);
  return it->second;
}

std::optional<std::string> Session::AnswerOf(const std::string& cq_id) const {
  auto it = answers_.find(cq_id);
  if (it == answers_.end()) return std::nullopt;
  return it->second;
}

std::vector<CQInstance> Session::AvailableCQs(
    const std::string& argument_id) const {
  const Argument& arg = argument(argument_id);
  std::vector<CQInstance> out;
  if (arg.degenerate) return out;

  auto add = [&](int kind, Subject subject, std::string question) {
    CQInstance cq;
    cq.kind = kind;
    cq.subject = std::move(subject);
    cq.question = std::move(question);
    if (kind == 1) {
      cq.id = "cq1";
    } else {
      cq.target = arg.id;
      cq.premise_index = FirstPremise(arg, cq.subject);
      cq.id = arg.id + "-cq" + std::to_string(kind) + "-" + SubjectTag(cq.subject);
    }
    out.push_back(std::move(cq));
  };
  auto step_cq = [&](std::size_t step) {
    const PlanStep& s = trace_.steps.at(step).step;
    if (s.concurrent()) {
      add(3, {SubjectKind::kStep, step, std::nullopt},
          "Why execute the concurrent actions " + s.ToString() + " at step " +
              std::to_string(step) + "?");
    } else {
      add(2, {SubjectKind::kStep, step, std::nullopt},
          "Why execute action " + s.ToString() + " at step " +
              std::to_string(step) + "?");
    }
  };
  auto state_cq = [&](std::size_t index) {
    add(4, {SubjectKind::kState, index, std::nullopt},
        "Why is state " + std::to_string(index) + " (" +
            trace_.states.at(index).ToString() + ") true?");
  };

  switch (arg.scheme) {
    case SchemeKind::kPlanSummary:
      add(1, {SubjectKind::kPlan, 0, std::nullopt},
          "Why is " + plan_.ToString() + " a solution?");
      for (std::size_t i = 0; i < plan_.steps.size(); ++i) step_cq(i);
      for (std::size_t i = 0; i < trace_.states.size(); ++i) state_cq(i);
      for (const Goal& goal : arg.conclusion.goals) {
        add(5, {SubjectKind::kGoal, 0, goal},
            "How is goal " + goal.ToString() + " achieved?");
      }
      break;
    case SchemeKind::kAction:
    case SchemeKind::kConcurrentAction:
      state_cq(arg.subject.index);
      break;
    case SchemeKind::kGoal:
      // A concurrent achiever is only questioned from the summary argument.
      if (!trace_.steps.at(arg.subject.index).step.concurrent()) {
        step_cq(arg.subject.index);
      }
      state_cq(arg.subject.index);
      break;
    case SchemeKind::kStateTransition: {
      const std::size_t step = arg.subject.index - 1;
      if (!trace_.steps.at(step).step.concurrent()) step_cq(step);
      state_cq(step);
      break;
    }
  }
  return out;
}

std::optional<CQInstance> Session::FindCQ(const std::string& cq_id) const {
  auto it = asked_.find(cq_id);
  if (it != asked_.end()) return it->second;
  for (const std::string& id : order_) {
    for (CQInstance& cq : AvailableCQs(id)) {
      if (cq.id == cq_id) return std::move(cq);
    }
  }
  return std::nullopt;
}

const CQInstance& Session::Ask(const std::string& cq_id) {
  auto it = asked_.find(cq_id);
  if (it != asked_.end()) return it->second;
  std::optional<CQInstance> cq = FindCQ(cq_id);
  if (!cq) throw NotFoundError("unknown critical question " + cq_id);
  af_.AddNode(cq->id, NodeKind::kCriticalQuestion);
  if (!cq->target.empty()) af_.AddAttack(cq->id, cq->target);
  const CQInstance& stored = asked_.emplace(cq->id, *cq).first->second;
  CheckShape();
  return stored;
}

Argument Session::BuildAnswer(const CQInstance& cq) const {
  switch (cq.kind) {
    case 1:
      return summary();
    case 2:
      return BuildActionArgument(*problem_, trace_, cq.subject.index);
    case 3:
      return BuildConcurrentArgument(*problem_, trace_, cq.subject.index);
    case 4:
      return cq.subject.index == 0 ? InitialStateArgument(trace_)
                                   : BuildStateArgument(trace_, cq.subject.index);
    case 5:
      try {
        return BuildGoalArgument(*problem_, trace_, *cq.subject.goal,
                                 feasibility_bound_);
      } catch (const HoldsInitiallyError&) {
        return HoldsInitiallyArgument(trace_, *cq.subject.goal);
      }
  }
  throw std::logic_error("bad CQ kind");
}

const Argument& Session::Answer(const std::string& cq_id) {
  if (auto done = AnswerOf(cq_id)) return arguments_.at(*done);
  std::optional<CQInstance> cq = FindCQ(cq_id);
  if (!cq) throw NotFoundError("unknown critical question " + cq_id);
  Argument answer = BuildAnswer(*cq);
  Ask(cq_id);
  if (!HasArgument(answer.id)) AddArgument(answer);
  af_.AddAttack(answer.id, cq_id);
  answers_[cq_id] = answer.id;
  CheckShape();
  return arguments_.at(answer.id);
}

std::vector<std::string> Session::ExploreAll() {
  std::vector<std::string> failed;
  bool progress = true;
  while (progress) {
    progress = false;
    const std::vector<std::string> ids = order_;
    for (const std::string& id : ids) {
      for (const CQInstance& cq : AvailableCQs(id)) {
        if (answers_.count(cq.id) ||
            std::find(failed.begin(), failed.end(), cq.id) != failed.end()) {
          continue;
        }
        try {
          Answer(cq.id);
          progress = true;
        } catch (const ExplanationError&) {
          Ask(cq.id);
          failed.push_back(cq.id);
        }
      }
    }
  }
  return failed;
}

void Session::AddArgument(const Argument& argument) {
  af_.AddNode(argument.id, NodeKind::kArgument);
  arguments_.emplace(argument.id, argument);
  order_.push_back(argument.id);
}

void Session::CheckShape() const {
  if (!af_.Bipartite()) {
    throw std::logic_error("session framework has an attack between nodes of one kind");
  }
  for (const auto& [id, cq] : asked_) {
    if (!cq.target.empty() && !af_.attacks().count({id, cq.target})) {
      throw std::logic_error("asked CQ " + id + " does not attack its target");
    }
  }
  for (const auto& [cq, answer] : answers_) {
    if (!af_.attacks().count({answer, cq})) {
      throw std::logic_error("answer " + answer + " does not attack " + cq);
    }
  }
}

PropertyReport CheckProperties(const Session& session, bool materialize) {
  const Argument& pi = session.summary();
  PropertyReport report;
  report.complete = session.complete();
  report.materialized = materialize;
  for (const auto& [id, cq] : session.asked()) {
    if (!session.AnswerOf(id)) report.unanswered.push_back(id);
  }

  Session work = session;
  auto answer = [&](const std::string& cq_id) -> std::optional<std::string> {
    try {
      std::string id = work.Answer(cq_id).id;
      report.materialized_answers.push_back(id);
      return id;
    } catch (const ExplanationError&) {
      report.unanswerable.push_back(cq_id);
      return std::nullopt;
    }
  };
  if (materialize) {
    for (const std::string& id : report.unanswered) answer(id);
  }

  bool goals_present = true;
  for (const CQInstance& cq : work.AvailableCQs(pi.id)) {
    if (cq.kind != 5) continue;
    std::optional<std::string> id = work.AnswerOf(cq.id);
    if (!id) {
      report.missing_goal_arguments.push_back(
          "g-" + GoalSlug(*cq.subject.goal));
      if (materialize) id = answer(cq.id);
    }
    if (id) {
      report.goal_arguments.push_back(*id);
    } else {
      goals_present = false;
    }
  }

  report.grounded = work.Grounded();
  const GroundedResult& gr = report.grounded;
  const ArgumentationFramework& af = work.af();

  report.p1 = true;
  for (const auto& [id, kind] : af.nodes()) {
    if (kind == NodeKind::kCriticalQuestion && af.attackers(id).empty()) {
      report.p1 = false;
    }
  }
  const bool pi_in = gr.in.count(pi.id) > 0;
  report.p2 = pi_in;
  for (const std::string& attacker : af.attackers(pi.id)) {
    if (gr.in.count(attacker)) report.p2 = false;
  }
  bool goals_in = goals_present;
  for (const std::string& id : report.goal_arguments) {
    if (!gr.in.count(id)) goals_in = false;
  }
  report.p3 = pi_in == goals_in;
  report.p4 = report.p1 && report.p2 && report.p3 && report.complete;
  return report;
}

std::string ExportAF(const Session& session, const std::string& format) {
  if (format == "structured" || format == "json") {
    return AfToJson(session).dump(2) + "\n";
  }
  if (format != "dot" && format != "graph-text") {
    throw PreconditionError("unknown AF format '" + format +
                            "' (expected dot or structured)");
  }
  const GroundedResult gr = session.Grounded();
  auto color = [&](const std::string& id) {
    switch (gr.label(id)) {
      case Label::kIn: return "palegreen";
      case Label::kOut: return "lightcoral";
      case Label::kUndec: return "lightgrey";
    }
    return "white";
  };
  std::ostringstream ss;
  ss << "digraph af {\n  rankdir=BT;\n";
  for (const auto& [id, kind] : session.af().nodes()) {
    ss << "  \"" << id << "\" [";
    if (kind == NodeKind::kArgument) {
      ss << "shape=box, label=\"" << id << "\\n"
         << SchemeName(session.argument(id).scheme) << "\"";
    } else {
      ss << "shape=diamond, label=\"" << id << "\"";
    }
    ss << ", style=filled, fillcolor=" << color(id) << ", xlabel=\""
       << LabelName(gr.label(id)) << "\"];\n";
  }
  for (const auto& [from, to] : session.af().attacks()) {
    ss << "  \"" << from << "\" -> \"" << to << "\";\n";
  }
  ss << "}\n";
  return ss.str();
}

}  // namespace xplain
