#include "xplain/wire.h"

namespace xplain {

namespace {

Json Strings(const AtomSet& atoms) {
  Json out = Json::array();
  for (const Atom& atom : atoms) out.push_back(atom.ToString());
  return out;
}

Json Strings(const std::vector<GroundAction>& actions) {
  Json out = Json::array();
  for (const GroundAction& action : actions) out.push_back(action.ToString());
  return out;
}

Json Strings(const std::vector<Goal>& goals) {
  Json out = Json::array();
  for (const Goal& goal : goals) out.push_back(goal.ToString());
  return out;
}

const char* SubjectName(SubjectKind kind) {
  switch (kind) {
    case SubjectKind::kPlan: return "plan";
    case SubjectKind::kStep: return "step";
    case SubjectKind::kState: return "state";
    case SubjectKind::kGoal: return "goal";
  }
  return "?";
}

Json ToJson(const Subject& subject) {
  Json out = {{"kind", SubjectName(subject.kind)}, {"index", subject.index}};
  if (subject.goal) out["goal"] = subject.goal->ToString();
  return out;
}

Json ToJson(const HoldClaim& hold) {
  Json out = {{"atoms", Strings(hold.atoms)},
              {"goals", Strings(hold.goals)},
              {"state", ToJson(hold.state)}};
  if (hold.precondition_of) {
    out["preconditionOf"] = hold.precondition_of->ToString();
  }
  return out;
}

Json ToJson(const TransitionClaim& t) {
  Json out = {{"from", ToJson(t.from)},
              {"actions", Strings(t.actions)},
              {"to", ToJson(t.to)},
              {"deleted", Strings(t.deleted)},
              {"added", Strings(t.added)},
              {"wholeStep", t.whole_step}};
  out["step"] = t.step_index ? Json(*t.step_index) : Json(nullptr);
  return out;
}

Json ToJson(const AchieveClaim& claim) {
  Json links = Json::array();
  for (const CausalLink& link : claim.links) {
    links.push_back({{"atom", link.atom.ToString()},
                     {"consumerStep", link.consumer_step},
                     {"consumer", link.consumer.ToString()}});
  }
  return {{"actions", Strings(claim.actions)},
          {"byPlan", claim.by_plan},
          {"goals", Strings(claim.goals)},
          {"label", AchieveLabelName(claim.label)},
          {"links", links}};
}

}  // namespace

Json ToJson(const State& state) { return Strings(state.atoms()); }

Json ToJson(const StateRef& ref) {
  return {{"index", ref.trace_index ? Json(*ref.trace_index) : Json(nullptr)},
          {"atoms", ToJson(ref.state)}};
}

Json ToJson(const Argument& argument) {
  Json premises = Json::array();
  for (const Premise& p : argument.premises) {
    Json holds = Json::array();
    for (const HoldClaim& h : p.holds) holds.push_back(ToJson(h));
    Json transitions = Json::array();
    for (const TransitionClaim& t : p.transitions) transitions.push_back(ToJson(t));
    Json premise = {{"index", p.index},
                    {"kind", PremiseKindName(p.kind)},
                    {"formal", p.formal},
                    {"text", p.text},
                    {"holds", holds},
                    {"transitions", transitions}};
    premise["achieve"] = p.achieve ? ToJson(*p.achieve) : Json(nullptr);
    premises.push_back(std::move(premise));
  }
  const Conclusion& c = argument.conclusion;
  Json conclusion = {{"kind", ConclusionKindName(c.kind)},
                     {"formal", c.formal},
                     {"text", c.text},
                     {"actions", Strings(c.actions)},
                     {"goals", Strings(c.goals)}};
  conclusion["state"] = c.state ? ToJson(*c.state) : Json(nullptr);
  return {{"id", argument.id},
          {"scheme", SchemeName(argument.scheme)},
          {"title", SchemeTitle(argument.scheme)},
          {"subject", ToJson(argument.subject)},
          {"degenerate", argument.degenerate},
          {"premises", premises},
          {"conclusion", conclusion},
          {"text", RenderText(argument)}};
}

Json ToJson(const CQInstance& cq, const Session& session) {
  auto answer = session.AnswerOf(cq.id);
  return {{"id", cq.id},
          {"kind", "CQ" + std::to_string(cq.kind)},
          {"target", cq.target.empty() ? Json(nullptr) : Json(cq.target)},
          {"premise", cq.premise_index},
          {"subject", ToJson(cq.subject)},
          {"question", cq.question},
          {"asked", session.asked().count(cq.id) > 0},
          {"answeredBy", answer ? Json(*answer) : Json(nullptr)}};
}

Json ToJson(const ConsistencyViolation& v) {
  return {{"clause", v.clause},
          {"action", v.action},
          {"other", v.other.empty() ? Json(nullptr) : Json(v.other)},
          {"atoms", Strings(v.atoms)},
          {"text", v.ToString()}};
}

Json ToJson(const SolutionVerdict& verdict) {
  Json failures = Json::array();
  for (const VerdictFailure& f : verdict.failures) {
    failures.push_back({{"condition", f.condition},
                        {"step", f.step ? Json(*f.step) : Json(nullptr)},
                        {"goal", f.goal ? Json(f.goal->ToString()) : Json(nullptr)},
                        {"missing", Strings(f.missing)},
                        {"explanation", f.explanation}});
  }
  return {{"isSolution", verdict.is_solution},
          {"satisfiedGoals", Strings(verdict.satisfied_goals)},
          {"failures", failures}};
}

Json ToJson(const GroundedResult& grounded) {
  return {{"in", grounded.in},
          {"out", grounded.out},
          {"undec", grounded.undec},
          {"iterations", grounded.iterations}};
}

Json ToJson(const PropertyReport& r) {
  return {{"p1", r.p1},
          {"p2", r.p2},
          {"p3", r.p3},
          {"p4", r.p4},
          {"p4IsProxy", true},
          {"complete", r.complete},
          {"materialized", r.materialized},
          {"witnesses",
           {{"unansweredCQs", r.unanswered},
            {"materializedAnswers", r.materialized_answers},
            {"missingGoalArguments", r.missing_goal_arguments},
            {"goalArguments", r.goal_arguments},
            {"unanswerableCQs", r.unanswerable}}},
          {"grounded", ToJson(r.grounded)}};
}

Json AfToJson(const Session& session) {
  const ArgumentationFramework& af = session.af();
  const GroundedResult grounded = session.Grounded();
  Json nodes = Json::array();
  Json labels = Json::object();
  for (const auto& [id, kind] : af.nodes()) {
    Json node = {{"id", id},
                 {"kind", kind == NodeKind::kArgument ? "argument" : "cq"},
                 {"label", LabelName(grounded.label(id))}};
    if (kind == NodeKind::kArgument) {
      node["scheme"] = SchemeName(session.argument(id).scheme);
    } else {
      node["cqKind"] = "CQ" + std::to_string(session.asked().at(id).kind);
    }
    nodes.push_back(std::move(node));
    labels[id] = LabelName(grounded.label(id));
  }
  Json attacks = Json::array();
  for (const auto& [from, to] : af.attacks()) {
    attacks.push_back({{"from", from}, {"to", to}});
  }
  return {{"nodes", nodes}, {"attacks", attacks}, {"labels", labels}};
}

}  // namespace xplain
