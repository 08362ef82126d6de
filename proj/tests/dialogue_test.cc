#include <doctest.h>

#include <algorithm>
#include <regex>
#include <sstream>

#include "af_oracle.h"
#include "support.h"
#include "xplain/commands.h"
#include "xplain/dialogue.h"
#include "xplain/wire.h"

using namespace xplain;
using xplain::testing::LoadBlocks;
using xplain::testing::NaiveGrounded;

namespace {

Session Fresh() {
  const auto& b = LoadBlocks();
  return Session::Create(b.problem, b.plan);
}

std::map<int, int> KindCounts(const std::vector<CQInstance>& cqs) {
  std::map<int, int> out;
  for (const CQInstance& cq : cqs) ++out[cq.kind];
  return out;
}

// Test-only reader for the structured export.
ArgumentationFramework ReadStructured(const std::string& text,
                                      std::map<std::string, std::string>* labels) {
  const Json j = Json::parse(text);
  ArgumentationFramework af;
  for (const Json& n : j.at("nodes")) {
    af.AddNode(n.at("id").get<std::string>(), n.at("kind") == "cq"
                                                  ? NodeKind::kCriticalQuestion
                                                  : NodeKind::kArgument);
  }
  for (const Json& e : j.at("attacks")) {
    af.AddAttack(e.at("from").get<std::string>(), e.at("to").get<std::string>());
  }
  for (const auto& [id, label] : j.at("labels").items()) {
    (*labels)[id] = label.get<std::string>();
  }
  return af;
}

bool Mentions(const Argument& arg, const std::string& needle) {
  if (arg.conclusion.text.find(needle) != std::string::npos) return true;
  for (const Premise& p : arg.premises) {
    if (p.text.find(needle) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("fresh session presents only the summary") {
  Session s = Fresh();
  CHECK(s.has_summary());
  CHECK(s.order() == std::vector<std::string>{"pi"});
  CHECK(s.af().size() == 1);
  CHECK(s.asked().empty());
  GroundedResult g = s.Grounded();
  CHECK(g.in == std::set<std::string>{"pi"});
}

TEST_CASE("CQs attached to the plan summary") {
  Session s = Fresh();
  std::vector<CQInstance> cqs = s.AvailableCQs("pi");
  // One CQ1, three single-action steps, one concurrent step, states 0..4, six goals.
  CHECK(KindCounts(cqs) == std::map<int, int>{{1, 1}, {2, 3}, {3, 1}, {4, 5}, {5, 6}});
  CHECK(cqs.front().id == "cq1");
  CHECK(cqs.front().target.empty());
  std::set<std::string> ids;
  for (const CQInstance& cq : cqs) {
    ids.insert(cq.id);
    if (cq.kind == 2 || cq.kind == 3 || cq.kind == 4) CHECK(cq.premise_index == 1);
    if (cq.kind == 5) CHECK(cq.premise_index == 2);
  }
  CHECK(ids.size() == cqs.size());
  CHECK(ids.count("pi-cq2-step0"));
  CHECK(ids.count("pi-cq3-step3"));
  CHECK(ids.count("pi-cq4-state4"));
  CHECK(ids.count("pi-cq5-goal-on-c-a"));
  CHECK_THROWS_AS(s.AvailableCQs("nope"), NotFoundError);
}

TEST_CASE("asking and answering") {
  Session s = Fresh();
  const CQInstance& asked = s.Ask("pi-cq2-step0");
  CHECK(asked.target == "pi");
  CHECK(s.af().attacks().count({"pi-cq2-step0", "pi"}));
  CHECK(s.Grounded().label("pi") == Label::kOut);

  const Argument& a0 = s.Answer("pi-cq2-step0");
  CHECK(a0.id == "a0");
  CHECK(s.AnswerOf("pi-cq2-step0") == std::optional<std::string>("a0"));
  CHECK(s.af().attacks().count({"a0", "pi-cq2-step0"}));
  CHECK(s.Grounded().label("pi") == Label::kIn);
  CHECK(s.Grounded().label("pi-cq2-step0") == Label::kOut);

  // Idempotent: no new nodes or attacks.
  const std::size_t nodes = s.af().size();
  const std::size_t attacks = s.af().attacks().size();
  CHECK(s.Answer("pi-cq2-step0").id == "a0");
  s.Ask("pi-cq2-step0");
  CHECK(s.af().size() == nodes);
  CHECK(s.af().attacks().size() == attacks);

  // CQ4 on the action argument targets its start state only.
  std::vector<CQInstance> on_a0 = s.AvailableCQs("a0");
  REQUIRE(on_a0.size() == 1);
  CHECK(on_a0[0].id == "a0-cq4-state0");

  // CQ1 is answered by the summary itself and attacks nothing.
  s.Answer("cq1");
  CHECK(s.af().attacks().count({"pi", "cq1"}));
  CHECK(s.af().attackers("pi").size() == 1);

  CHECK_THROWS_AS(s.Answer("pi-cq9-step0"), NotFoundError);
}

TEST_CASE("state argument CQs and the degenerate state 0 answer") {
  Session s = Fresh();
  s.Answer("pi-cq4-state1");
  REQUIRE(s.HasArgument("s1"));
  std::vector<CQInstance> cqs = s.AvailableCQs("s1");
  REQUIRE(cqs.size() == 2);
  CHECK(cqs[0].id == "s1-cq2-step0");
  CHECK(cqs[0].question == "Why execute action UNSTACK(A,B) at step 0?");
  CHECK(cqs[1].id == "s1-cq4-state0");

  const Argument& s0 = s.Answer("s1-cq4-state0");
  CHECK(s0.degenerate);
  CHECK(s.af().attacks().count({"s0", "s1-cq4-state0"}));
  CHECK(s.AvailableCQs("s0").empty());
  CHECK(s.Grounded().label("s1") == Label::kIn);
  // s4 follows the concurrent step, so only CQ4 applies.
  s.Answer("pi-cq4-state4");
  CHECK(s.AvailableCQs("s4").size() == 1);
}

TEST_CASE("full exploration labels every argument in") {
  Session s = Fresh();
  std::vector<std::string> failed = s.ExploreAll();
  CHECK(failed.empty());
  CHECK(s.arguments().size() == 16);
  CHECK(s.asked().size() == 37);
  CHECK(s.af().Bipartite());

  GroundedResult g = s.Grounded();
  CHECK(g.undec.empty());
  for (const auto& [id, kind] : s.af().nodes()) {
    CHECK_MESSAGE(g.label(id) == (kind == NodeKind::kArgument ? Label::kIn : Label::kOut), id);
  }
  CHECK(g.in == NaiveGrounded(s.af()));

  PropertyReport r = CheckProperties(s);
  CHECK(r.p1);
  CHECK(r.p2);
  CHECK(r.p3);
  CHECK_FALSE(r.p4);
  CHECK(r.materialized_answers.empty());
  CHECK(r.missing_goal_arguments.empty());
  CHECK(r.goal_arguments.size() == 6);
  s.MarkComplete();
  CHECK(CheckProperties(s).p4);
}

TEST_CASE("property check materializes missing answers") {
  Session s = Fresh();
  s.Ask("pi-cq2-step1");
  PropertyReport raw = CheckProperties(s, false);
  CHECK_FALSE(raw.p1);
  CHECK(raw.unanswered == std::vector<std::string>{"pi-cq2-step1"});
  CHECK_FALSE(raw.p2);

  PropertyReport r = CheckProperties(s);
  CHECK(r.materialized);
  CHECK(r.p1);
  CHECK(r.p2);
  CHECK(r.p3);
  CHECK(r.unanswered == std::vector<std::string>{"pi-cq2-step1"});
  CHECK(std::find(r.materialized_answers.begin(), r.materialized_answers.end(), "a1") !=
        r.materialized_answers.end());
  CHECK(r.missing_goal_arguments.size() == 6);
  // The session itself is untouched.
  CHECK(s.arguments().size() == 1);
  CHECK_FALSE(s.AnswerOf("pi-cq2-step1"));
}

TEST_CASE("P3 tracks goal arguments across random dialogue prefixes") {
  std::mt19937 rng(7u);
  for (int trial = 0; trial < 40; ++trial) {
    Session s = Fresh();
    const int moves = std::uniform_int_distribution<int>(0, 25)(rng);
    for (int m = 0; m < moves; ++m) {
      std::vector<CQInstance> open;
      for (const std::string& id : s.order()) {
        for (const CQInstance& cq : s.AvailableCQs(id)) {
          if (!s.AnswerOf(cq.id)) open.push_back(cq);
        }
      }
      if (open.empty()) break;
      const CQInstance& pick = open[rng() % open.size()];
      if (rng() % 3 == 0) {
        s.Ask(pick.id);
      } else {
        s.Answer(pick.id);
      }
    }
    GroundedResult g = s.Grounded();
    REQUIRE(g.in == NaiveGrounded(s.af()));
    REQUIRE(s.af().Bipartite());
    // pi is in exactly when every CQ attacking it has an answer that is in.
    bool answered = true;
    for (const std::string& att : s.af().attackers("pi")) {
      const auto by = s.AnswerOf(att);
      answered &= by && g.label(*by) == Label::kIn;
    }
    CHECK((g.label("pi") == Label::kIn) == answered);
    PropertyReport r = CheckProperties(s);
    CHECK(r.p1);
    CHECK(r.p2);
    CHECK(r.p3);
  }
}

TEST_CASE("every argument mentions its subject") {
  Session s = Fresh();
  s.ExploreAll();
  for (const auto& [id, arg] : s.arguments()) {
    switch (arg.subject.kind) {
      case SubjectKind::kStep:
        for (const GroundAction& a : s.plan().steps[arg.subject.index].actions()) {
          CHECK_MESSAGE(Mentions(arg, a.ToString()), id);
        }
        break;
      case SubjectKind::kState:
        CHECK_MESSAGE(Mentions(arg, s.trace().states[arg.subject.index].ToString()), id);
        break;
      case SubjectKind::kGoal:
        CHECK_MESSAGE(Mentions(arg, arg.subject.goal->ToString()), id);
        break;
      case SubjectKind::kPlan:
        CHECK(Mentions(arg, s.plan().ToString()));
        break;
    }
  }
}

TEST_CASE("sessions need a solution") {
  const auto& b = LoadBlocks();
  Plan swapped = b.plan;
  std::swap(swapped.steps[0], swapped.steps[1]);
  Session s = Session::Create(b.problem, swapped);
  CHECK_FALSE(s.has_summary());
  CHECK_FALSE(s.verdict().is_solution);
  CHECK_THROWS_AS(s.summary(), PreconditionError);
  CHECK_THROWS_AS(CheckProperties(s), PreconditionError);
  CHECK(s.af().size() == 0);
}

TEST_CASE("DOT export") {
  Session s = Fresh();
  s.ExploreAll();
  const std::string dot = ExportAF(s, "dot");
  CHECK(dot.rfind("digraph af {", 0) == 0);
  const std::regex node(R"(^  "[^"]+" \[)");
  const std::regex edge(R"(^  "[^"]+" -> "[^"]+")");
  std::size_t nodes = 0, edges = 0, boxes = 0;
  std::istringstream lines(dot);
  for (std::string line; std::getline(lines, line);) {
    if (std::regex_search(line, edge)) {
      ++edges;
    } else if (std::regex_search(line, node)) {
      ++nodes;
      if (line.find("shape=box") != std::string::npos) ++boxes;
    }
  }
  CHECK(nodes == 53);
  CHECK(boxes == 16);
  CHECK(edges == s.af().attacks().size());
  CHECK(ExportAF(s, "graph-text") == dot);

  const std::string empty = ExportAF(Fresh(), "dot");
  CHECK(empty.find("\"pi\"") != std::string::npos);
  CHECK_THROWS_AS(ExportAF(s, "svg"), PreconditionError);
}

TEST_CASE("structured export round trip") {
  Session s = Fresh();
  s.Answer("pi-cq5-goal-on-c-a");
  s.Ask("pi-cq2-step0");
  std::map<std::string, std::string> labels;
  ArgumentationFramework back = ReadStructured(ExportAF(s, "structured"), &labels);
  CHECK(back.nodes() == s.af().nodes());
  CHECK(back.attacks() == s.af().attacks());
  GroundedResult g = s.Grounded();
  for (const auto& [id, kind] : s.af().nodes()) {
    CHECK(labels.at(id) == LabelName(g.label(id)));
  }
  CHECK(labels.at("pi") == "out");
  CHECK(ExportAF(s, "json") == ExportAF(s, "structured"));
}

TEST_CASE("scripted dialogue") {
  SUBCASE("CQ1 then the first action") {
    Session s = Fresh();
    std::istringstream in("1\n2\nquit\n");
    std::ostringstream out;
    CHECK(RunDialogue(s, in, out) == 0);
    const std::string text = out.str();
    CHECK(text.find("[1] CQ1: Why is") != std::string::npos);
    CHECK(text.find("Argument a0 (action argument, Arg_a)") != std::string::npos);
    CHECK(s.HasArgument("a0"));
    CHECK(s.AnswerOf("cq1") == std::optional<std::string>("pi"));
  }
  SUBCASE("immediate quit") {
    Session s = Fresh();
    std::istringstream in("quit\n");
    std::ostringstream out;
    CHECK(RunDialogue(s, in, out) == 0);
    CHECK(s.arguments().size() == 1);
    CHECK(out.str().find("Property 1 (every asked CQ is answered): true") != std::string::npos);
  }
  SUBCASE("invalid input re-prompts") {
    Session s = Fresh();
    std::istringstream in("99\nfoo\n");
    std::ostringstream out;
    CHECK(RunDialogue(s, in, out) == 0);
    CHECK(out.str().find("Invalid selection") != std::string::npos);
  }
  SUBCASE("explore and accept") {
    Session s = Fresh();
    std::istringstream in("explore\naccept\n");
    std::ostringstream out;
    CHECK(RunDialogue(s, in, out) == 0);
    CHECK(s.complete());
    const std::string text = out.str();
    for (int p = 1; p <= 4; ++p) {
      CHECK(text.find("Property " + std::to_string(p) + " (") != std::string::npos);
    }
    CHECK(text.find(": false") == std::string::npos);
  }
}
