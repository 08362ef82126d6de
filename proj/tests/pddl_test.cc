#include <doctest.h>

#include <random>

#include "random_inputs.h"
#include "support.h"
#include "xplain/pddl.h"

using namespace xplain;
using xplain::testing::A;
using xplain::testing::LoadBlocks;
using xplain::testing::Gen;
using xplain::testing::RandomDomain;
using xplain::testing::RandomPlanText;
using xplain::testing::RandomProblem;

namespace {

const char* kTinyDomain = R"(
(define (domain tiny)
  (:requirements :strips)
  (:predicates (p ?x) (q ?x ?y))
  (:action go :parameters (?a ?b)
    :precondition (p ?a)
    :effect (and (q ?a ?b) (not (p ?a)))))
)";

template <typename F>
ParseError ExpectParseError(F&& f) {
  try {
    f();
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("expected a ParseError");
  return ParseError("", 0, 0);
}

}  // namespace

TEST_CASE("blocks fixtures parse") {
  const auto& b = LoadBlocks();
  DomainAst d = ParseDomain(b.domain_text);
  CHECK(d.name == "BLOCKSWORLD");
  CHECK(d.requirements == std::vector<std::string>{":STRIPS"});
  REQUIRE(d.actions.size() == 2);
  CHECK(d.actions[0].name == "UNSTACK");
  CHECK(d.actions[0].precondition ==
        std::vector<Atom>{A("CLEAR", {"?X"}), A("ON", {"?X", "?Y"})});
  CHECK(d.actions[0].del == std::vector<Atom>{A("ON", {"?X", "?Y"})});

  ProblemAst p = ParseProblem(b.problem_text, d);
  CHECK(p.name == "FOUR-BLOCKS");
  CHECK(p.objects.size() == 4);
  CHECK(p.goal.size() == 6);

  PlanText plan = ParsePlanText(b.plan_text);
  REQUIRE(plan.steps.size() == 4);
  CHECK(plan.steps[3].concurrent);
  CHECK(plan.steps[3].calls.size() == 2);
  CHECK(b.problem.initial == xplain::testing::ExpectedBlocksTrace()[0]);
}

TEST_CASE("fixtures survive serialize and re-parse") {
  const auto& b = LoadBlocks();
  DomainAst d = ParseDomain(b.domain_text);
  CHECK(ParseDomain(SerializeDomain(d)) == d);
  ProblemAst p = ParseProblem(b.problem_text, d);
  CHECK(ParseProblem(SerializeProblem(p), d) == p);
  PlanText t = ParsePlanText(b.plan_text);
  CHECK(ParsePlanText(SerializePlanText(t)) == t);
  CHECK(ParsePlan(SerializePlan(b.plan), b.problem) == b.plan);
}

TEST_CASE("parse errors carry positions") {
  ParseError e = ExpectParseError([] { ParseDomain(""); });
  CHECK(e.line() == 1);
  CHECK(e.column() == 1);

  try {
    ParseDomain("(define (domain d)\n  (:requirements :strips :adl))");
    FAIL("expected UnsupportedRequirementError");
  } catch (const UnsupportedRequirementError& u) {
    CHECK(u.requirement() == ":adl");
    CHECK(u.line() == 2);
    CHECK(u.column() == 26);
  }

  e = ExpectParseError([] {
    ParseDomain("(define (domain d) (:requirements :strips)\n"
                "(:predicates (p ?x))\n"
                "(:action a :parameters (?x) :precondition (not (p ?x)) :effect (p ?x)))");
  });
  CHECK(e.line() == 3);
  CHECK(e.message().find("negative preconditions") != std::string::npos);

  e = ExpectParseError([] {
    ParseDomain("(define (domain d) (:requirements :strips)\n"
                "(:predicates (p ?x))\n"
                "(:action a :parameters (?x) :effect (p ?y)))");
  });
  CHECK(e.message().find("not in the parameter list") != std::string::npos);

  e = ExpectParseError([] {
    ParseDomain("(define (domain d) (:requirements :strips)\n"
                "(:predicates (p ?x))\n"
                "(:action a :parameters (?x) :effect (p c)))");
  });
  CHECK(e.message().find("constant") != std::string::npos);

  e = ExpectParseError([] {
    ParseDomain("(define (domain d) (:requirements :strips)\n"
                "(:predicates (p ?x - t)))");
  });
  CHECK(e.message().find(":typing") != std::string::npos);

  e = ExpectParseError([] {
    ParseDomain("(define (domain d) (:requirements :strips) (:functions (f)))");
  });
  CHECK(e.message().find("unsupported domain section") != std::string::npos);

  e = ExpectParseError([] { ParseDomain("(define (domain d)"); });
  CHECK(e.line() >= 1);
}

TEST_CASE("problem cross checks against the domain") {
  DomainAst d = ParseDomain(kTinyDomain);
  CHECK_THROWS_AS(ParseProblem("(define (problem x) (:domain other) (:objects a)"
                               " (:init) (:goal (p a)))",
                               d),
                  ParseError);
  CHECK_THROWS_AS(ParseProblem("(define (problem x) (:domain tiny) (:objects a)"
                               " (:init (r a)) (:goal (p a)))",
                               d),
                  ParseError);
  CHECK_THROWS_AS(ParseProblem("(define (problem x) (:domain tiny) (:objects a)"
                               " (:init (p b)) (:goal (p a)))",
                               d),
                  ParseError);
  CHECK_THROWS_AS(ParseProblem("(define (problem x) (:domain tiny) (:objects a)"
                               " (:init (q a)) (:goal (p a)))",
                               d),
                  ParseError);
  CHECK_THROWS_AS(ParseProblem("(define (problem x) (:domain tiny) (:objects a)"
                               " (:init) (:goal (not (p a))))",
                               d),
                  ParseError);
}

TEST_CASE("plan text errors") {
  const auto& b = LoadBlocks();
  auto message = [&](const std::string& text) {
    return ExpectParseError([&] { ParsePlan(text, b.problem); }).message();
  };
  CHECK(message("{}").find("empty concurrent group") != std::string::npos);
  CHECK(message("{(unstack a b)}").find("at least two") != std::string::npos);
  CHECK(message("(unstack a b) (unstack b c)").find("one action per line") !=
        std::string::npos);
  CHECK(message("(fly a b)").find("unknown action") != std::string::npos);
  CHECK(message("(unstack a)").find("arguments") != std::string::npos);
  CHECK(message("(unstack a z)").find("undeclared object") != std::string::npos);
  CHECK(message("(unstack a a)").find("no ground action UNSTACK(A,A)") !=
        std::string::npos);

  ParseError e = ExpectParseError([&] { ParsePlan("(unstack a b)\n  (fly a b)", b.problem); });
  CHECK(e.line() == 2);
  CHECK(e.column() == 3);
}

TEST_CASE("grounding with types and zero-parameter actions") {
  DomainAst d = ParseDomain(R"(
    (define (domain typed)
      (:requirements :strips :typing)
      (:types block table - object)
      (:predicates (on ?b - block ?t - table) (ready))
      (:action start :parameters () :precondition () :effect (ready))
      (:action put :parameters (?b - block ?t - table)
        :precondition (ready) :effect (on ?b ?t)))
  )");
  ProblemAst p = ParseProblem(R"(
    (define (problem t1) (:domain typed)
      (:objects b1 b2 - block t1 - table)
      (:init) (:goal (and (on b1 t1) (on b2 t1))))
  )", d);
  PlanningProblem g = Ground(d, p);
  // start, put(b1,t1), put(b2,t1)
  CHECK(g.ground_actions.size() == 3);
  CHECK(g.FindAction("START", {}) != nullptr);
  CHECK(g.FindAction("PUT", {"B1", "T1"}) != nullptr);
  CHECK(g.FindAction("PUT", {"T1", "B1"}) == nullptr);
  GroundOptions tight;
  tight.max_ground_actions = 2;
  CHECK_THROWS_AS(Ground(d, p, tight), Error);
}

TEST_CASE("delete-then-add keeps atoms added by the same action") {
  DomainAst d = ParseDomain(R"(
    (define (domain flip) (:requirements :strips)
      (:predicates (p ?x))
      (:action touch :parameters (?x) :precondition (p ?x)
        :effect (and (not (p ?x)) (p ?x)))))");
  ProblemAst p = ParseProblem(
      "(define (problem f) (:domain flip) (:objects a) (:init (p a)) (:goal (p a)))",
      d);
  PlanningProblem g = Ground(d, p);
  REQUIRE(g.ground_actions.size() == 1);
  CHECK(g.ground_actions[0].del.empty());
  CHECK(g.ground_actions[0].add == AtomSet{A("P", {"A"})});
}

TEST_CASE("atom text forms") {
  CHECK(ParseAtomText("ON(C,A)") == A("ON", {"C", "A"}));
  CHECK(ParseAtomText(" on( c , a ) ") == A("ON", {"C", "A"}));
  CHECK(ParseAtomText("(on c a)") == A("ON", {"C", "A"}));
  CHECK(ParseAtomText("handempty") == A("HANDEMPTY"));
  CHECK_THROWS_AS(ParseAtomText("ON(C,"), ParseError);
  CHECK_THROWS_AS(ParseAtomText(""), ParseError);
}

TEST_CASE("trace serialization") {
  const auto& b = LoadBlocks();
  const std::string text = SerializeTrace(RunPlan(b.problem, b.plan).trace);
  CHECK(text.rfind("S0: CLEAR(A) ∧ ON(A,B) ∧ ON(B,C) ∧ ON(C,D) ∧ ONTABLE(D)\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 5);
}

// ---------------------------------------------------------------------------
// Randomized round trips

TEST_CASE("property: randomized parse(serialize(x)) == x") {
  Gen g(7u);
  int domains = 0, problems = 0, plans = 0;
  for (int i = 0; i < 150; ++i) {
    DomainAst d = RandomDomain(g);
    const std::string text = SerializeDomain(d);
    DomainAst back = ParseDomain(text);
    REQUIRE_MESSAGE(back == d, text);
    ++domains;

    ProblemAst p = RandomProblem(g, d);
    const std::string ptext = SerializeProblem(p);
    ProblemAst pback = ParseProblem(ptext, d);
    REQUIRE_MESSAGE(pback == p, ptext);
    ++problems;

    PlanText t = RandomPlanText(g);
    REQUIRE(ParsePlanText(SerializePlanText(t)) == t);
    ++plans;

    // The grounded problem must also be stable under the round trip.
    CHECK(Ground(back, pback).ground_actions == Ground(d, p).ground_actions);
  }
  CHECK(domains >= 100);
  CHECK(problems >= 100);
  CHECK(plans >= 100);
}
