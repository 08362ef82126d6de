#ifndef XPLAIN_PDDL_H_
#define XPLAIN_PDDL_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "xplain/planning.h"

namespace xplain {

// Front end for a STRIPS subset of PDDL:
//
//   (:requirements :strips [:typing])
//   (:types ...) (:predicates ...) (:action NAME :parameters (...)
//       :precondition <conjunction of atoms> :effect <conjunction of literals>)
//
// plus a line-oriented plan format where a concurrent step is written as
// "{(a x) (b y)}". Symbols are case-insensitive and stored upper case.

inline constexpr const char* kRootType = "OBJECT";

struct TypeDecl {
  std::string name;
  std::string parent;

  bool operator==(const TypeDecl&) const = default;
};

struct DomainAst {
  std::string name;
  std::vector<std::string> requirements;  // ":STRIPS", ":TYPING"
  std::vector<TypeDecl> types;            // declaration order
  std::vector<PredicateDecl> predicates;  // declaration order
  std::vector<ActionTemplate> actions;

  bool typing() const;
  bool operator==(const DomainAst&) const = default;
};

struct ObjectDecl {
  std::string name;
  std::string type;

  bool operator==(const ObjectDecl&) const = default;
};

struct ProblemAst {
  std::string name;
  std::string domain;
  std::vector<ObjectDecl> objects;
  std::vector<Atom> init;
  std::vector<Atom> goal;

  bool operator==(const ProblemAst&) const = default;
};

struct ActionCall {
  std::string name;
  std::vector<std::string> args;
  std::size_t line = 0;
  std::size_t column = 0;

  bool operator==(const ActionCall& other) const {
    return name == other.name && args == other.args;
  }
};

struct PlanTextStep {
  bool concurrent = false;
  std::vector<ActionCall> calls;

  bool operator==(const PlanTextStep&) const = default;
};

struct PlanText {
  std::vector<PlanTextStep> steps;

  bool operator==(const PlanText&) const = default;
};

struct GroundOptions {
  /// Distinct parameters of one template take distinct constants, so the
  /// blocks-world template STACK(?x,?y) never yields STACK(A,A).
  bool distinct_parameters = true;
  std::size_t max_ground_actions = 1000000;
};

DomainAst ParseDomain(std::string_view text);
/// Parses and cross-checks the problem against `domain`.
ProblemAst ParseProblem(std::string_view text, const DomainAst& domain);
PlanText ParsePlanText(std::string_view text);
/// Parses a plan file and resolves every call to a ground action of `problem`.
Plan ParsePlan(std::string_view text, const PlanningProblem& problem);

/// Builds the planning problem by exhaustive type-respecting substitution.
/// Each goal-state atom becomes a singleton goal.
PlanningProblem Ground(const DomainAst& domain, const ProblemAst& problem,
                       const GroundOptions& options = {});

/// Convenience: parse + ground.
PlanningProblem LoadProblem(std::string_view domain_text,
                            std::string_view problem_text,
                            const GroundOptions& options = {});

std::string SerializeDomain(const DomainAst& domain);
std::string SerializeProblem(const ProblemAst& problem);
std::string SerializePlan(const Plan& plan);
std::string SerializePlanText(const PlanText& plan);
/// One line per state: "S<i>: ATOM ∧ ATOM ...", atoms in lexicographic order.
std::string SerializeTrace(const Trace& trace);

/// Parses "ON(C,A)", "on(c, a)" or "(on c a)" into an upper-case atom.
Atom ParseAtomText(std::string_view text);

/// Reads a whole file; throws Error when it cannot be opened.
std::string ReadFile(const std::string& path);

}  // namespace xplain

#endif  // XPLAIN_PDDL_H_
