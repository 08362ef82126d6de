#ifndef XPLAIN_COMMANDS_H_
#define XPLAIN_COMMANDS_H_

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>

#include "xplain/dialogue.h"
#include "xplain/planning.h"

namespace xplain {

struct Limits {
  std::size_t max_objects = 1000;
  std::size_t max_ground_actions = 1000000;
};

/// A parse or load failure tagged with the input it came from
/// ("domain", "problem" or "plan").
class InputError : public Error {
 public:
  InputError(std::string input, const std::string& message,
             std::optional<std::size_t> line = std::nullopt,
             std::optional<std::size_t> column = std::nullopt);

  const std::string& input() const { return input_; }
  const std::string& detail() const { return detail_; }
  std::optional<std::size_t> line() const { return line_; }
  std::optional<std::size_t> column() const { return column_; }

 private:
  std::string input_;
  std::string detail_;
  std::optional<std::size_t> line_;
  std::optional<std::size_t> column_;
};

struct Inputs {
  PlanningProblem problem;
  Plan plan;
};

/// Parses and grounds the three texts. Throws InputError.
Inputs LoadInputs(const std::string& domain_text,
                  const std::string& problem_text, const std::string& plan_text,
                  const Limits& limits = {});
/// Same, reading the files first.
Inputs LoadInputFiles(const std::string& domain_path,
                      const std::string& problem_path,
                      const std::string& plan_path, const Limits& limits = {});

struct Paths {
  std::string domain;
  std::string problem;
  std::string plan;
};

/// Per-condition verdict. Exit status 0 for a solution, 1 otherwise, 2 for
/// unreadable or malformed input.
int CmdValidate(const Paths& paths, std::ostream& out, std::ostream& err);

struct ExplainTarget {
  enum class Kind { kPlan, kAction, kStep, kState, kGoal };
  Kind kind = Kind::kPlan;
  std::size_t index = 0;
  std::string goal;  // atom text for kGoal
};

/// Renders one argument. Exit status 0 on success, 1 when the plan is not a
/// solution or the target has no explanation, 2 for input or usage errors.
int CmdExplain(const Paths& paths, const ExplainTarget& target,
               std::size_t feasibility_bound, std::ostream& out,
               std::ostream& err);

/// Interactive loop over `in`. Commands: a menu number answers that CQ,
/// "show ID", "af", "explore", "accept", "help", "quit".
int RunDialogue(Session& session, std::istream& in, std::ostream& out);
int CmdDialogue(const Paths& paths, std::size_t feasibility_bound,
                std::istream& in, std::ostream& out, std::ostream& err);

/// Prints the AF of a session in `format`. With `explore`, answers every CQ
/// first.
int CmdExportAF(const Paths& paths, const std::string& format, bool explore,
                std::size_t feasibility_bound, std::ostream& out,
                std::ostream& err);

std::string RenderVerdict(const SolutionVerdict& verdict);
std::string RenderProperties(const PropertyReport& report);
std::string RenderLabels(const Session& session);

}  // namespace xplain

#endif  // XPLAIN_COMMANDS_H_
