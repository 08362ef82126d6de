#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "xplain/commands.h"
#include "xplain/service.h"

namespace {

void AddInputs(CLI::App* cmd, xplain::Paths* paths) {
  cmd->add_option("-d,--domain", paths->domain, "PDDL domain file")->required();
  cmd->add_option("-p,--problem", paths->problem, "PDDL problem file")->required();
  cmd->add_option("-s,--plan-file", paths->plan, "plan file")->required();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Validate STRIPS plans and explain them with argument schemes."};
  app.require_subcommand(1);

  xplain::Paths paths;
  std::size_t bound = 10;

  CLI::App* validate = app.add_subcommand("validate", "check whether the plan is a solution");
  AddInputs(validate, &paths);

  CLI::App* explain = app.add_subcommand("explain", "print one explanation argument");
  AddInputs(explain, &paths);
  bool plan_flag = false;
  std::optional<std::size_t> action, state, step;
  std::optional<std::string> goal;
  auto* plan_opt = explain->add_flag("--plan", plan_flag, "summary argument for the plan");
  auto* action_opt = explain->add_option("--action", action, "single-action step index");
  auto* state_opt = explain->add_option("--state", state, "trace state index");
  auto* goal_opt = explain->add_option("--goal", goal, "goal atom, e.g. ON(C,A)");
  auto* step_opt = explain->add_option("--step", step, "concurrent step index");
  for (auto* o : {plan_opt, action_opt, state_opt, goal_opt, step_opt}) {
    for (auto* other : {plan_opt, action_opt, state_opt, goal_opt, step_opt}) {
      if (o != other) o->excludes(other);
    }
  }
  explain->add_option("--bound", bound, "feasibility search bound (steps)")
      ->check(CLI::PositiveNumber);

  CLI::App* dialogue = app.add_subcommand("dialogue", "interactive critical-question dialogue");
  AddInputs(dialogue, &paths);
  dialogue->add_option("--bound", bound, "feasibility search bound (steps)")
      ->check(CLI::PositiveNumber);

  CLI::App* export_af = app.add_subcommand("export-af", "print the argumentation framework");
  AddInputs(export_af, &paths);
  std::string format = "dot";
  bool fresh = false;
  export_af->add_option("--format", format, "dot or structured");
  export_af->add_flag("--fresh", fresh, "export the fresh session instead of the fully explored one");
  export_af->add_option("--bound", bound, "feasibility search bound (steps)")
      ->check(CLI::PositiveNumber);

  CLI::App* serve = app.add_subcommand("serve", "run the HTTP session service");
  xplain::ServiceConfig config;
  int ttl = static_cast<int>(config.ttl.count());
  serve->add_option("--port", config.port, "listen port (XPLAIN_PORT overrides)");
  serve->add_option("--host", config.host, "listen address");
  serve->add_option("--ttl", ttl, "session time-to-live in seconds")
      ->check(CLI::PositiveNumber);
  serve->add_option("--bound", config.feasibility_bound,
                    "feasibility search bound (steps)")
      ->check(CLI::PositiveNumber);
  serve->add_option("--max-objects", config.limits.max_objects,
                    "reject problems with more objects")
      ->check(CLI::PositiveNumber);
  serve->add_option("--max-ground-actions", config.limits.max_ground_actions,
                    "reject domains that ground to more actions")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*validate) return xplain::CmdValidate(paths, std::cout, std::cerr);
    if (*explain) {
      xplain::ExplainTarget target;
      using Kind = xplain::ExplainTarget::Kind;
      if (action) {
        target = {Kind::kAction, *action, {}};
      } else if (state) {
        target = {Kind::kState, *state, {}};
      } else if (step) {
        target = {Kind::kStep, *step, {}};
      } else if (goal) {
        target = {Kind::kGoal, 0, *goal};
      }
      return xplain::CmdExplain(paths, target, bound, std::cout, std::cerr);
    }
    if (*dialogue) {
      return xplain::CmdDialogue(paths, bound, std::cin, std::cout, std::cerr);
    }
    if (*export_af) {
      return xplain::CmdExportAF(paths, format, !fresh, bound, std::cout, std::cerr);
    }
    if (*serve) {
      config.ttl = std::chrono::seconds(ttl);
      return xplain::ServeHttp(xplain::ApplyEnvironment(config));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
