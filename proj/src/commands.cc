#include "xplain/commands.h"

#include <algorithm>
#include <cctype>
#include <istream>
#include <ostream>
#include <sstream>

#include "xplain/pddl.h"

namespace xplain {

InputError::InputError(std::string input, const std::string& message,
                       std::optional<std::size_t> line,
                       std::optional<std::size_t> column)
    : Error(input + (line ? ":" + std::to_string(*line) + ":" +
                                std::to_string(column.value_or(0))
                          : std::string()) +
            ": " + message),
      input_(std::move(input)),
      detail_(message),
      line_(line),
      column_(column) {}

namespace {

template <typename F>
auto Tagged(const std::string& input, F&& f) {
  try {
    return f();
  } catch (const ParseError& e) {
    throw InputError(input, e.message(), e.line(), e.column());
  } catch (const InputError&) {
    throw;
  } catch (const Error& e) {
    throw InputError(input, e.what());
  }
}

}  // namespace

Inputs LoadInputs(const std::string& domain_text,
                  const std::string& problem_text, const std::string& plan_text,
                  const Limits& limits) {
  DomainAst domain = Tagged("domain", [&] { return ParseDomain(domain_text); });
  ProblemAst ast =
      Tagged("problem", [&] { return ParseProblem(problem_text, domain); });
  if (ast.objects.size() > limits.max_objects) {
    throw InputError("problem", "the problem declares " +
                                    std::to_string(ast.objects.size()) +
                                    " objects; the limit is " +
                                    std::to_string(limits.max_objects));
  }
  GroundOptions options;
  options.max_ground_actions = limits.max_ground_actions;
  Inputs inputs;
  inputs.problem = Tagged("problem", [&] { return Ground(domain, ast, options); });
  inputs.plan = Tagged("plan", [&] { return ParsePlan(plan_text, inputs.problem); });
  return inputs;
}

Inputs LoadInputFiles(const std::string& domain_path,
                      const std::string& problem_path,
                      const std::string& plan_path, const Limits& limits) {
  std::string domain = Tagged("domain", [&] { return ReadFile(domain_path); });
  std::string problem = Tagged("problem", [&] { return ReadFile(problem_path); });
  std::string plan = Tagged("plan", [&] { return ReadFile(plan_path); });
  return LoadInputs(domain, problem, plan, limits);
}

std::string RenderVerdict(const SolutionVerdict& verdict) {
  std::ostringstream ss;
  ss << (verdict.is_solution ? "The plan is a solution.\n"
                             : "The plan is NOT a solution.\n");
  for (int c = 1; c <= 4; ++c) {
    std::vector<const VerdictFailure*> failures;
    for (const VerdictFailure& f : verdict.failures) {
      if (f.condition == c) failures.push_back(&f);
    }
    ss << "Condition " << c << ": " << (failures.empty() ? "ok" : "FAILED")
       << "\n";
    for (const VerdictFailure* f : failures) {
      ss << "  ";
      if (f->step) ss << "step " << *f->step << ": ";
      ss << f->explanation;
      if (!f->missing.empty()) ss << " [missing " << JoinAtoms(f->missing) << "]";
      ss << "\n";
    }
  }
  ss << "Satisfied goals (" << verdict.satisfied_goals.size()
     << "): " << JoinGoals(verdict.satisfied_goals) << "\n";
  return ss.str();
}

std::string RenderProperties(const PropertyReport& r) {
  auto b = [](bool v) { return v ? "true" : "false"; };
  auto list = [](const std::vector<std::string>& ids) {
    std::string out;
    for (const std::string& id : ids) out += (out.empty() ? "" : ", ") + id;
    return out.empty() ? std::string("none") : out;
  };
  std::ostringstream ss;
  ss << "Property 1 (every asked CQ is answered): " << b(r.p1) << "\n"
     << "Property 2 (summary argument in the grounded extension): " << b(r.p2)
     << "\n"
     << "Property 3 (summary in Gr iff every goal argument in Gr): " << b(r.p3)
     << "\n"
     << "Property 4 (proxy: P1-P3 and session accepted): " << b(r.p4) << "\n"
     << "Session accepted: " << b(r.complete) << "\n"
     << "Unanswered CQs before the check: " << list(r.unanswered) << "\n"
     << "Missing goal arguments: " << list(r.missing_goal_arguments) << "\n"
     << "Materialized answers: " << list(r.materialized_answers) << "\n";
  if (!r.unanswerable.empty()) {
    ss << "Unanswerable CQs: " << list(r.unanswerable) << "\n";
  }
  return ss.str();
}

std::string RenderLabels(const Session& session) {
  const GroundedResult gr = session.Grounded();
  std::ostringstream ss;
  for (const auto& [id, kind] : session.af().nodes()) {
    ss << (kind == NodeKind::kArgument ? "arg " : "cq  ") << id << ": "
       << LabelName(gr.label(id)) << "\n";
  }
  ss << "in=" << gr.in.size() << " out=" << gr.out.size()
     << " undec=" << gr.undec.size() << "\n";
  return ss.str();
}

int CmdValidate(const Paths& paths, std::ostream& out, std::ostream& err) {
  Inputs inputs;
  try {
    inputs = LoadInputFiles(paths.domain, paths.problem, paths.plan);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  const SolutionVerdict verdict = CheckSolution(inputs.problem, inputs.plan);
  out << RenderVerdict(verdict);
  return verdict.is_solution ? 0 : 1;
}

namespace {

std::string ValidTargets(const Session& session) {
  const Trace& trace = session.trace();
  std::string actions;
  std::string steps;
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    std::string& list = trace.steps[i].step.concurrent() ? steps : actions;
    list += (list.empty() ? "" : ", ") + std::to_string(i);
  }
  std::string goals;
  for (const Goal& g : session.problem().goals) {
    goals += (goals.empty() ? "" : ", ") + g.ToString();
  }
  std::ostringstream ss;
  ss << "valid targets:\n"
     << "  --plan\n"
     << "  --action=IDX  single-action steps: "
     << (actions.empty() ? "none" : actions) << "\n"
     << "  --step=IDX    concurrent steps: " << (steps.empty() ? "none" : steps)
     << "\n"
     << "  --state=IDX   0.." << trace.states.size() - 1 << "\n"
     << "  --goal=ATOM   for example " << (goals.empty() ? "none" : goals) << "\n";
  return ss.str();
}

}  // namespace

int CmdExplain(const Paths& paths, const ExplainTarget& target,
               std::size_t feasibility_bound, std::ostream& out,
               std::ostream& err) {
  Inputs inputs;
  try {
    inputs = LoadInputFiles(paths.domain, paths.problem, paths.plan);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  Session session = Session::Create(std::move(inputs.problem),
                                    std::move(inputs.plan), feasibility_bound);
  if (!session.has_summary()) {
    err << RenderVerdict(session.verdict());
    return 1;
  }
  const Trace& trace = session.trace();
  auto usage = [&](const std::string& why) {
    err << "error: " << why << "\n" << ValidTargets(session);
    return 2;
  };
  using Kind = ExplainTarget::Kind;
  try {
    Argument argument;
    switch (target.kind) {
      case Kind::kPlan:
        argument = session.summary();
        break;
      case Kind::kAction:
        if (target.index >= trace.steps.size() ||
            trace.steps[target.index].step.concurrent()) {
          return usage("--action=" + std::to_string(target.index) +
                       " is not a single-action step");
        }
        argument = BuildActionArgument(session.problem(), trace, target.index);
        break;
      case Kind::kStep:
        if (target.index >= trace.steps.size() ||
            !trace.steps[target.index].step.concurrent()) {
          return usage("--step=" + std::to_string(target.index) +
                       " is not a concurrent step");
        }
        argument = BuildConcurrentArgument(session.problem(), trace, target.index);
        break;
      case Kind::kState:
        if (target.index >= trace.states.size()) {
          return usage("--state=" + std::to_string(target.index) +
                       " is outside the trace");
        }
        argument = target.index == 0 ? InitialStateArgument(trace)
                                     : BuildStateArgument(trace, target.index);
        break;
      case Kind::kGoal: {
        Atom atom;
        try {
          atom = ParseAtomText(target.goal);
          session.problem().CheckAtom(atom);
        } catch (const Error& e) {
          return usage("--goal=" + target.goal + ": " + e.what());
        }
        const Goal goal = Goal::Of(atom);
        try {
          argument = BuildGoalArgument(session.problem(), trace, goal,
                                       feasibility_bound);
        } catch (const HoldsInitiallyError&) {
          argument = HoldsInitiallyArgument(trace, goal);
        }
        break;
      }
    }
    out << RenderText(argument);
    return 0;
  } catch (const ExplanationError& e) {
    err << "no explanation: " << e.what() << "\n";
    return 1;
  }
}

namespace {

std::string Trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

void PrintMenu(const Session& session, const std::vector<CQInstance>& menu,
               const std::string& current, std::ostream& out) {
  if (menu.empty()) {
    out << "No critical questions apply to " << current << ".\n";
    return;
  }
  out << "Critical questions for " << current << ":\n";
  for (std::size_t i = 0; i < menu.size(); ++i) {
    const CQInstance& cq = menu[i];
    out << "  [" << i + 1 << "] CQ" << cq.kind;
    if (cq.premise_index > 0) out << " on premise " << cq.premise_index;
    out << ": " << cq.question;
    if (auto answer = session.AnswerOf(cq.id)) out << " (answered by " << *answer << ")";
    out << "\n";
  }
}

}  // namespace

int RunDialogue(Session& session, std::istream& in, std::ostream& out) {
  if (!session.has_summary()) {
    out << RenderVerdict(session.verdict());
    return 1;
  }
  std::string current = session.summary().id;
  out << RenderText(session.summary());
  std::vector<CQInstance> menu = session.AvailableCQs(current);
  PrintMenu(session, menu, current, out);
  out << "Enter a number, show ID, af, explore, accept, help or quit.\n";

  std::string line;
  while (true) {
    out << "> " << std::flush;
    if (!std::getline(in, line)) break;
    const std::string cmd = Trim(line);
    if (cmd.empty()) continue;
    if (cmd == "quit" || cmd == "q" || cmd == "exit") break;
    if (cmd == "help") {
      out << "  N        answer critical question N of the menu\n"
          << "  show ID  display a presented argument and its questions\n"
          << "  af       grounded labels of the current framework\n"
          << "  explore  answer every remaining critical question\n"
          << "  accept   mark the explanation as acceptable\n"
          << "  quit     print the property report and leave\n";
      continue;
    }
    if (cmd == "af") {
      out << RenderLabels(session);
      continue;
    }
    if (cmd == "accept") {
      session.MarkComplete();
      out << "Session marked complete.\n";
      continue;
    }
    if (cmd == "explore") {
      std::vector<std::string> failed = session.ExploreAll();
      out << "Explored: " << session.arguments().size() << " arguments, "
          << session.asked().size() << " critical questions.\n";
      for (const std::string& id : failed) out << "  unanswerable: " << id << "\n";
      continue;
    }
    if (cmd.rfind("show ", 0) == 0) {
      const std::string id = Trim(cmd.substr(5));
      if (!session.HasArgument(id)) {
        out << "No argument " << id << " in this session.\n";
        continue;
      }
      current = id;
      out << RenderText(session.argument(id));
      menu = session.AvailableCQs(current);
      PrintMenu(session, menu, current, out);
      continue;
    }
    std::size_t choice = 0;
    bool numeric = std::all_of(cmd.begin(), cmd.end(), [](char c) {
      return std::isdigit(static_cast<unsigned char>(c));
    });
    if (numeric && cmd.size() < 6) choice = std::stoul(cmd);
    if (choice < 1 || choice > menu.size()) {
      out << "Invalid selection '" << cmd << "'; type help for commands.\n";
      continue;
    }
    const CQInstance cq = menu[choice - 1];
    try {
      const Argument& answer = session.Answer(cq.id);
      current = answer.id;
      out << RenderText(answer);
      menu = session.AvailableCQs(current);
      PrintMenu(session, menu, current, out);
    } catch (const ExplanationError& e) {
      out << "No explanation for " << cq.id << ": " << e.what() << "\n";
    }
  }
  out << RenderProperties(CheckProperties(session));
  return 0;
}

int CmdDialogue(const Paths& paths, std::size_t feasibility_bound,
                std::istream& in, std::ostream& out, std::ostream& err) {
  Inputs inputs;
  try {
    inputs = LoadInputFiles(paths.domain, paths.problem, paths.plan);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  Session session = Session::Create(std::move(inputs.problem),
                                    std::move(inputs.plan), feasibility_bound);
  return RunDialogue(session, in, out);
}

int CmdExportAF(const Paths& paths, const std::string& format, bool explore,
                std::size_t feasibility_bound, std::ostream& out,
                std::ostream& err) {
  Inputs inputs;
  try {
    inputs = LoadInputFiles(paths.domain, paths.problem, paths.plan);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  Session session = Session::Create(std::move(inputs.problem),
                                    std::move(inputs.plan), feasibility_bound);
  if (explore && session.has_summary()) session.ExploreAll();
  try {
    out << ExportAF(session, format);
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace xplain
