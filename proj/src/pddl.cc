#include "xplain/pddl.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace xplain {

namespace {

std::string Upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool IsVariable(const std::string& symbol) {
  return !symbol.empty() && symbol.front() == '?';
}

// ---------------------------------------------------------------------------
// S-expression reader
// ---------------------------------------------------------------------------

struct Node {
  bool is_list = false;
  std::string symbol;  // upper case
  std::string raw;     // as written
  std::vector<Node> items;
  std::size_t line = 1;
  std::size_t column = 1;
};

[[noreturn]] void Fail(const Node& node, const std::string& message) {
  throw ParseError(message, node.line, node.column);
}

class Reader {
 public:
  Reader(std::string_view text, std::size_t line = 1, std::size_t column = 1)
      : text_(text), line_(line), column_(column) {}

  std::vector<Node> ReadAll() {
    std::vector<Node> out;
    SkipBlank();
    while (pos_ < text_.size()) {
      out.push_back(ReadNode());
      SkipBlank();
    }
    return out;
  }

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  void Advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void SkipBlank() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') Advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        Advance();
      } else {
        break;
      }
    }
  }

  Node ReadNode() {
    Node node;
    node.line = line_;
    node.column = column_;
    char c = text_[pos_];
    if (c == ')') throw ParseError("unexpected ')'", line_, column_);
    if (c == '(') {
      node.is_list = true;
      Advance();
      while (true) {
        SkipBlank();
        if (pos_ >= text_.size()) {
          throw ParseError("unexpected end of input: unclosed '(' opened at " +
                               std::to_string(node.line) + ":" +
                               std::to_string(node.column),
                           line_, column_);
        }
        if (text_[pos_] == ')') {
          Advance();
          return node;
        }
        node.items.push_back(ReadNode());
      }
    }
    std::size_t start = pos_;
    while (pos_ < text_.size()) {
      char d = text_[pos_];
      if (d == '(' || d == ')' || d == ';' ||
          std::isspace(static_cast<unsigned char>(d))) {
        break;
      }
      if (d == '{' || d == '}') {
        throw ParseError(std::string("unexpected '") + d + "'", line_, column_);
      }
      Advance();
    }
    node.raw = std::string(text_.substr(start, pos_ - start));
    node.symbol = Upper(node.raw);
    return node;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_;
  std::size_t column_;
};

const Node& ReadSingleForm(std::vector<Node>& forms, std::string_view what) {
  if (forms.empty()) {
    throw ParseError("expected '(' starting a " + std::string(what) +
                         " definition",
                     1, 1);
  }
  if (forms.size() > 1) Fail(forms[1], "unexpected text after the definition");
  if (!forms[0].is_list) Fail(forms[0], "expected '('");
  return forms[0];
}

const std::string& ExpectSymbol(const Node& node, const std::string& what) {
  if (node.is_list) Fail(node, "expected " + what + ", found a list");
  return node.symbol;
}

void ExpectList(const Node& node, const std::string& what) {
  if (!node.is_list) Fail(node, "expected " + what + ", found '" + node.raw + "'");
}

/// Validates the (define (KIND name) ...) header and returns the name.
std::string ReadHeader(const Node& top, const std::string& kind) {
  if (top.items.empty() || top.items[0].is_list ||
      top.items[0].symbol != "DEFINE") {
    Fail(top, "expected (define ...)");
  }
  if (top.items.size() < 2) Fail(top, "missing (" + Lower(kind) + " NAME)");
  const Node& header = top.items[1];
  ExpectList(header, "(" + Lower(kind) + " NAME)");
  if (header.items.size() != 2 || header.items[0].is_list ||
      header.items[0].symbol != kind) {
    Fail(header, "expected (" + Lower(kind) + " NAME)");
  }
  return ExpectSymbol(header.items[1], "a name");
}

/// Parses "a b - t c" style typed lists. `variables` selects ?-prefixed names.
std::vector<std::pair<std::string, std::string>> ReadTypedList(
    const Node& list, std::size_t first, bool variables, bool typing) {
  std::vector<std::pair<std::string, std::string>> out;
  std::size_t pending = 0;
  for (std::size_t i = first; i < list.items.size(); ++i) {
    const Node& item = list.items[i];
    const std::string& symbol = ExpectSymbol(item, "a name");
    if (symbol == "-") {
      if (!typing) Fail(item, "typed lists require the :typing requirement");
      if (i + 1 >= list.items.size()) Fail(item, "missing type after '-'");
      if (pending == 0) Fail(item, "type annotation without names");
      const std::string& type = ExpectSymbol(list.items[i + 1], "a type name");
      if (IsVariable(type)) Fail(list.items[i + 1], "expected a type name");
      for (std::size_t k = out.size() - pending; k < out.size(); ++k) {
        out[k].second = type;
      }
      pending = 0;
      ++i;
      continue;
    }
    if (IsVariable(symbol) != variables) {
      Fail(item, variables ? "expected a variable, found '" + item.raw + "'"
                           : "unexpected variable '" + item.raw + "'");
    }
    out.emplace_back(symbol, kRootType);
    ++pending;
  }
  return out;
}

class Types {
 public:
  explicit Types(const DomainAst& domain) {
    for (const TypeDecl& decl : domain.types) parents_[decl.name] = decl.parent;
  }
  bool Known(const std::string& type) const {
    return type == kRootType || parents_.count(type) > 0;
  }
  bool IsSubtype(std::string type, const std::string& super) const {
    for (std::size_t guard = 0; guard <= parents_.size() + 1; ++guard) {
      if (type == super || super == kRootType) return true;
      auto it = parents_.find(type);
      if (it == parents_.end()) return false;
      type = it->second;
    }
    return false;
  }

 private:
  std::map<std::string, std::string> parents_;
};

Atom ReadAtom(const Node& node) {
  ExpectList(node, "an atom");
  if (node.items.empty()) Fail(node, "empty atom");
  Atom atom;
  atom.predicate = ExpectSymbol(node.items[0], "a predicate name");
  if (atom.predicate == "AND" || atom.predicate == "NOT" ||
      atom.predicate == "OR" || atom.predicate == "IMPLY" ||
      atom.predicate == "FORALL" || atom.predicate == "EXISTS" ||
      atom.predicate == "WHEN" || atom.predicate == "=") {
    Fail(node, "'" + Lower(atom.predicate) + "' is not allowed here");
  }
  for (std::size_t i = 1; i < node.items.size(); ++i) {
    atom.args.push_back(ExpectSymbol(node.items[i], "a term"));
  }
  return atom;
}

/// (and a b ...) or a single atom; `()` and `(and)` are empty.
std::vector<const Node*> Conjuncts(const Node& node) {
  ExpectList(node, "a formula");
  std::vector<const Node*> out;
  if (node.items.empty()) return out;
  if (!node.items[0].is_list && node.items[0].symbol == "AND") {
    for (std::size_t i = 1; i < node.items.size(); ++i) {
      out.push_back(&node.items[i]);
    }
  } else {
    out.push_back(&node);
  }
  return out;
}

void CheckAgainstDeclaration(const Node& node, const Atom& atom,
                             const std::map<std::string, PredicateDecl>& preds) {
  auto it = preds.find(atom.predicate);
  if (it == preds.end()) {
    Fail(node, "undeclared predicate " + atom.predicate);
  }
  if (it->second.arity() != atom.args.size()) {
    Fail(node, "predicate " + atom.predicate + " expects " +
                   std::to_string(it->second.arity()) + " arguments, got " +
                   std::to_string(atom.args.size()));
  }
}

ActionTemplate ReadAction(const Node& node, const DomainAst& domain,
                          const std::map<std::string, PredicateDecl>& preds,
                          const Types& types) {
  if (node.items.size() < 2) Fail(node, "missing action name");
  ActionTemplate action;
  action.name = ExpectSymbol(node.items[1], "an action name");
  if (IsVariable(action.name)) Fail(node.items[1], "expected an action name");

  const Node* parameters = nullptr;
  const Node* precondition = nullptr;
  const Node* effect = nullptr;
  for (std::size_t i = 2; i < node.items.size(); i += 2) {
    const std::string& key = ExpectSymbol(node.items[i], "an action keyword");
    if (i + 1 >= node.items.size()) Fail(node.items[i], "missing value for " + Lower(key));
    const Node* value = &node.items[i + 1];
    if (key == ":PARAMETERS") {
      parameters = value;
    } else if (key == ":PRECONDITION") {
      precondition = value;
    } else if (key == ":EFFECT") {
      effect = value;
    } else {
      Fail(node.items[i], "unsupported action keyword " + Lower(key));
    }
  }

  std::map<std::string, std::string> scope;
  if (parameters != nullptr) {
    ExpectList(*parameters, "a parameter list");
    for (auto& [name, type] :
         ReadTypedList(*parameters, 0, true, domain.typing())) {
      if (!types.Known(type)) Fail(*parameters, "unknown type " + type);
      if (!scope.emplace(name, type).second) {
        Fail(*parameters, "duplicate parameter " + name);
      }
      action.parameters.push_back({name, type});
    }
  }

  auto check_terms = [&](const Node& at, const Atom& atom) {
    CheckAgainstDeclaration(at, atom, preds);
    const PredicateDecl& decl = preds.at(atom.predicate);
    for (std::size_t k = 0; k < atom.args.size(); ++k) {
      const std::string& term = atom.args[k];
      if (!IsVariable(term)) {
        Fail(at, "constant " + term + " in action body (only parameters are allowed)");
      }
      auto it = scope.find(term);
      if (it == scope.end()) {
        Fail(at, "variable " + term + " is not in the parameter list of " +
                     action.name);
      }
      if (!types.IsSubtype(it->second, decl.types[k])) {
        Fail(at, "parameter " + term + " of type " + it->second +
                     " does not match argument type " + decl.types[k] +
                     " of " + atom.predicate);
      }
    }
  };

  if (precondition != nullptr) {
    for (const Node* conjunct : Conjuncts(*precondition)) {
      if (conjunct->is_list && !conjunct->items.empty() &&
          !conjunct->items[0].is_list && conjunct->items[0].symbol == "NOT") {
        Fail(*conjunct, "negative preconditions are not supported");
      }
      Atom atom = ReadAtom(*conjunct);
      check_terms(*conjunct, atom);
      action.precondition.push_back(std::move(atom));
    }
  }

  if (effect != nullptr) {
    std::set<std::pair<bool, Atom>> seen;
    for (const Node* conjunct : Conjuncts(*effect)) {
      bool positive = true;
      const Node* atom_node = conjunct;
      if (conjunct->is_list && !conjunct->items.empty() &&
          !conjunct->items[0].is_list && conjunct->items[0].symbol == "NOT") {
        if (conjunct->items.size() != 2) Fail(*conjunct, "malformed (not ...)");
        positive = false;
        atom_node = &conjunct->items[1];
      }
      Atom atom = ReadAtom(*atom_node);
      check_terms(*atom_node, atom);
      if (!seen.emplace(positive, atom).second) {
        Fail(*conjunct, "duplicated effect literal " +
                            std::string(positive ? "" : "not ") +
                            atom.ToString());
      }
      (positive ? action.add : action.del).push_back(std::move(atom));
    }
  }
  return action;
}

}  // namespace

bool DomainAst::typing() const {
  return std::find(requirements.begin(), requirements.end(), ":TYPING") !=
         requirements.end();
}

DomainAst ParseDomain(std::string_view text) {
  std::vector<Node> forms = Reader(text).ReadAll();
  const Node& top = ReadSingleForm(forms, "domain");
  DomainAst domain;
  domain.name = ReadHeader(top, "DOMAIN");

  std::map<std::string, PredicateDecl> preds;
  std::set<std::string> action_names;
  bool seen_requirements = false;
  for (std::size_t i = 2; i < top.items.size(); ++i) {
    const Node& section = top.items[i];
    ExpectList(section, "a domain section");
    if (section.items.empty()) Fail(section, "empty section");
    const std::string& key = ExpectSymbol(section.items[0], "a section keyword");

    if (key == ":REQUIREMENTS") {
      if (seen_requirements) Fail(section, "duplicate :requirements section");
      seen_requirements = true;
      for (std::size_t k = 1; k < section.items.size(); ++k) {
        const Node& flag = section.items[k];
        const std::string& symbol = ExpectSymbol(flag, "a requirement flag");
        if (symbol != ":STRIPS" && symbol != ":TYPING") {
          throw UnsupportedRequirementError(flag.raw, flag.line, flag.column);
        }
        domain.requirements.push_back(symbol);
      }
    } else if (key == ":TYPES") {
      if (!domain.typing()) Fail(section, ":types requires the :typing requirement");
      std::set<std::string> declared;
      for (auto& [name, parent] : ReadTypedList(section, 1, false, true)) {
        if (name == kRootType) Fail(section, "type object is predeclared");
        if (!declared.insert(name).second) Fail(section, "duplicate type " + name);
        domain.types.push_back({name, parent});
      }
      for (const TypeDecl& decl : domain.types) {
        if (decl.parent != kRootType && declared.count(decl.parent) == 0) {
          Fail(section, "undeclared parent type " + decl.parent);
        }
      }
    } else if (key == ":PREDICATES") {
      Types types(domain);
      for (std::size_t k = 1; k < section.items.size(); ++k) {
        const Node& decl_node = section.items[k];
        ExpectList(decl_node, "a predicate declaration");
        if (decl_node.items.empty()) Fail(decl_node, "empty predicate declaration");
        PredicateDecl decl;
        decl.name = ExpectSymbol(decl_node.items[0], "a predicate name");
        for (auto& [var, type] :
             ReadTypedList(decl_node, 1, true, domain.typing())) {
          if (!types.Known(type)) Fail(decl_node, "unknown type " + type);
          decl.types.push_back(type);
        }
        if (preds.count(decl.name) > 0) {
          Fail(decl_node, "duplicate predicate " + decl.name);
        }
        preds[decl.name] = decl;
        domain.predicates.push_back(std::move(decl));
      }
    } else if (key == ":ACTION") {
      ActionTemplate action = ReadAction(section, domain, preds, Types(domain));
      if (!action_names.insert(action.name).second) {
        Fail(section, "duplicate action " + action.name);
      }
      domain.actions.push_back(std::move(action));
    } else {
      Fail(section, "unsupported domain section " + Lower(key));
    }
  }
  return domain;
}

ProblemAst ParseProblem(std::string_view text, const DomainAst& domain) {
  std::vector<Node> forms = Reader(text).ReadAll();
  const Node& top = ReadSingleForm(forms, "problem");
  ProblemAst problem;
  problem.name = ReadHeader(top, "PROBLEM");

  Types types(domain);
  std::map<std::string, PredicateDecl> preds;
  for (const PredicateDecl& decl : domain.predicates) preds[decl.name] = decl;
  std::map<std::string, std::string> objects;

  auto check_ground = [&](const Node& at, const Atom& atom) {
    CheckAgainstDeclaration(at, atom, preds);
    const PredicateDecl& decl = preds.at(atom.predicate);
    for (std::size_t k = 0; k < atom.args.size(); ++k) {
      const std::string& arg = atom.args[k];
      if (IsVariable(arg)) Fail(at, "variable " + arg + " in a ground atom");
      auto it = objects.find(arg);
      if (it == objects.end()) Fail(at, "undeclared object " + arg);
      if (!types.IsSubtype(it->second, decl.types[k])) {
        Fail(at, "object " + arg + " of type " + it->second +
                     " is ill-typed for argument " + std::to_string(k + 1) +
                     " of " + atom.predicate + " (expects " + decl.types[k] +
                     ")");
      }
    }
  };

  bool seen_domain = false;
  const Node* init = nullptr;
  const Node* goal = nullptr;
  for (std::size_t i = 2; i < top.items.size(); ++i) {
    const Node& section = top.items[i];
    ExpectList(section, "a problem section");
    if (section.items.empty()) Fail(section, "empty section");
    const std::string& key = ExpectSymbol(section.items[0], "a section keyword");
    if (key == ":DOMAIN") {
      if (section.items.size() != 2) Fail(section, "expected (:domain NAME)");
      problem.domain = ExpectSymbol(section.items[1], "a domain name");
      if (problem.domain != domain.name) {
        Fail(section.items[1], "problem refers to domain " + problem.domain +
                                   " but the loaded domain is " + domain.name);
      }
      seen_domain = true;
    } else if (key == ":REQUIREMENTS") {
      for (std::size_t k = 1; k < section.items.size(); ++k) {
        const Node& flag = section.items[k];
        const std::string& symbol = ExpectSymbol(flag, "a requirement flag");
        if (symbol != ":STRIPS" && symbol != ":TYPING") {
          throw UnsupportedRequirementError(flag.raw, flag.line, flag.column);
        }
      }
    } else if (key == ":OBJECTS") {
      for (auto& [name, type] : ReadTypedList(section, 1, false, domain.typing())) {
        if (!types.Known(type)) Fail(section, "unknown type " + type);
        if (!objects.emplace(name, type).second) {
          Fail(section, "duplicate object " + name);
        }
        problem.objects.push_back({name, type});
      }
    } else if (key == ":INIT") {
      init = &section;
    } else if (key == ":GOAL") {
      if (section.items.size() != 2) Fail(section, "expected (:goal FORMULA)");
      goal = &section.items[1];
    } else {
      Fail(section, "unsupported problem section " + Lower(key));
    }
  }
  if (!seen_domain) Fail(top, "missing (:domain NAME)");

  if (init != nullptr) {
    for (std::size_t k = 1; k < init->items.size(); ++k) {
      Atom atom = ReadAtom(init->items[k]);
      check_ground(init->items[k], atom);
      problem.init.push_back(std::move(atom));
    }
  }
  if (goal != nullptr) {
    for (const Node* conjunct : Conjuncts(*goal)) {
      if (conjunct->is_list && !conjunct->items.empty() &&
          !conjunct->items[0].is_list && conjunct->items[0].symbol == "NOT") {
        Fail(*conjunct, "negative goals are not supported");
      }
      Atom atom = ReadAtom(*conjunct);
      check_ground(*conjunct, atom);
      problem.goal.push_back(std::move(atom));
    }
  }
  return problem;
}

namespace {

ActionCall ReadCall(const Node& node) {
  ExpectList(node, "an action call");
  if (node.items.empty()) Fail(node, "empty action call");
  ActionCall call;
  call.name = ExpectSymbol(node.items[0], "an action name");
  for (std::size_t i = 1; i < node.items.size(); ++i) {
    call.args.push_back(ExpectSymbol(node.items[i], "an object name"));
  }
  call.line = node.line;
  call.column = node.column;
  return call;
}

}  // namespace

PlanText ParsePlanText(std::string_view text) {
  PlanText plan;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++line_no;
    start = end + 1;

    std::size_t comment = line.find(';');
    if (comment != std::string_view::npos) line = line.substr(0, comment);
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
      if (end == text.size()) break;
      continue;
    }
    std::size_t last = line.find_last_not_of(" \t\r");

    PlanTextStep step;
    if (line[first] == '{') {
      if (line[last] != '}') {
        throw ParseError("unterminated concurrent group: missing '}'", line_no,
                         last + 1);
      }
      std::string_view inner = line.substr(first + 1, last - first - 1);
      std::vector<Node> forms = Reader(inner, line_no, first + 2).ReadAll();
      if (forms.empty()) {
        throw ParseError("empty concurrent group", line_no, first + 1);
      }
      if (forms.size() < 2) {
        throw ParseError("concurrent group requires at least two actions",
                         line_no, first + 1);
      }
      step.concurrent = true;
      for (const Node& form : forms) step.calls.push_back(ReadCall(form));
    } else {
      std::string_view body = line.substr(first, last - first + 1);
      std::vector<Node> forms = Reader(body, line_no, first + 1).ReadAll();
      if (forms.size() != 1) {
        Fail(forms[1], "one action per line; group concurrent actions in braces");
      }
      step.calls.push_back(ReadCall(forms[0]));
    }
    plan.steps.push_back(std::move(step));
    if (end == text.size()) break;
  }
  return plan;
}

Plan ParsePlan(std::string_view text, const PlanningProblem& problem) {
  PlanText parsed = ParsePlanText(text);
  std::map<std::string, std::size_t> arity;
  for (const ActionTemplate& t : problem.templates) {
    arity[t.name] = t.parameters.size();
  }

  Plan plan;
  for (const PlanTextStep& step : parsed.steps) {
    std::vector<GroundAction> actions;
    for (const ActionCall& call : step.calls) {
      auto it = arity.find(call.name);
      if (it == arity.end()) {
        throw ParseError("unknown action " + call.name, call.line, call.column);
      }
      if (it->second != call.args.size()) {
        throw ParseError("action " + call.name + " expects " +
                             std::to_string(it->second) + " arguments, got " +
                             std::to_string(call.args.size()),
                         call.line, call.column);
      }
      for (const std::string& arg : call.args) {
        if (problem.objects.count(arg) == 0) {
          throw ParseError("undeclared object " + arg, call.line, call.column);
        }
      }
      const GroundAction* action = problem.FindAction(call.name, call.args);
      if (action == nullptr) {
        throw ParseError("no ground action " +
                             Atom{call.name, call.args}.ToString() +
                             " (ill-typed or repeated arguments)",
                         call.line, call.column);
      }
      actions.push_back(*action);
    }
    if (step.concurrent) {
      try {
        plan.steps.push_back(PlanStep::Concurrent(std::move(actions)));
      } catch (const PreconditionError& e) {
        throw ParseError(e.what(), step.calls.front().line,
                         step.calls.front().column);
      }
    } else {
      plan.steps.push_back(PlanStep::Single(std::move(actions.front())));
    }
  }
  return plan;
}

namespace {

Atom Substitute(const Atom& atom,
                const std::map<std::string, std::string>& binding) {
  Atom out{atom.predicate, {}};
  out.args.reserve(atom.args.size());
  for (const std::string& term : atom.args) out.args.push_back(binding.at(term));
  return out;
}

}  // namespace

PlanningProblem Ground(const DomainAst& domain, const ProblemAst& ast,
                       const GroundOptions& options) {
  PlanningProblem problem;
  problem.name = ast.name;
  problem.domain_name = domain.name;
  for (const ObjectDecl& object : ast.objects) {
    problem.objects[object.name] = object.type;
  }
  for (const PredicateDecl& decl : domain.predicates) {
    problem.predicates[decl.name] = decl;
  }
  problem.initial = State(AtomSet(ast.init.begin(), ast.init.end()));
  problem.goal_state = AtomSet(ast.goal.begin(), ast.goal.end());
  for (const Atom& atom : problem.goal_state) {
    problem.goals.push_back(Goal::Of(atom));
  }
  problem.templates = domain.actions;

  Types types(domain);
  for (const ActionTemplate& t : domain.actions) {
    std::vector<std::vector<std::string>> candidates;
    for (const Parameter& p : t.parameters) {
      std::vector<std::string> fits;
      for (const auto& [name, type] : problem.objects) {
        if (types.IsSubtype(type, p.type)) fits.push_back(name);
      }
      candidates.push_back(std::move(fits));
    }
    if (std::any_of(candidates.begin(), candidates.end(),
                    [](const auto& c) { return c.empty(); })) {
      continue;
    }

    std::vector<std::size_t> index(t.parameters.size(), 0);
    bool exhausted = false;
    while (!exhausted) {
      std::map<std::string, std::string> binding;
      std::set<std::string> used;
      bool distinct = true;
      for (std::size_t k = 0; k < index.size(); ++k) {
        const std::string& value = candidates[k][index[k]];
        binding[t.parameters[k].name] = value;
        distinct = used.insert(value).second && distinct;
      }
      if (distinct || !options.distinct_parameters) {
        GroundAction action;
        action.name = t.name;
        for (const Parameter& p : t.parameters) {
          action.args.push_back(binding.at(p.name));
        }
        for (const Atom& a : t.precondition) action.pre.insert(Substitute(a, binding));
        for (const Atom& a : t.add) action.add.insert(Substitute(a, binding));
        // Delete-then-add: an atom both deleted and added stays true.
        for (const Atom& a : t.del) {
          Atom ground = Substitute(a, binding);
          if (action.add.count(ground) == 0) action.del.insert(std::move(ground));
        }
        problem.ground_actions.push_back(std::move(action));
        if (problem.ground_actions.size() > options.max_ground_actions) {
          throw Error("grounding exceeds the limit of " +
                      std::to_string(options.max_ground_actions) +
                      " ground actions");
        }
      }

      // Odometer over the candidate lists, last parameter fastest.
      exhausted = true;
      for (std::size_t k = index.size(); k-- > 0;) {
        if (++index[k] < candidates[k].size()) {
          exhausted = false;
          break;
        }
        index[k] = 0;
      }
    }
  }
  std::sort(problem.ground_actions.begin(), problem.ground_actions.end());
  return problem;
}

PlanningProblem LoadProblem(std::string_view domain_text,
                            std::string_view problem_text,
                            const GroundOptions& options) {
  DomainAst domain = ParseDomain(domain_text);
  ProblemAst problem = ParseProblem(problem_text, domain);
  return Ground(domain, problem, options);
}

namespace {

std::string AtomPddl(const Atom& atom) {
  std::string out = "(" + Lower(atom.predicate);
  for (const std::string& arg : atom.args) out += " " + Lower(arg);
  return out + ")";
}

std::string Conjunction(const std::vector<std::string>& parts) {
  if (parts.size() == 1) return parts.front();
  std::string out = "(and";
  for (const std::string& part : parts) out += " " + part;
  return out + ")";
}

}  // namespace

std::string SerializeDomain(const DomainAst& domain) {
  const bool typing = domain.typing();
  std::ostringstream ss;
  ss << "(define (domain " << Lower(domain.name) << ")\n";
  if (!domain.requirements.empty()) {
    ss << "  (:requirements";
    for (const std::string& r : domain.requirements) ss << " " << Lower(r);
    ss << ")\n";
  }
  if (!domain.types.empty()) {
    ss << "  (:types";
    for (const TypeDecl& t : domain.types) {
      ss << " " << Lower(t.name) << " - " << Lower(t.parent);
    }
    ss << ")\n";
  }
  ss << "  (:predicates";
  for (const PredicateDecl& p : domain.predicates) {
    ss << " (" << Lower(p.name);
    for (std::size_t k = 0; k < p.types.size(); ++k) {
      ss << " ?a" << k;
      if (typing) ss << " - " << Lower(p.types[k]);
    }
    ss << ")";
  }
  ss << ")\n";
  for (const ActionTemplate& a : domain.actions) {
    ss << "  (:action " << Lower(a.name) << "\n    :parameters (";
    for (std::size_t k = 0; k < a.parameters.size(); ++k) {
      if (k > 0) ss << " ";
      ss << Lower(a.parameters[k].name);
      if (typing) ss << " - " << Lower(a.parameters[k].type);
    }
    ss << ")\n";
    std::vector<std::string> pre;
    for (const Atom& atom : a.precondition) pre.push_back(AtomPddl(atom));
    ss << "    :precondition " << (pre.empty() ? "(and)" : Conjunction(pre)) << "\n";
    std::vector<std::string> eff;
    for (const Atom& atom : a.add) eff.push_back(AtomPddl(atom));
    for (const Atom& atom : a.del) eff.push_back("(not " + AtomPddl(atom) + ")");
    ss << "    :effect " << (eff.empty() ? "(and)" : Conjunction(eff)) << ")\n";
  }
  ss << ")\n";
  return ss.str();
}

std::string SerializeProblem(const ProblemAst& problem) {
  std::ostringstream ss;
  ss << "(define (problem " << Lower(problem.name) << ")\n";
  ss << "  (:domain " << Lower(problem.domain) << ")\n";
  ss << "  (:objects";
  bool typed = std::any_of(problem.objects.begin(), problem.objects.end(),
                           [](const ObjectDecl& o) { return o.type != kRootType; });
  for (const ObjectDecl& o : problem.objects) {
    ss << " " << Lower(o.name);
    if (typed) ss << " - " << Lower(o.type);
  }
  ss << ")\n  (:init";
  for (const Atom& atom : problem.init) ss << " " << AtomPddl(atom);
  ss << ")\n  (:goal (and";
  for (const Atom& atom : problem.goal) ss << " " << AtomPddl(atom);
  ss << ")))\n";
  return ss.str();
}

namespace {

std::string CallPddl(const std::string& name,
                     const std::vector<std::string>& args) {
  return AtomPddl(Atom{name, args});
}

}  // namespace

std::string SerializePlan(const Plan& plan) {
  std::string out;
  for (const PlanStep& step : plan.steps) {
    if (step.concurrent()) {
      out += "{";
      for (std::size_t i = 0; i < step.actions().size(); ++i) {
        if (i > 0) out += " ";
        out += CallPddl(step.actions()[i].name, step.actions()[i].args);
      }
      out += "}\n";
    } else {
      out += CallPddl(step.action().name, step.action().args) + "\n";
    }
  }
  return out;
}

std::string SerializePlanText(const PlanText& plan) {
  std::string out;
  for (const PlanTextStep& step : plan.steps) {
    if (step.concurrent) out += "{";
    for (std::size_t i = 0; i < step.calls.size(); ++i) {
      if (i > 0) out += " ";
      out += CallPddl(step.calls[i].name, step.calls[i].args);
    }
    out += step.concurrent ? "}\n" : "\n";
  }
  return out;
}

std::string SerializeTrace(const Trace& trace) {
  std::string out;
  for (std::size_t i = 0; i < trace.states.size(); ++i) {
    out += "S" + std::to_string(i) + ": " + trace.states[i].ToString() + "\n";
  }
  return out;
}

Atom ParseAtomText(std::string_view text) {
  std::size_t first = text.find_first_not_of(" \t\r\n");
  std::size_t last = text.find_last_not_of(" \t\r\n");
  if (first == std::string_view::npos) throw ParseError("empty atom", 1, 1);
  text = text.substr(first, last - first + 1);
  if (text.front() == '(') {
    std::vector<Node> forms = Reader(text).ReadAll();
    if (forms.size() != 1) throw ParseError("expected a single atom", 1, 1);
    return ReadAtom(forms.front());
  }
  Atom atom;
  std::size_t open = text.find('(');
  if (open == std::string_view::npos) {
    atom.predicate = Upper(text);
    return atom;
  }
  if (text.back() != ')') throw ParseError("expected ')'", 1, text.size());
  atom.predicate = Upper(text.substr(0, open));
  std::string_view inner = text.substr(open + 1, text.size() - open - 2);
  std::size_t pos = 0;
  while (pos <= inner.size() && !inner.empty()) {
    std::size_t comma = inner.find(',', pos);
    if (comma == std::string_view::npos) comma = inner.size();
    std::string_view arg = inner.substr(pos, comma - pos);
    std::size_t a = arg.find_first_not_of(' ');
    std::size_t b = arg.find_last_not_of(' ');
    if (a == std::string_view::npos) {
      throw ParseError("empty argument", 1, open + 2 + pos);
    }
    atom.args.push_back(Upper(arg.substr(a, b - a + 1)));
    pos = comma + 1;
    if (comma == inner.size()) break;
  }
  if (atom.predicate.empty()) throw ParseError("missing predicate name", 1, 1);
  return atom;
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace xplain
