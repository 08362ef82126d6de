#include "xplain/argumentation.h"

#include "xplain/errors.h"

namespace xplain {

void ArgumentationFramework::AddNode(const std::string& id, NodeKind kind) {
  auto [it, inserted] = nodes_.emplace(id, kind);
  if (!inserted && it->second != kind) {
    throw PreconditionError("node " + id + " already exists with another kind");
  }
  attackers_[id];
}

void ArgumentationFramework::AddAttack(const std::string& from,
                                       const std::string& to) {
  if (!Contains(from) || !Contains(to)) {
    throw PreconditionError("attack " + from + " -> " + to +
                            " refers to an unknown node");
  }
  attacks_.emplace(from, to);
  attackers_[to].insert(from);
}

NodeKind ArgumentationFramework::kind(const std::string& id) const {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) throw PreconditionError("unknown node " + id);
  return it->second;
}

const std::set<std::string>& ArgumentationFramework::attackers(
    const std::string& id) const {
  auto it = attackers_.find(id);
  if (it == attackers_.end()) throw PreconditionError("unknown node " + id);
  return it->second;
}

bool ArgumentationFramework::Bipartite() const {
  for (const auto& [from, to] : attacks_) {
    if (kind(from) == kind(to)) return false;
  }
  return true;
}

const char* LabelName(Label label) {
  switch (label) {
    case Label::kIn: return "in";
    case Label::kOut: return "out";
    case Label::kUndec: return "undec";
  }
  return "?";
}

Label GroundedResult::label(const std::string& id) const {
  if (in.count(id)) return Label::kIn;
  if (out.count(id)) return Label::kOut;
  return Label::kUndec;
}

GroundedResult GroundedExtension(const ArgumentationFramework& af) {
  GroundedResult result;
  for (const auto& [id, kind] : af.nodes()) result.undec.insert(id);
  bool changed = true;
  while (changed) {
    changed = false;
    ++result.iterations;
    std::vector<std::string> to_in;
    std::vector<std::string> to_out;
    for (const std::string& id : result.undec) {
      bool all_out = true;
      bool any_in = false;
      for (const std::string& attacker : af.attackers(id)) {
        if (result.in.count(attacker)) any_in = true;
        if (!result.out.count(attacker)) all_out = false;
      }
      if (all_out) {
        to_in.push_back(id);
      } else if (any_in) {
        to_out.push_back(id);
      }
    }
    for (const std::string& id : to_in) {
      result.undec.erase(id);
      result.in.insert(id);
      changed = true;
    }
    for (const std::string& id : to_out) {
      result.undec.erase(id);
      result.out.insert(id);
      changed = true;
    }
  }
  return result;
}

}  // namespace xplain
