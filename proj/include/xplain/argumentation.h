#ifndef XPLAIN_ARGUMENTATION_H_
#define XPLAIN_ARGUMENTATION_H_

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace xplain {

enum class NodeKind { kArgument, kCriticalQuestion };

/// Abstract argumentation framework over string ids.
class ArgumentationFramework {
 public:
  /// Adding an existing id with the same kind is a no-op; a different kind
  /// throws PreconditionError.
  void AddNode(const std::string& id, NodeKind kind);
  /// Both endpoints must exist. Duplicate attacks are ignored.
  void AddAttack(const std::string& from, const std::string& to);

  bool Contains(const std::string& id) const { return nodes_.count(id) > 0; }
  NodeKind kind(const std::string& id) const;
  const std::map<std::string, NodeKind>& nodes() const { return nodes_; }
  const std::set<std::pair<std::string, std::string>>& attacks() const {
    return attacks_;
  }
  const std::set<std::string>& attackers(const std::string& id) const;
  std::size_t size() const { return nodes_.size(); }

  /// Every attack joins an argument and a critical question.
  bool Bipartite() const;

 private:
  std::map<std::string, NodeKind> nodes_;
  std::set<std::pair<std::string, std::string>> attacks_;
  std::map<std::string, std::set<std::string>> attackers_;
};

enum class Label { kIn, kOut, kUndec };

const char* LabelName(Label label);

struct GroundedResult {
  std::set<std::string> in;
  std::set<std::string> out;
  std::set<std::string> undec;
  std::size_t iterations = 0;

  Label label(const std::string& id) const;
};

/// Grounded labelling: repeatedly label in every node whose attackers are all
/// out, and out every node with an in attacker; what remains is undec.
GroundedResult GroundedExtension(const ArgumentationFramework& af);

}  // namespace xplain

#endif  // XPLAIN_ARGUMENTATION_H_
