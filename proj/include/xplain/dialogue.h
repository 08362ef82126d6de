#ifndef XPLAIN_DIALOGUE_H_
#define XPLAIN_DIALOGUE_H_

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "xplain/argumentation.h"
#include "xplain/planning.h"
#include "xplain/schemes.h"

namespace xplain {

/// A critical question instantiated against one premise of a presented
/// argument.
///
///   CQ1  plan        answered by the plan summary argument
///   CQ2  action      answered by an action argument
///   CQ3  concurrent  answered by a concurrent action argument
///   CQ4  state       answered by a state transition argument
///   CQ5  goal        answered by a goal argument
struct CQInstance {
  std::string id;
  int kind = 1;  // 1..5
  /// Argument the question attacks. Empty for CQ1, which questions the plan
  /// itself and is answered by the root argument.
  std::string target;
  int premise_index = 0;  // 1-based; 0 for CQ1
  Subject subject;
  std::string question;

  bool operator==(const CQInstance&) const = default;
};

struct PropertyReport {
  bool p1 = false;  // every asked CQ is attacked by an argument
  bool p2 = false;  // the summary argument is in Gr and no CQ attacking it is
  bool p3 = false;  // summary in Gr iff every goal argument is in Gr
  bool p4 = false;  // proxy: p1 && p2 && p3 && user marked the session complete
  bool complete = false;
  bool materialized = false;
  /// CQs that were asked but unanswered before materialization.
  std::vector<std::string> unanswered;
  /// Answers (argument ids) created by materialization, in creation order.
  std::vector<std::string> materialized_answers;
  /// Goal arguments that were absent from the session before the check.
  std::vector<std::string> missing_goal_arguments;
  std::vector<std::string> goal_arguments;
  /// CQs that could not be answered (their scheme does not apply).
  std::vector<std::string> unanswerable;
  GroundedResult grounded;
};

/// One explanation dialogue over a fixed problem and plan.
///
/// The session accumulates presented arguments and asked CQs into a Dung
/// framework whose attacks always join a CQ and an argument. A fresh session
/// over a solution contains only the plan summary argument.
class Session {
 public:
  static Session Create(PlanningProblem problem, Plan plan,
                        std::size_t feasibility_bound = 10);

  const PlanningProblem& problem() const { return *problem_; }
  const Plan& plan() const { return plan_; }
  const SolutionVerdict& verdict() const { return verdict_; }
  /// Trace of the executable prefix of the plan.
  const Trace& trace() const { return trace_; }
  std::size_t feasibility_bound() const { return feasibility_bound_; }

  bool has_summary() const { return has_summary_; }
  /// Throws PreconditionError when the plan is not a solution.
  const Argument& summary() const;

  bool HasArgument(const std::string& id) const;
  /// Throws NotFoundError.
  const Argument& argument(const std::string& id) const;
  const std::map<std::string, Argument>& arguments() const {
    return arguments_;
  }
  /// Argument ids in presentation order.
  const std::vector<std::string>& order() const { return order_; }

  /// Asked CQs by id.
  const std::map<std::string, CQInstance>& asked() const { return asked_; }
  /// CQ id -> answering argument id.
  const std::map<std::string, std::string>& answers() const { return answers_; }
  std::optional<std::string> AnswerOf(const std::string& cq_id) const;

  /// CQs attachable to the premises of a presented argument. Throws
  /// NotFoundError for an argument outside the session.
  std::vector<CQInstance> AvailableCQs(const std::string& argument_id) const;
  /// Looks a CQ up among the questions of every presented argument.
  std::optional<CQInstance> FindCQ(const std::string& cq_id) const;

  /// Adds the CQ and its attack on the target. Idempotent.
  const CQInstance& Ask(const std::string& cq_id);
  /// Asks the CQ if needed and answers it with the matching scheme. Answering
  /// twice returns the same argument. If the scheme cannot be instantiated
  /// the ExplanationError propagates and the session is unchanged.
  const Argument& Answer(const std::string& cq_id);

  /// Answers every available CQ of every presented argument until nothing is
  /// left. Returns the CQs whose answer could not be built.
  std::vector<std::string> ExploreAll();

  void MarkComplete() { complete_ = true; }
  bool complete() const { return complete_; }

  const ArgumentationFramework& af() const { return af_; }
  GroundedResult Grounded() const { return GroundedExtension(af_); }

 private:
  Session() = default;

  Argument BuildAnswer(const CQInstance& cq) const;
  void AddArgument(const Argument& argument);
  void CheckShape() const;

  std::shared_ptr<const PlanningProblem> problem_;
  Plan plan_;
  SolutionVerdict verdict_;
  Trace trace_;
  std::size_t feasibility_bound_ = 10;
  bool has_summary_ = false;
  bool complete_ = false;

  std::map<std::string, Argument> arguments_;
  std::vector<std::string> order_;
  std::map<std::string, CQInstance> asked_;
  std::map<std::string, std::string> answers_;
  ArgumentationFramework af_;
};

/// Evaluates Properties 1-3 on the grounded extension and the P4 proxy.
///
/// With `materialize`, works on a copy of the session in which every asked
/// CQ is answered and every goal argument is present, and lists what had to
/// be added. Throws PreconditionError when the session has no summary.
PropertyReport CheckProperties(const Session& session, bool materialize = true);

/// "dot" (alias "graph-text") or "structured" (JSON). Other formats throw
/// PreconditionError.
std::string ExportAF(const Session& session, const std::string& format);

}  // namespace xplain

#endif  // XPLAIN_DIALOGUE_H_
