#ifndef XPLAIN_WIRE_H_
#define XPLAIN_WIRE_H_

#include <json.hpp>

#include "xplain/dialogue.h"
#include "xplain/planning.h"
#include "xplain/schemes.h"

namespace xplain {

// JSON documents shared by the HTTP service and `xplain export-af`. Atoms,
// actions and goals travel as their display strings ("ON(C,A)").

using Json = nlohmann::ordered_json;

Json ToJson(const State& state);
Json ToJson(const StateRef& ref);
Json ToJson(const Argument& argument);
Json ToJson(const CQInstance& cq, const Session& session);
Json ToJson(const SolutionVerdict& verdict);
Json ToJson(const PropertyReport& report);
Json ToJson(const GroundedResult& grounded);
Json ToJson(const ConsistencyViolation& violation);

/// {"nodes": [...], "attacks": [...], "labels": {...}}
Json AfToJson(const Session& session);

}  // namespace xplain

#endif  // XPLAIN_WIRE_H_
