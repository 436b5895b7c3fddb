#pragma once

#include <optional>
#include <string>
#include <vector>

#include "optctl/tools/registry.hpp"

namespace optctl::agent {

using nlohmann::json;

enum class AgentKind { oracle, remote };

inline std::string to_string(AgentKind k) { return k == AgentKind::oracle ? "oracle" : "remote"; }

struct ToolExchange {
    tools::ToolCall call;
    tools::ToolResult result;
};

struct Round {
    std::string assistant_output;
    std::vector<ToolExchange> exchanges;
};

// Ordered record of one task execution through an agent.
struct Transcript {
    std::string task_id;
    std::vector<Round> rounds;
    std::string final_answer;
    long prompt_tokens = 0;
    long completion_tokens = 0;
    double wall_time_s = 0.0;
    AgentKind agent_kind = AgentKind::oracle;

    std::vector<const ToolExchange*> exchanges() const;
    json to_json() const;
};

struct PlanStep {
    std::string tool;
    json args = json::object();
    bool expected_ok = true;
};

// Ground-truth executor input: either an ordered step list or a rejection.
class ActionPlan {
public:
    static ActionPlan execute(std::vector<PlanStep> steps);
    static ActionPlan reject(std::string reason);

    bool is_rejection() const { return rejection_.has_value(); }
    const std::vector<PlanStep>& steps() const { return steps_; }
    const std::string& rejection_reason() const { return *rejection_; }

private:
    ActionPlan() = default;
    std::vector<PlanStep> steps_;
    std::optional<std::string> rejection_;
};

}  // namespace optctl::agent
