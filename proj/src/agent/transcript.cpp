#include "optctl/agent/transcript.hpp"

#include <stdexcept>

namespace optctl::agent {

std::vector<const ToolExchange*> Transcript::exchanges() const {
    std::vector<const ToolExchange*> out;
    for (const auto& r : rounds) {
        for (const auto& e : r.exchanges) out.push_back(&e);
    }
    return out;
}

json Transcript::to_json() const {
    json rounds_j = json::array();
    for (const auto& r : rounds) {
        json exchanges_j = json::array();
        for (const auto& e : r.exchanges) {
            exchanges_j.push_back(json{{"call",
                                        {{"call_id", e.call.call_id},
                                         {"tool", e.call.tool},
                                         {"args", e.call.args}}},
                                       {"result", e.result.to_json()}});
        }
        rounds_j.push_back(
            json{{"assistant_output", r.assistant_output}, {"exchanges", exchanges_j}});
    }
    return json{{"task_id", task_id},
                {"rounds", rounds_j},
                {"final_answer", final_answer},
                {"prompt_tokens", prompt_tokens},
                {"completion_tokens", completion_tokens},
                {"wall_time_s", wall_time_s},
                {"agent_kind", to_string(agent_kind)}};
}

ActionPlan ActionPlan::execute(std::vector<PlanStep> steps) {
    if (steps.empty()) {
        throw std::invalid_argument("an execute plan needs at least one step");
    }
    ActionPlan p;
    p.steps_ = std::move(steps);
    return p;
}

ActionPlan ActionPlan::reject(std::string reason) {
    if (reason.empty()) {
        throw std::invalid_argument("a rejection plan needs a reason");
    }
    ActionPlan p;
    p.rejection_ = std::move(reason);
    return p;
}

}  // namespace optctl::agent
