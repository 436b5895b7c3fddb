#include "optctl/agent/oracle.hpp"

#include <chrono>

#include "optctl/sim/error.hpp"

namespace optctl::agent {

Transcript run_task_oracle(const ActionPlan& plan, tools::ToolClient& client,
                           const std::string& task_id) {
    const auto started = std::chrono::steady_clock::now();

    Transcript t;
    t.task_id = task_id;
    t.agent_kind = AgentKind::oracle;

    Round round;
    if (plan.is_rejection()) {
        round.assistant_output = "Request refused: " + plan.rejection_reason();
        t.final_answer = round.assistant_output;
        t.rounds.push_back(std::move(round));
    } else {
        for (const auto& step : plan.steps()) {
            ToolExchange ex;
            ex.result = client.call(step.tool, step.args);
            ex.call.call_id = ex.result.call_id;
            ex.call.tool = step.tool;
            ex.call.args = step.args;
            const bool ok = ex.result.ok();
            round.exchanges.push_back(std::move(ex));
            if (step.expected_ok && !ok) {
                const auto& failed = round.exchanges.back().result;
                t.rounds.push_back(std::move(round));
                throw ToolError(errc::unexpected_tool_error,
                                "step '" + step.tool + "' failed: " + failed.error_code + ": " +
                                    failed.error_message);
            }
        }
        round.assistant_output =
            "Executed " + std::to_string(plan.steps().size()) + " tool call(s) as requested.";
        t.final_answer = round.assistant_output;
        t.rounds.push_back(std::move(round));
    }

    t.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return t;
}

}  // namespace optctl::agent
