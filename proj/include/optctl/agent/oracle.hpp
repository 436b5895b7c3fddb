#pragma once

#include "optctl/agent/transcript.hpp"
#include "optctl/tools/tool_client.hpp"

namespace optctl::agent {

// Deterministic executor of ground-truth action plans. Establishes the
// benchmark's success ceiling: it validates the harness and the simulator
// end to end, not natural-language understanding.
Transcript run_task_oracle(const ActionPlan& plan, tools::ToolClient& client,
                           const std::string& task_id = "");

}  // namespace optctl::agent
