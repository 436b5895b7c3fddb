#pragma once

#include "optctl/agent/transcript.hpp"
#include "optctl/bench/task.hpp"
#include "optctl/tools/registry.hpp"

namespace optctl::bench {

// Scores one transcript against a task's ground truth and classifies any
// failure. Total function: never throws on agent behavior. `baseline` is the
// testbed fingerprint captured before the task ran.
Verdict score(const TaskRecord& task, const agent::Transcript& transcript,
              const sim::Testbed& final_state, const json& baseline,
              const tools::Registry& registry);

}  // namespace optctl::bench
