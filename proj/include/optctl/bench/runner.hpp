#pragma once

#include <functional>
#include <vector>

#include "optctl/agent/remote.hpp"
#include "optctl/bench/report.hpp"
#include "optctl/bench/task.hpp"

namespace optctl::bench {

struct RunOptions {
    agent::AgentKind agent = agent::AgentKind::oracle;
    agent::ModelEndpointConfig endpoint;  // remote agent only
    int workers = 1;
};

// Runs every task against a fresh testbed built from `topology_config` and
// scores the transcript. Workers each own an isolated testbed instance;
// results are ordered like the corpus regardless of worker count.
std::vector<TaskOutcome> run_benchmark(const std::vector<TaskRecord>& corpus,
                                       const json& topology_config, const RunOptions& options);

// Ground-truth plan the oracle executes for one task.
agent::ActionPlan plan_from_ground_truth(const GroundTruth& gt);

}  // namespace optctl::bench
