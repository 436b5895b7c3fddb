#include "optctl/bench/runner.hpp"

#include <thread>

#include "optctl/agent/local_client.hpp"
#include "optctl/agent/oracle.hpp"
#include "optctl/bench/scorer.hpp"

namespace optctl::bench {

agent::ActionPlan plan_from_ground_truth(const GroundTruth& gt) {
    if (gt.expectation == Expectation::reject) {
        return agent::ActionPlan::reject(gt.rejection_reason);
    }
    std::vector<agent::PlanStep> steps;
    for (const auto& s : gt.steps) {
        steps.push_back({s.tool, s.canonical_args(), true});
    }
    return agent::ActionPlan::execute(std::move(steps));
}

namespace {

TaskOutcome run_one(const TaskRecord& task, const json& topology_config,
                    const RunOptions& options) {
    sim::Testbed testbed = sim::Testbed::from_json(topology_config);
    const tools::Registry registry = tools::Registry::build_for(testbed);
    agent::LocalClient client(registry, testbed);
    const json baseline = testbed.fingerprint();

    TaskOutcome outcome;
    outcome.task = task;
    if (options.agent == agent::AgentKind::oracle) {
        outcome.transcript =
            agent::run_task_oracle(plan_from_ground_truth(task.ground_truth), client, task.id);
    } else {
        outcome.transcript = agent::run_task_remote(task.prompt, options.endpoint,
                                                    client.list_tools_schema(), client, task.id);
    }
    outcome.verdict = score(task, outcome.transcript, testbed, baseline, registry);
    outcome.cost_usd = agent::cost_of(outcome.transcript, options.endpoint);
    return outcome;
}

}  // namespace

std::vector<TaskOutcome> run_benchmark(const std::vector<TaskRecord>& corpus,
                                       const json& topology_config, const RunOptions& options) {
    std::vector<TaskOutcome> outcomes(corpus.size());
    const int workers = std::max(1, options.workers);

    if (workers == 1) {
        for (size_t i = 0; i < corpus.size(); ++i) {
            outcomes[i] = run_one(corpus[i], topology_config, options);
        }
        return outcomes;
    }

    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (size_t i = static_cast<size_t>(w); i < corpus.size();
                 i += static_cast<size_t>(workers)) {
                outcomes[i] = run_one(corpus[i], topology_config, options);
            }
        });
    }
    for (auto& t : pool) t.join();
    return outcomes;
}

}  // namespace optctl::bench
