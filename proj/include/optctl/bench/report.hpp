#pragma once

#include <map>
#include <string>
#include <vector>

#include "optctl/agent/transcript.hpp"
#include "optctl/bench/task.hpp"

namespace optctl::bench {

// Everything the runner knows about one finished task.
struct TaskOutcome {
    TaskRecord task;
    agent::Transcript transcript;
    Verdict verdict;
    double cost_usd = 0.0;
};

struct SliceStats {
    int total = 0;
    int successes = 0;
    double cost_sum = 0.0;
    double time_sum = 0.0;

    double success_rate() const { return total > 0 ? static_cast<double>(successes) / total : 0.0; }
    double avg_cost() const { return total > 0 ? cost_sum / total : 0.0; }
    double avg_time() const { return total > 0 ? time_sum / total : 0.0; }
};

// Aggregated success-rate / cost / latency view over the corpus, sliced by
// action count and by variant, plus the failure histogram.
struct BenchmarkReport {
    std::string agent_label;
    int total = 0;
    int successes = 0;
    double cost_sum = 0.0;
    double time_sum = 0.0;
    std::map<int, SliceStats> by_action_count;
    std::map<std::string, SliceStats> by_variant;
    std::map<std::string, int> failure_histogram;

    json to_json() const;
    std::string to_table() const;
    static BenchmarkReport from_json(const json& j);
};

// Throws MissingVerdict when outcomes are empty.
BenchmarkReport aggregate(const std::vector<TaskOutcome>& outcomes,
                          const std::string& agent_label);

}  // namespace optctl::bench
