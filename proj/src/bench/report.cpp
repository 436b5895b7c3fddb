#include "optctl/bench/report.hpp"

#include <cstdio>

#include "optctl/sim/error.hpp"

namespace optctl::bench {

namespace {

json slice_json(const SliceStats& s) {
    return json{{"total", s.total},
                {"successes", s.successes},
                {"success_rate", s.success_rate()},
                {"avg_cost_usd", s.avg_cost()},
                {"avg_time_s", s.avg_time()}};
}

SliceStats slice_from_json(const json& j) {
    SliceStats s;
    s.total = j.at("total").get<int>();
    s.successes = j.at("successes").get<int>();
    s.cost_sum = j.value("avg_cost_usd", 0.0) * s.total;
    s.time_sum = j.value("avg_time_s", 0.0) * s.total;
    return s;
}

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

}  // namespace

BenchmarkReport aggregate(const std::vector<TaskOutcome>& outcomes,
                          const std::string& agent_label) {
    if (outcomes.empty()) {
        throw ToolError(errc::missing_verdict, "no verdicts to aggregate");
    }
    BenchmarkReport r;
    r.agent_label = agent_label;
    for (const auto& o : outcomes) {
        auto bump = [&o](SliceStats& s) {
            s.total++;
            if (o.verdict.success) s.successes++;
            s.cost_sum += o.cost_usd;
            s.time_sum += o.transcript.wall_time_s;
        };
        bump(r.by_action_count[o.task.action_count]);
        bump(r.by_variant[to_string(o.task.variant)]);
        r.total++;
        if (o.verdict.success) {
            r.successes++;
        } else if (o.verdict.failure) {
            r.failure_histogram[to_string(*o.verdict.failure)]++;
        }
        r.cost_sum += o.cost_usd;
        r.time_sum += o.transcript.wall_time_s;
    }
    return r;
}

json BenchmarkReport::to_json() const {
    json by_actions = json::object();
    for (const auto& [count, s] : by_action_count) {
        by_actions[std::to_string(count)] = slice_json(s);
    }
    json by_var = json::object();
    for (const auto& [name, s] : by_variant) by_var[name] = slice_json(s);
    return json{{"agent", agent_label},
                {"total", total},
                {"successes", successes},
                {"success_rate", total > 0 ? static_cast<double>(successes) / total : 0.0},
                {"avg_cost_usd", total > 0 ? cost_sum / total : 0.0},
                {"avg_time_s", total > 0 ? time_sum / total : 0.0},
                {"by_action_count", by_actions},
                {"by_variant", by_var},
                {"failure_histogram", failure_histogram}};
}

BenchmarkReport BenchmarkReport::from_json(const json& j) {
    BenchmarkReport r;
    r.agent_label = j.value("agent", "");
    r.total = j.at("total").get<int>();
    r.successes = j.at("successes").get<int>();
    r.cost_sum = j.value("avg_cost_usd", 0.0) * r.total;
    r.time_sum = j.value("avg_time_s", 0.0) * r.total;
    for (const auto& [k, v] : j.value("by_action_count", json::object()).items()) {
        r.by_action_count[std::stoi(k)] = slice_from_json(v);
    }
    for (const auto& [k, v] : j.value("by_variant", json::object()).items()) {
        r.by_variant[k] = slice_from_json(v);
    }
    for (const auto& [k, v] : j.value("failure_histogram", json::object()).items()) {
        r.failure_histogram[k] = v.get<int>();
    }
    return r;
}

std::string BenchmarkReport::to_table() const {
    std::string out;
    out += "agent: " + agent_label + "\n";
    out += "overall: " + std::to_string(successes) + "/" + std::to_string(total) + " (" +
           fixed(total > 0 ? 100.0 * successes / total : 0.0, 1) + "%)  avg cost $" +
           fixed(total > 0 ? cost_sum / total : 0.0, 6) + "  avg time " +
           fixed(total > 0 ? time_sum / total : 0.0, 4) + " s\n\n";

    out += "success rate vs action count\n";
    out += "  actions   tasks   success   rate      avg $     avg s\n";
    for (const auto& [count, s] : by_action_count) {
        char line[160];
        std::snprintf(line, sizeof(line), "  %-9d %-7d %-9d %-9s %-9s %s\n", count, s.total,
                      s.successes, fixed(100.0 * s.success_rate(), 1).c_str(),
                      fixed(s.avg_cost(), 6).c_str(), fixed(s.avg_time(), 4).c_str());
        out += line;
    }

    out += "\nsuccess rate vs variant\n";
    out += "  variant        tasks   success   rate      avg $     avg s\n";
    for (const auto& [name, s] : by_variant) {
        char line[160];
        std::snprintf(line, sizeof(line), "  %-14s %-7d %-9d %-9s %-9s %s\n", name.c_str(),
                      s.total, s.successes, fixed(100.0 * s.success_rate(), 1).c_str(),
                      fixed(s.avg_cost(), 6).c_str(), fixed(s.avg_time(), 4).c_str());
        out += line;
    }

    if (!failure_histogram.empty()) {
        out += "\nfailure histogram\n";
        for (const auto& [name, count] : failure_histogram) {
            out += "  " + name + ": " + std::to_string(count) + "\n";
        }
    }
    return out;
}

}  // namespace optctl::bench
