#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <set>

#include "optctl/agent/local_client.hpp"
#include "optctl/agent/oracle.hpp"
#include "optctl/bench/corpus.hpp"
#include "optctl/bench/report.hpp"
#include "optctl/bench/runner.hpp"
#include "optctl/bench/scorer.hpp"

using namespace optctl;
using namespace optctl::bench;
using nlohmann::json;

namespace {

std::string fixture(const std::string& name) { return std::string(OPTCTL_FIXTURES) + "/" + name; }

TaskManifest load_manifest() { return TaskManifest::from_file(fixture("tasks_manifest.json")); }

json load_bench_topology() {
    std::ifstream in(fixture("bench.json"));
    json j;
    in >> j;
    return j;
}

// Scores a hand-built transcript without executing it.
Verdict score_transcript(const TaskRecord& task,
                         const std::vector<std::pair<std::string, json>>& calls,
                         bool execute_first = false) {
    sim::Testbed tb = sim::Testbed::from_json(load_bench_topology());
    const auto registry = tools::Registry::build_for(tb);
    const json baseline = tb.fingerprint();

    agent::Transcript t;
    t.task_id = task.id;
    t.final_answer = "done";
    agent::Round round;
    long seq = 0;
    for (const auto& [tool, args] : calls) {
        agent::ToolExchange ex;
        ex.call.call_id = "x-" + std::to_string(++seq);
        ex.call.tool = tool;
        ex.call.args = args;
        if (execute_first) {
            tools::ToolCall c;
            c.call_id = ex.call.call_id;
            c.tool = tool;
            c.args = args;
            ex.result = registry.dispatch(c, tb);
        } else {
            ex.result = tools::ToolResult::make_ok(ex.call.call_id, json::object());
        }
        round.exchanges.push_back(std::move(ex));
    }
    t.rounds.push_back(std::move(round));
    return score(task, t, tb, baseline, registry);
}

const TaskRecord& find_task(const std::vector<TaskRecord>& corpus, const std::string& id) {
    for (const auto& t : corpus) {
        if (t.id == id) return t;
    }
    REQUIRE(false);
    return corpus.front();
}

}  // namespace

TEST_CASE("manifest validates counts and device coverage") {
    const auto manifest = load_manifest();
    CHECK(manifest.single.size() == 10);
    CHECK(manifest.dual.size() == 10);
    CHECK(manifest.triple.size() == 10);

    // Nine single basics is invalid.
    std::ifstream in(fixture("tasks_manifest.json"));
    json j;
    in >> j;
    j["single"].erase(0);
    CHECK_THROWS_AS(TaskManifest::from_json(j), ToolError);
}

TEST_CASE("corpus cardinality is 160/150/100 for any seed") {
    const auto manifest = load_manifest();
    for (std::uint32_t seed : {1u, 2u, 42u, 20260810u}) {
        const auto corpus = generate_corpus(manifest, seed);
        CHECK(corpus.size() == 410);
        std::map<int, int> per_actions;
        std::map<std::string, int> per_variant;
        std::set<std::string> ids;
        for (const auto& t : corpus) {
            per_actions[t.action_count]++;
            per_variant[to_string(t.variant)]++;
            CHECK(ids.insert(t.id).second);
        }
        CHECK(per_actions[1] == 160);
        CHECK(per_actions[2] == 150);
        CHECK(per_actions[3] == 100);
        CHECK(per_variant["paraphrase"] == 150);
        CHECK(per_variant["non_sequitur"] == 150);
        CHECK(per_variant["error"] == 30);
        CHECK(per_variant["role"] == 30);
        CHECK(per_variant["chain"] == 50);
    }
}

TEST_CASE("corpus generation is deterministic for a fixed seed") {
    const auto manifest = load_manifest();
    const auto a = generate_corpus(manifest, 7);
    const auto b = generate_corpus(manifest, 7);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) CHECK(a[i].to_json() == b[i].to_json());

    // A different seed still yields the same ids, possibly different prompts.
    const auto c = generate_corpus(manifest, 8);
    bool any_prompt_differs = false;
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].id == c[i].id);
        if (a[i].prompt != c[i].prompt) any_prompt_differs = true;
    }
    CHECK(any_prompt_differs);
}

TEST_CASE("variant structure: restrictions, neutrality, and the fixed clause") {
    const auto manifest = load_manifest();
    const auto corpus = generate_corpus(manifest, 1);

    bool saw_bench_mat = false;
    for (const auto& t : corpus) {
        if (t.variant == Variant::error || t.variant == Variant::role) {
            CHECK(t.action_count == 1);
        }
        if (t.variant == Variant::chain) CHECK(t.action_count == 2);
        if (t.variant == Variant::error) {
            CHECK(t.ground_truth.expectation == Expectation::reject);
            CHECK_FALSE(t.ground_truth.rejection_reason.empty());
        } else {
            CHECK(t.ground_truth.expectation == Expectation::execute);
        }
        if (t.prompt.find("the bench mat has a curled corner") != std::string::npos) {
            saw_bench_mat = true;
            CHECK(t.variant == Variant::non_sequitur);
        }
    }
    CHECK(saw_bench_mat);

    // Paraphrase/role/non-sequitur ground truth is structurally identical to
    // the base task's; chains sequence the dual's steps strictly.
    for (const auto& base : manifest.single) {
        json expected = json::array();
        for (const auto& a : base.actions) {
            for (const auto& s : a.steps) expected.push_back(s.to_json());
        }
        for (const auto& t : corpus) {
            if (t.id.rfind(base.id + "-", 0) != 0) continue;
            if (t.variant == Variant::error) continue;
            json got = json::array();
            for (const auto& s : t.ground_truth.steps) got.push_back(s.to_json());
            CHECK(got == expected);
        }
    }
    for (const auto& base : manifest.dual) {
        for (const auto& t : corpus) {
            if (t.id.rfind(base.id + "-chain", 0) != 0) continue;
            CHECK(t.ground_truth.ordering == Ordering::strict);
            CHECK(t.ground_truth.steps.size() ==
                  base.actions[0].steps.size() + base.actions[1].steps.size());
        }
    }
}

TEST_CASE("corpus round-trips through JSONL") {
    const auto manifest = load_manifest();
    const auto corpus = generate_corpus(manifest, 3);
    const std::string path = "/tmp/optctl_corpus_test.jsonl";
    write_corpus_jsonl(corpus, path);
    const auto loaded = read_corpus_jsonl(path);
    REQUIRE(loaded.size() == corpus.size());
    for (size_t i = 0; i < corpus.size(); ++i) {
        CHECK(loaded[i].to_json() == corpus[i].to_json());
    }
}

TEST_CASE("oracle scores success on every task (sampled)") {
    const auto manifest = load_manifest();
    const auto corpus = generate_corpus(manifest, 1);
    const json topology = load_bench_topology();

    // One variant of each base: the acceptance suite runs all 410.
    std::set<std::string> seen_prefix;
    RunOptions options;
    int checked = 0;
    for (const auto& task : corpus) {
        const std::string prefix = task.id.substr(0, 3);
        const std::string key = prefix + "-" + to_string(task.variant);
        if (!seen_prefix.insert(key).second) continue;
        const auto outcomes = run_benchmark({task}, topology, options);
        REQUIRE(outcomes.size() == 1);
        INFO(task.id, " -> ", outcomes[0].verdict.detail);
        CHECK(outcomes[0].verdict.success);
        checked++;
    }
    CHECK(checked >= 60);
}

TEST_CASE("scorer taxonomy on constructed transcripts") {
    const auto manifest = load_manifest();
    const auto corpus = generate_corpus(manifest, 1);

    // s03: osa_set_start_wavelength{nm:1540}.
    const TaskRecord& s03 = find_task(corpus, "s03-para-1");

    SUBCASE("success on the oracle path") {
        const auto v =
            score_transcript(s03, {{"osa_set_start_wavelength", {{"nm", 1540}}}}, true);
        CHECK(v.success);
    }
    SUBCASE("IncorrectTool: a registered neighbor tool") {
        const auto v =
            score_transcript(s03, {{"osa_set_center_wavelength", {{"nm", 1540}}}}, true);
        REQUIRE(v.failure.has_value());
        CHECK(*v.failure == FailureCategory::IncorrectTool);
    }
    SUBCASE("NonexistentTool: an undefined name") {
        const auto v = score_transcript(s03, {{"cfp2_get_voltage", json::object()}});
        REQUIRE(v.failure.has_value());
        CHECK(*v.failure == FailureCategory::NonexistentTool);
    }
    SUBCASE("WrongArgs: right tool, perturbed value") {
        const auto v =
            score_transcript(s03, {{"osa_set_start_wavelength", {{"nm", 1541}}}}, true);
        REQUIRE(v.failure.has_value());
        CHECK(*v.failure == FailureCategory::WrongArgs);
    }
    SUBCASE("MissingTool: nothing was called") {
        const auto v = score_transcript(s03, {});
        REQUIRE(v.failure.has_value());
        CHECK(*v.failure == FailureCategory::MissingTool);
    }
    SUBCASE("StateMismatch: calls match but the device was never touched") {
        const auto v =
            score_transcript(s03, {{"osa_set_start_wavelength", {{"nm", 1540}}}}, false);
        REQUIRE(v.failure.has_value());
        CHECK(*v.failure == FailureCategory::StateMismatch);
    }

    // d01 strict: set start 1540 then stop 1550.
    const TaskRecord& d01 = find_task(corpus, "d01-para-1");
    SUBCASE("OrderViolation on a reversed strict pair") {
        const auto v = score_transcript(d01,
                                        {{"osa_set_stop_wavelength", {{"nm", 1550}}},
                                         {"osa_set_start_wavelength", {{"nm", 1540}}}},
                                        true);
        REQUIRE(v.failure.has_value());
        CHECK(*v.failure == FailureCategory::OrderViolation);
    }
    SUBCASE("extra reads are fine, extra mutations are not") {
        const auto ok = score_transcript(d01,
                                         {{"osa_set_start_wavelength", {{"nm", 1540}}},
                                          {"osa_get_start_wavelength", json::object()},
                                          {"osa_set_stop_wavelength", {{"nm", 1550}}}},
                                         true);
        CHECK(ok.success);
        const auto bad = score_transcript(d01,
                                          {{"osa_set_start_wavelength", {{"nm", 1540}}},
                                           {"osa_set_stop_wavelength", {{"nm", 1550}}},
                                           {"osa_set_sweep_points", {{"points", 101}}}},
                                          true);
        REQUIRE(bad.failure.has_value());
        CHECK(*bad.failure == FailureCategory::IncorrectTool);
    }

    // d09 is declared independent: reversed order still passes.
    const TaskRecord& d09 = find_task(corpus, "d09-para-1");
    SUBCASE("independent sets accept any order") {
        const auto v = score_transcript(d09,
                                        {{"osa_set_resolution_bandwidth", {{"nm", 0.05}}},
                                         {"osa_set_sweep_points", {{"points", 1001}}}},
                                        true);
        CHECK(v.success);
    }

    // Error variant: any successful mutation is forbidden.
    const TaskRecord& err = find_task(corpus, "s01-err-1");
    SUBCASE("ForbiddenMutation when a reject task mutates anyway") {
        const auto v = score_transcript(
            err, {{"cfp2_set_output_power", {{"port", "cfp2-opt-1-1"}, {"power_dbm", -5}}}},
            true);
        REQUIRE(v.failure.has_value());
        CHECK(*v.failure == FailureCategory::ForbiddenMutation);
    }
    SUBCASE("reject succeeds with zero calls and a non-empty answer") {
        const auto v = score_transcript(err, {});
        CHECK(v.success);
    }
    SUBCASE("reject may read state without penalty") {
        const auto v =
            score_transcript(err, {{"cfp2_get_config", {{"port", "cfp2-opt-1-1"}}}}, true);
        CHECK(v.success);
    }
}

TEST_CASE("aggregate: rates, histogram conservation, and MissingVerdict") {
    CHECK_THROWS_AS(aggregate({}, "oracle"), ToolError);

    std::vector<TaskOutcome> outcomes;
    auto add = [&outcomes](int actions, Variant variant, bool success,
                           std::optional<FailureCategory> failure = std::nullopt) {
        TaskOutcome o;
        o.task.id = "t" + std::to_string(outcomes.size());
        o.task.action_count = actions;
        o.task.variant = variant;
        o.verdict.success = success;
        o.verdict.failure = failure;
        o.cost_usd = 0.001;
        o.transcript.wall_time_s = 0.5;
        outcomes.push_back(o);
    };
    for (int i = 0; i < 3; ++i) add(1, Variant::paraphrase, true);
    for (int i = 0; i < 2; ++i) add(1, Variant::paraphrase, false, FailureCategory::WrongArgs);
    for (int i = 0; i < 4; ++i) add(2, Variant::chain, true);
    add(2, Variant::chain, false, FailureCategory::OrderViolation);

    const auto report = aggregate(outcomes, "unit");
    CHECK(report.by_action_count.at(1).success_rate() == doctest::Approx(0.6));
    CHECK(report.by_action_count.at(2).success_rate() == doctest::Approx(0.8));
    CHECK(report.total == 10);
    CHECK(report.successes == 7);

    int histogram_total = 0;
    for (const auto& [name, count] : report.failure_histogram) histogram_total += count;
    CHECK(histogram_total == report.total - report.successes);

    const json j = report.to_json();
    CHECK(j.at("success_rate") == doctest::Approx(0.7));
    CHECK_FALSE(report.to_table().empty());
}

TEST_CASE("benchmark runner with workers matches the sequential run") {
    const auto manifest = load_manifest();
    auto corpus = generate_corpus(manifest, 1);
    corpus.resize(40);
    const json topology = load_bench_topology();

    RunOptions seq;
    RunOptions par;
    par.workers = 4;
    const auto a = run_benchmark(corpus, topology, seq);
    const auto b = run_benchmark(corpus, topology, par);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].verdict.success == b[i].verdict.success);
        CHECK(a[i].task.id == b[i].task.id);
    }
}
