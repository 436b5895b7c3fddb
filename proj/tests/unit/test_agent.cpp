#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <httplib.h>

#include <atomic>
#include <thread>

#include "optctl/agent/local_client.hpp"
#include "optctl/agent/oracle.hpp"
#include "optctl/agent/pricing.hpp"
#include "optctl/agent/remote.hpp"

using namespace optctl;
using namespace optctl::agent;
using nlohmann::json;

namespace {

std::string fixture(const std::string& name) { return std::string(OPTCTL_FIXTURES) + "/" + name; }

sim::Testbed bench_testbed() { return sim::Testbed::from_file(fixture("bench.json")); }

// Scripted chat-completions endpoint. Each entry is returned once, in order.
class MockModelServer {
public:
    explicit MockModelServer(std::vector<json> replies) : replies_(std::move(replies)) {
        server_.Post("/v1/chat/completions", [this](const httplib::Request& req,
                                                    httplib::Response& res) {
            last_request_ = json::parse(req.body);
            const size_t i = std::min(index_.fetch_add(1), replies_.size() - 1);
            res.set_content(replies_[i].dump(), "application/json");
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }

    ~MockModelServer() {
        server_.stop();
        thread_.join();
    }

    int port() const { return port_; }
    const json& last_request() const { return last_request_; }

private:
    httplib::Server server_;
    std::vector<json> replies_;
    std::atomic<size_t> index_{0};
    json last_request_;
    int port_ = 0;
    std::thread thread_;
};

json assistant_reply(const json& tool_calls, const std::string& content, int prompt_tokens,
                     int completion_tokens) {
    json message = {{"role", "assistant"}, {"content", content}};
    if (!tool_calls.empty()) message["tool_calls"] = tool_calls;
    return json{{"choices", json::array({json{{"message", message}}})},
                {"usage",
                 {{"prompt_tokens", prompt_tokens}, {"completion_tokens", completion_tokens}}}};
}

ModelEndpointConfig local_config(int port) {
    ModelEndpointConfig c;
    c.base_url = "http://127.0.0.1:" + std::to_string(port);
    c.model_name = "mock-model";
    c.price_in_per_1m = 0.15;
    c.price_out_per_1m = 0.60;
    c.max_rounds = 4;
    return c;
}

}  // namespace

TEST_CASE("action plans enforce the steps-xor-rejection invariant") {
    CHECK_THROWS_AS(ActionPlan::execute({}), std::invalid_argument);
    CHECK_THROWS_AS(ActionPlan::reject(""), std::invalid_argument);
    const auto plan = ActionPlan::execute({{"arof_get_status", json::object(), true}});
    CHECK_FALSE(plan.is_rejection());
    const auto rej = ActionPlan::reject("missing power_dbm");
    CHECK(rej.is_rejection());
}

TEST_CASE("oracle executes a plan and records paired exchanges") {
    sim::Testbed tb = bench_testbed();
    const auto registry = tools::Registry::build_for(tb);
    LocalClient client(registry, tb);

    const auto plan = ActionPlan::execute({
        {"arof_set_current", {{"ma", 99}}, true},
        {"arof_set_bias_voltage", {{"volts", -0.9}}, true},
        {"arof_get_status", json::object(), true},
    });
    const Transcript t = run_task_oracle(plan, client, "demo");

    CHECK(t.agent_kind == AgentKind::oracle);
    CHECK(t.prompt_tokens == 0);
    CHECK(t.completion_tokens == 0);
    CHECK(t.wall_time_s >= 0.0);
    CHECK(t.exchanges().size() == 3);
    CHECK_FALSE(t.final_answer.empty());

    // call_ids biject between issued calls and results.
    for (const auto* ex : t.exchanges()) {
        CHECK(ex->call.call_id == ex->result.call_id);
        CHECK(ex->result.ok());
    }
    CHECK(tb.device("arof1").as<sim::ArofDevice>().state.drive_current_ma == 99.0);
}

TEST_CASE("oracle rejection path issues zero calls and names the defect") {
    sim::Testbed tb = bench_testbed();
    const auto registry = tools::Registry::build_for(tb);
    LocalClient client(registry, tb);
    const json before = tb.fingerprint();

    const Transcript t =
        run_task_oracle(ActionPlan::reject("missing required value: power_dbm"), client, "rej");
    CHECK(t.exchanges().empty());
    CHECK(t.final_answer.find("power_dbm") != std::string::npos);
    CHECK(tb.fingerprint() == before);
}

TEST_CASE("oracle raises UnexpectedToolError when an expected-ok step fails") {
    sim::Testbed tb = bench_testbed();
    const auto registry = tools::Registry::build_for(tb);
    LocalClient client(registry, tb);

    const auto plan = ActionPlan::execute({{"osa_set_start_wavelength", {{"nm", 0}}, true}});
    CHECK_THROWS_AS(run_task_oracle(plan, client, "boom"), ToolError);
}

TEST_CASE("oracle determinism: identical plan and testbed give identical transcripts") {
    const auto plan = ActionPlan::execute({
        {"osa_set_start_wavelength", {{"nm", 1540}}, true},
        {"osa_run_sweep", json::object(), true},
        {"osa_get_peaks", json::object(), true},
    });
    auto run = [&plan]() {
        sim::Testbed tb = bench_testbed();
        const auto registry = tools::Registry::build_for(tb);
        LocalClient client(registry, tb);
        json j = run_task_oracle(plan, client, "det").to_json();
        j.erase("wall_time_s");
        return j;
    };
    CHECK(run() == run());
}

TEST_CASE("cost accounting matches hand arithmetic for the five price rows") {
    const PriceTable table = PriceTable::from_file(fixture("endpoints.json"));
    REQUIRE(table.rows().size() == 5);

    Transcript t;
    t.agent_kind = AgentKind::remote;
    t.prompt_tokens = 10000;
    t.completion_tokens = 2000;

    const std::map<std::string, double> expected = {
        {"gpt-4o-mini", 0.0027}, {"gpt-5", 0.0325},          {"deepseek-v3", 0.005},
        {"claude-haiku-3.5", 0.02}, {"claude-sonnet-4.5", 0.06},
    };
    for (const auto& [model, cost] : expected) {
        const auto* row = table.find(model);
        REQUIRE(row != nullptr);
        ModelEndpointConfig c;
        c.model_name = model;
        c.price_in_per_1m = row->input_per_1m;
        c.price_out_per_1m = row->output_per_1m;
        CHECK(cost_of(t, c) == doctest::Approx(cost).epsilon(1e-9));
    }

    // Oracle transcripts and empty transcripts cost nothing.
    Transcript oracle = t;
    oracle.agent_kind = AgentKind::oracle;
    ModelEndpointConfig c;
    c.price_in_per_1m = 3.0;
    c.price_out_per_1m = 15.0;
    CHECK(cost_of(oracle, c) == 0.0);
    Transcript zero;
    zero.agent_kind = AgentKind::remote;
    CHECK(cost_of(zero, c) == 0.0);

    // Monotone in each token count.
    Transcript more = t;
    more.prompt_tokens += 1;
    CHECK(cost_of(more, c) >= cost_of(t, c));
    more = t;
    more.completion_tokens += 1;
    CHECK(cost_of(more, c) >= cost_of(t, c));
}

TEST_CASE("endpoint config loads a model's price row and rejects unknown models") {
    const auto cfg = ModelEndpointConfig::from_file(fixture("endpoints.json"), "gpt-4o-mini");
    CHECK(cfg.price_in_per_1m == 0.15);
    CHECK(cfg.price_out_per_1m == 0.60);
    CHECK(cfg.max_rounds == 16);
    CHECK_THROWS_AS(ModelEndpointConfig::from_file(fixture("endpoints.json"), "no-such-model"),
                    ToolError);
}

TEST_CASE("remote adapter: single tool call then final answer") {
    const json tool_calls = json::array(
        {{{"id", "tc-1"},
          {"type", "function"},
          {"function",
           {{"name", "osa_set_start_wavelength"}, {"arguments", R"({"nm":1545})"}}}}});
    MockModelServer server({
        assistant_reply(tool_calls, "", 120, 15),
        assistant_reply(json::array(), "The start wavelength is set to 1545 nm.", 140, 12),
    });

    sim::Testbed tb = bench_testbed();
    const auto registry = tools::Registry::build_for(tb);
    LocalClient client(registry, tb);

    const Transcript t = run_task_remote("Set the OSA start wavelength to 1545 nm",
                                         local_config(server.port()),
                                         client.list_tools_schema(), client, "remote-1");

    CHECK(t.agent_kind == AgentKind::remote);
    CHECK(t.rounds.size() == 2);
    REQUIRE(t.exchanges().size() == 1);
    CHECK(t.exchanges()[0]->call.tool == "osa_set_start_wavelength");
    CHECK(t.exchanges()[0]->result.ok());
    CHECK(t.final_answer == "The start wavelength is set to 1545 nm.");
    CHECK(t.prompt_tokens == 260);
    CHECK(t.completion_tokens == 27);
    CHECK(tb.device("osa1").as<sim::OsaDevice>().start_nm == 1545.0);

    // The request carried the system preamble and the tool schemas.
    const json& req = server.last_request();
    CHECK(req.at("messages").at(0).at("role") == "system");
    CHECK(req.at("tools").size() == 64);
}

TEST_CASE("remote adapter records malformed tool calls and keeps looping") {
    const json bad_call = json::array(
        {{{"id", "tc-1"},
          {"type", "function"},
          {"function", {{"name", "osa_run_sweep"}, {"arguments", "{not json"}}}}});
    MockModelServer server({
        assistant_reply(bad_call, "", 50, 5),
        assistant_reply(json::array(), "giving up politely", 60, 6),
    });

    sim::Testbed tb = bench_testbed();
    const auto registry = tools::Registry::build_for(tb);
    LocalClient client(registry, tb);

    const Transcript t = run_task_remote("Run a sweep", local_config(server.port()),
                                         client.list_tools_schema(), client, "remote-2");
    REQUIRE(t.exchanges().size() == 1);
    CHECK_FALSE(t.exchanges()[0]->result.ok());
    CHECK(t.exchanges()[0]->result.error_code == "MalformedModelReply");
    CHECK(t.final_answer == "giving up politely");
}

TEST_CASE("remote adapter stops at the round limit") {
    const json tool_calls = json::array(
        {{{"id", "tc-loop"},
          {"type", "function"},
          {"function", {{"name", "arof_get_status"}, {"arguments", "{}"}}}}});
    MockModelServer server(std::vector<json>{assistant_reply(tool_calls, "", 10, 1)});  // loops forever

    sim::Testbed tb = bench_testbed();
    const auto registry = tools::Registry::build_for(tb);
    LocalClient client(registry, tb);

    auto cfg = local_config(server.port());
    cfg.max_rounds = 3;
    CHECK_THROWS_AS(run_task_remote("loop", cfg, client.list_tools_schema(), client, "remote-3"),
                    ToolError);
}

TEST_CASE("remote adapter reports unreachable endpoints") {
    sim::Testbed tb = bench_testbed();
    const auto registry = tools::Registry::build_for(tb);
    LocalClient client(registry, tb);

    ModelEndpointConfig cfg;
    cfg.base_url = "http://127.0.0.1:1";  // reserved port, nothing listens
    cfg.model_name = "mock";
    try {
        run_task_remote("hello", cfg, client.list_tools_schema(), client, "remote-4");
        FAIL("endpoint should be unreachable");
    } catch (const ToolError& e) {
        CHECK(e.code() == std::string("EndpointUnreachable"));
    }
}
