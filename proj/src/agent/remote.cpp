#include "optctl/agent/remote.hpp"

#include <httplib.h>

#include <chrono>
#include <cstdlib>
#include <fstream>

#include "optctl/sim/error.hpp"

namespace optctl::agent {

const std::string& system_preamble() {
    static const std::string preamble =
        "You are an operator of an optical device testbed. Use the provided tools to carry out "
        "the user's request exactly; never invent tool names or parameter values. If a request "
        "is invalid, unsafe, or missing required values, do not call any tool that changes "
        "device state; instead refuse and name the defect. Answer concisely once the request is "
        "complete. [preamble-v1]";
    return preamble;
}

ModelEndpointConfig ModelEndpointConfig::from_json(const json& j, const std::string& model) {
    ModelEndpointConfig c;
    c.base_url = j.value("base_url", c.base_url);
    c.path = j.value("path", c.path);
    c.api_key_env = j.value("api_key_env", "");
    c.temperature = j.value("temperature", 0.0);
    c.max_rounds = j.value("max_rounds", 16);
    c.model_name = model;
    const auto& prices = j.value("prices", json::object());
    if (!prices.contains(model)) {
        throw ToolError(errc::config_invalid,
                        "model '" + model + "' has no price row in the endpoint config");
    }
    c.price_in_per_1m = prices.at(model).at("input_per_1m").get<double>();
    c.price_out_per_1m = prices.at(model).at("output_per_1m").get<double>();
    if (c.price_in_per_1m < 0 || c.price_out_per_1m < 0) {
        throw ToolError(errc::config_invalid, "prices must be >= 0");
    }
    if (c.max_rounds < 1) {
        throw ToolError(errc::config_invalid, "max_rounds must be >= 1");
    }
    return c;
}

ModelEndpointConfig ModelEndpointConfig::from_file(const std::string& path,
                                                   const std::string& model) {
    std::ifstream in(path);
    if (!in) {
        throw ToolError(errc::config_invalid, "cannot open endpoint config '" + path + "'");
    }
    json j;
    in >> j;
    return from_json(j, model);
}

namespace {

json tools_as_functions(const json& tool_schemas) {
    json arr = json::array();
    for (const auto& t : tool_schemas) {
        arr.push_back(json{{"type", "function"},
                           {"function",
                            {{"name", t.at("name")},
                             {"description", t.value("description", "")},
                             {"parameters", t.value("inputSchema", json::object())}}}});
    }
    return arr;
}

}  // namespace

Transcript run_task_remote(const std::string& prompt, const ModelEndpointConfig& config,
                           const json& tool_schemas, tools::ToolClient& client,
                           const std::string& task_id) {
    const auto started = std::chrono::steady_clock::now();

    Transcript t;
    t.task_id = task_id;
    t.agent_kind = AgentKind::remote;

    httplib::Client http(config.base_url);
    http.set_read_timeout(120, 0);
    httplib::Headers headers;
    if (!config.api_key_env.empty()) {
        const char* key = std::getenv(config.api_key_env.c_str());
        if (key != nullptr && key[0] != '\0') {
            headers.emplace("Authorization", std::string("Bearer ") + key);
        }
    }

    json messages = json::array();
    messages.push_back({{"role", "system"}, {"content", system_preamble()}});
    messages.push_back({{"role", "user"}, {"content", prompt}});
    const json functions = tools_as_functions(tool_schemas);

    long call_seq = 1;
    for (int round_idx = 0; round_idx < config.max_rounds; ++round_idx) {
        json body;
        body["model"] = config.model_name;
        body["messages"] = messages;
        body["tools"] = functions;
        body["temperature"] = config.temperature;

        auto res = http.Post(config.path, headers, body.dump(), "application/json");
        if (!res) {
            throw ToolError(errc::endpoint_unreachable,
                            "cannot reach " + config.base_url + config.path);
        }
        if (res->status != 200) {
            throw ToolError(errc::endpoint_unreachable,
                            "endpoint returned HTTP " + std::to_string(res->status) + ": " +
                                res->body);
        }
        const json reply = json::parse(res->body, nullptr, false);
        if (reply.is_discarded() || !reply.contains("choices") || reply.at("choices").empty()) {
            throw ToolError(errc::malformed_model_reply, "reply carries no choices");
        }
        if (reply.contains("usage")) {
            t.prompt_tokens += reply.at("usage").value("prompt_tokens", 0);
            t.completion_tokens += reply.at("usage").value("completion_tokens", 0);
        }
        const json message = reply.at("choices").at(0).value("message", json::object());

        Round round;
        round.assistant_output = message.value("content", json(nullptr)).is_string()
                                     ? message.at("content").get<std::string>()
                                     : "";

        const json tool_calls = message.value("tool_calls", json::array());
        if (tool_calls.empty()) {
            t.final_answer = round.assistant_output;
            t.rounds.push_back(std::move(round));
            t.wall_time_s =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
                    .count();
            return t;
        }

        messages.push_back(message);  // assistant turn with its tool calls

        for (const auto& tc : tool_calls) {
            const std::string tc_id =
                tc.value("id", "call-" + std::to_string(call_seq++));
            const json fn = tc.value("function", json::object());
            const std::string name = fn.value("name", "");
            const json args =
                json::parse(fn.value("arguments", "{}"), nullptr, false);

            ToolExchange ex;
            ex.call.call_id = tc_id;
            ex.call.tool = name;
            if (name.empty() || args.is_discarded() || !args.is_object()) {
                // Unparseable tool call: record it and keep the loop going
                // with an error tool message.
                ex.call.args = json::object();
                ex.result = tools::ToolResult::make_error(
                    tc_id, errc::malformed_model_reply,
                    "tool call could not be parsed; arguments must be a JSON object");
            } else {
                ex.call.args = args;
                ex.result = client.call(name, args);
                ex.result.call_id = tc_id;
            }
            messages.push_back({{"role", "tool"},
                                {"tool_call_id", tc_id},
                                {"content", ex.result.to_json().dump()}});
            round.exchanges.push_back(std::move(ex));
        }
        t.rounds.push_back(std::move(round));
    }

    throw ToolError(errc::round_limit_exceeded,
                    "no final answer within " + std::to_string(config.max_rounds) + " rounds");
}

double cost_of(const Transcript& transcript, const ModelEndpointConfig& config) {
    if (transcript.agent_kind == AgentKind::oracle) return 0.0;
    return (static_cast<double>(transcript.prompt_tokens) * config.price_in_per_1m +
            static_cast<double>(transcript.completion_tokens) * config.price_out_per_1m) /
           1e6;
}

}  // namespace optctl::agent
