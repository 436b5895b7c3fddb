#pragma once

#include <string>

#include "optctl/agent/transcript.hpp"
#include "optctl/tools/tool_client.hpp"

namespace optctl::agent {

// Endpoint description plus the per-token price row for cost accounting.
struct ModelEndpointConfig {
    std::string base_url = "http://127.0.0.1:8080";
    std::string path = "/v1/chat/completions";
    std::string model_name;
    std::string api_key_env;        // empty: send no Authorization header
    double price_in_per_1m = 0.0;   // $ per 1M input tokens
    double price_out_per_1m = 0.0;  // $ per 1M output tokens
    double temperature = 0.0;
    int max_rounds = 16;

    // Loads the endpoint file and selects one model's price row.
    static ModelEndpointConfig from_file(const std::string& path, const std::string& model);
    static ModelEndpointConfig from_json(const json& j, const std::string& model);
};

// The fixed, versioned system preamble presented to remote models.
const std::string& system_preamble();

// Chat loop against an OpenAI-style function-calling endpoint: send the task
// and the tool schemas, execute returned tool calls sequentially in reply
// order, feed results back, stop on a reply without tool calls.
Transcript run_task_remote(const std::string& prompt, const ModelEndpointConfig& config,
                           const json& tool_schemas, tools::ToolClient& client,
                           const std::string& task_id = "");

// $ cost of one transcript under a price row; oracle transcripts cost zero.
double cost_of(const Transcript& transcript, const ModelEndpointConfig& config);

}  // namespace optctl::agent
