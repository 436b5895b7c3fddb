#include "optctl/agent/local_client.hpp"

#include "optctl/mcp/protocol.hpp"

namespace optctl::agent {

nlohmann::json LocalClient::list_tools_schema() {
    return mcp::tools_wire_list(registry_);
}

tools::ToolResult LocalClient::call(const std::string& tool, const nlohmann::json& args) {
    tools::ToolCall call;
    call.call_id = "call-" + std::to_string(next_call_++);
    call.tool = tool;
    call.args = args;
    return registry_.dispatch(call, testbed_);
}

}  // namespace optctl::agent
