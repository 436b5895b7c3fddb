#pragma once

#include "optctl/tools/tool_client.hpp"

namespace optctl::agent {

// In-process client: dispatch straight into the registry, bypassing the wire.
class LocalClient : public tools::ToolClient {
public:
    LocalClient(const tools::Registry& registry, sim::Testbed& testbed)
        : registry_(registry), testbed_(testbed) {}

    nlohmann::json list_tools_schema() override;
    tools::ToolResult call(const std::string& tool, const nlohmann::json& args) override;

private:
    const tools::Registry& registry_;
    sim::Testbed& testbed_;
    long next_call_ = 1;
};

}  // namespace optctl::agent
