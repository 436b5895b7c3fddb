#pragma once

#include <string>

#include <json.hpp>

#include "optctl/tools/registry.hpp"

namespace optctl::tools {

// Uniform surface through which agents and controllers reach tools, whether
// dispatch happens in-process or over the wire.
class ToolClient {
public:
    virtual ~ToolClient() = default;

    // Tool entries in wire shape: [{name, description, inputSchema}, ...].
    virtual json list_tools_schema() = 0;

    virtual ToolResult call(const std::string& tool, const json& args) = 0;
};

}  // namespace optctl::tools
