#pragma once

#include <string>

#include <json.hpp>

#include "optctl/tools/registry.hpp"

namespace optctl::mcp {

using ordered_json = nlohmann::ordered_json;

inline constexpr const char* kProtocolVersion = "2025-03-26";
inline constexpr const char* kServerName = "optctl-testbed";
inline constexpr const char* kServerVersion = "1.0.0";

// JSON-RPC error codes used on the wire.
inline constexpr int kParseError = -32700;
inline constexpr int kInvalidRequest = -32600;
inline constexpr int kMethodNotFound = -32601;
inline constexpr int kInvalidParams = -32602;
inline constexpr int kNotInitialized = -32002;

struct SessionState {
    std::string session_id;
    bool initialized = false;
    std::string negotiated_version;
};

// Wire shape of one tool entry (name, description, JSON-schema params).
ordered_json tool_wire_schema(const tools::ToolSpec& spec);
ordered_json tools_wire_list(const tools::Registry& registry);

// One protocol session: decodes a request line, applies the method against
// the registry/testbed, returns the serialized response (no trailing newline).
// Tool errors travel in-band as `isError` results; protocol-level errors are
// reserved for malformed or out-of-order requests.
class SessionHandler {
public:
    SessionHandler(const tools::Registry& registry, sim::Testbed& testbed,
                   std::string session_id = "session");

    std::string handle_line(const std::string& line);

    const SessionState& state() const { return state_; }

private:
    ordered_json handle_request(const nlohmann::json& request);

    const tools::Registry& registry_;
    sim::Testbed& testbed_;
    SessionState state_;
    long next_call_ = 1;
};

}  // namespace optctl::mcp
