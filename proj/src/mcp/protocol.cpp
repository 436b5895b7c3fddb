#include "optctl/mcp/protocol.hpp"

namespace optctl::mcp {

using nlohmann::json;

ordered_json tool_wire_schema(const tools::ToolSpec& spec) {
    ordered_json schema;
    schema["type"] = "object";
    ordered_json props = ordered_json::object();
    ordered_json required = ordered_json::array();
    for (const auto& p : spec.params) {
        ordered_json pj;
        switch (p.kind) {
            case tools::ParamSpec::Kind::number: pj["type"] = "number"; break;
            case tools::ParamSpec::Kind::integer: pj["type"] = "integer"; break;
            case tools::ParamSpec::Kind::string: pj["type"] = "string"; break;
            case tools::ParamSpec::Kind::enumeration: pj["type"] = "string"; break;
        }
        std::string desc = p.description;
        if (!p.unit.empty()) desc += " (" + p.unit + ")";
        pj["description"] = desc;
        if (p.min) pj["minimum"] = *p.min;
        if (p.max) pj["maximum"] = *p.max;
        if (!p.allowed.empty()) pj["enum"] = p.allowed;
        props[p.name] = pj;
        if (p.required) required.push_back(p.name);
    }
    schema["properties"] = props;
    schema["required"] = required;

    ordered_json t;
    t["name"] = spec.name;
    t["description"] = spec.description;
    t["inputSchema"] = schema;
    return t;
}

ordered_json tools_wire_list(const tools::Registry& registry) {
    ordered_json arr = ordered_json::array();
    for (const auto& spec : registry.specs()) arr.push_back(tool_wire_schema(spec));
    return arr;
}

namespace {

ordered_json make_error(const json& id, int code, const std::string& message) {
    ordered_json r;
    r["jsonrpc"] = "2.0";
    r["id"] = id.is_discarded() ? json(nullptr) : id;
    ordered_json e;
    e["code"] = code;
    e["message"] = message;
    r["error"] = e;
    return r;
}

ordered_json make_result(const json& id, ordered_json result) {
    ordered_json r;
    r["jsonrpc"] = "2.0";
    r["id"] = id;
    r["result"] = std::move(result);
    return r;
}

}  // namespace

SessionHandler::SessionHandler(const tools::Registry& registry, sim::Testbed& testbed,
                               std::string session_id)
    : registry_(registry), testbed_(testbed) {
    state_.session_id = std::move(session_id);
}

std::string SessionHandler::handle_line(const std::string& line) {
    json request = json::parse(line, nullptr, false);
    if (request.is_discarded()) {
        return make_error(json(), kParseError, "parse error").dump();
    }
    return handle_request(request).dump();
}

ordered_json SessionHandler::handle_request(const json& request) {
    if (!request.is_object() || !request.contains("method") ||
        !request.at("method").is_string()) {
        return make_error(request.is_object() ? request.value("id", json(nullptr))
                                              : json(nullptr),
                          kInvalidRequest, "invalid request");
    }
    const json id = request.value("id", json(nullptr));
    if (id.is_null()) {
        return make_error(id, kInvalidRequest, "request id is required");
    }
    const std::string method = request.at("method").get<std::string>();
    const json params = request.value("params", json::object());

    if (method == "initialize") {
        const std::string requested = params.value("protocolVersion", kProtocolVersion);
        if (requested != kProtocolVersion) {
            return make_error(id, kInvalidParams,
                              std::string("unsupported protocol version '") + requested +
                                  "'; server speaks " + kProtocolVersion);
        }
        state_.initialized = true;
        state_.negotiated_version = requested;
        ordered_json result;
        result["protocolVersion"] = kProtocolVersion;
        result["capabilities"] = ordered_json{{"tools", ordered_json::object()}};
        ordered_json info;
        info["name"] = kServerName;
        info["version"] = kServerVersion;
        result["serverInfo"] = info;
        return make_result(id, std::move(result));
    }

    if (!state_.initialized) {
        return make_error(id, kNotInitialized, "session not initialized");
    }

    if (method == "tools/list") {
        ordered_json result;
        result["tools"] = tools_wire_list(registry_);
        return make_result(id, std::move(result));
    }

    if (method == "tools/call") {
        if (!params.is_object() || !params.contains("name") || !params.at("name").is_string()) {
            return make_error(id, kInvalidParams, "tools/call requires a tool name");
        }
        tools::ToolCall call;
        call.call_id = "call-" + std::to_string(next_call_++);
        call.tool = params.at("name").get<std::string>();
        call.args = params.value("arguments", json::object());
        const tools::ToolResult tr = registry_.dispatch(call, testbed_);

        ordered_json result;
        ordered_json content = ordered_json::array();
        ordered_json item;
        item["type"] = "text";
        if (tr.ok()) {
            item["text"] = tr.payload.dump();
        } else {
            item["text"] =
                json{{"error_code", tr.error_code}, {"error_message", tr.error_message}}.dump();
        }
        content.push_back(item);
        result["content"] = content;
        result["isError"] = !tr.ok();
        return make_result(id, std::move(result));
    }

    return make_error(id, kMethodNotFound, "unknown method '" + method + "'");
}

}  // namespace optctl::mcp
