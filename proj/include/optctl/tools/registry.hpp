#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "optctl/sim/testbed.hpp"

namespace optctl::tools {

using nlohmann::json;

struct ParamSpec {
    enum class Kind { number, integer, string, enumeration };

    std::string name;
    Kind kind = Kind::number;
    std::string unit;  // empty when unitless
    std::string description;
    bool required = true;
    std::optional<double> min;
    std::optional<double> max;
    std::vector<std::string> allowed;  // enumeration values

    json to_json() const;
};

struct ToolSpec {
    std::string name;         // snake_case, device prefix
    std::string description;
    std::string device_id;    // device group: roadm, cfp2, arof, osa, ocs, mems, pod, pcd, ...
    std::vector<ParamSpec> params;
    bool mutating = false;
    std::string readback;     // tool through which this tool's effect is observable

    json to_json() const;
};

struct ToolCall {
    std::string call_id;
    std::string tool;
    json args = json::object();
};

struct ToolResult {
    enum class Status { ok, error };

    std::string call_id;
    Status status = Status::ok;
    json payload;
    std::string error_code;
    std::string error_message;

    bool ok() const { return status == Status::ok; }
    json to_json() const;
    static ToolResult make_ok(std::string call_id, json payload);
    static ToolResult make_error(std::string call_id, std::string code, std::string message);
};

// How dispatch serializes a tool against the testbed.
enum class LockMode {
    read,     // shared device lock
    write,    // unique device lock + shared snapshot lock
    snapshot  // unique device lock + unique snapshot lock (consistent multi-device view)
};

using DeviceResolver = std::function<sim::Device&(sim::Testbed&, const json& args)>;
using ToolHandler =
    std::function<json(sim::Testbed&, sim::Device&, const json& args, bool commit)>;

// Immutable after construction; dispatch serializes per target device.
class Registry {
public:
    // Tools for the device kinds present in the testbed.
    static Registry build_for(const sim::Testbed& testbed);

    const std::vector<ToolSpec>& specs() const { return specs_; }
    const ToolSpec* find(const std::string& name) const;

    // All specs, ordered by name, optionally filtered by device group.
    std::vector<ToolSpec> list_tools(const std::optional<std::string>& device_filter = {}) const;
    std::map<std::string, int> per_device_counts() const;

    // Full validation pipeline, then execution. Validation happens strictly
    // before any mutation.
    ToolResult dispatch(const ToolCall& call, sim::Testbed& testbed) const;
    // Identical validation pipeline without touching state.
    ToolResult validate_only(const ToolCall& call, sim::Testbed& testbed) const;

    // Serialized ToolSpec records (the registry manifest).
    json manifest() const;

    struct Entry {
        ToolSpec spec;
        DeviceResolver resolve;
        ToolHandler handler;
        LockMode lock = LockMode::read;
    };
    void add(Entry entry);

private:
    ToolResult run(const ToolCall& call, sim::Testbed& testbed, bool commit) const;

    std::vector<ToolSpec> specs_;  // sorted by name
    std::map<std::string, Entry> entries_;
};

// Defined in handlers.cpp: registers tool groups for the given device kinds.
void register_core_tools(Registry& r, const std::vector<sim::DeviceKind>& kinds);
void register_extension_tools(Registry& r, const std::vector<sim::DeviceKind>& kinds);

}  // namespace optctl::tools
