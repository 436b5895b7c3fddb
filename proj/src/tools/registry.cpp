#include "optctl/tools/registry.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <shared_mutex>

#include "optctl/sim/error.hpp"

namespace optctl::tools {

json ParamSpec::to_json() const {
    json j;
    j["name"] = name;
    switch (kind) {
        case Kind::number: j["kind"] = "number"; break;
        case Kind::integer: j["kind"] = "integer"; break;
        case Kind::string: j["kind"] = "string"; break;
        case Kind::enumeration: j["kind"] = "enum"; break;
    }
    if (!unit.empty()) j["unit"] = unit;
    j["description"] = description;
    j["required"] = required;
    if (min) j["min"] = *min;
    if (max) j["max"] = *max;
    if (!allowed.empty()) j["allowed"] = allowed;
    return j;
}

json ToolSpec::to_json() const {
    json j;
    j["name"] = name;
    j["description"] = description;
    j["device_id"] = device_id;
    json params_j = json::array();
    for (const auto& p : params) params_j.push_back(p.to_json());
    j["params"] = params_j;
    j["mutating"] = mutating;
    if (!readback.empty()) j["readback"] = readback;
    return j;
}

json ToolResult::to_json() const {
    json j;
    j["call_id"] = call_id;
    j["status"] = ok() ? "ok" : "error";
    if (ok()) {
        j["payload"] = payload;
    } else {
        j["error_code"] = error_code;
        j["error_message"] = error_message;
    }
    return j;
}

ToolResult ToolResult::make_ok(std::string call_id, json payload) {
    ToolResult r;
    r.call_id = std::move(call_id);
    r.status = Status::ok;
    r.payload = std::move(payload);
    return r;
}

ToolResult ToolResult::make_error(std::string call_id, std::string code, std::string message) {
    ToolResult r;
    r.call_id = std::move(call_id);
    r.status = Status::error;
    r.error_code = std::move(code);
    r.error_message = std::move(message);
    return r;
}

void Registry::add(Entry entry) {
    const std::string name = entry.spec.name;
    if (entries_.count(name)) {
        throw ToolError(errc::config_invalid, "duplicate tool name '" + name + "'");
    }
    // Required params listed before optional ones.
    bool seen_optional = false;
    for (const auto& p : entry.spec.params) {
        if (!p.required) seen_optional = true;
        else if (seen_optional) {
            throw ToolError(errc::config_invalid,
                            "tool '" + name + "' lists a required param after an optional one");
        }
    }
    specs_.push_back(entry.spec);
    entries_[name] = std::move(entry);
    std::sort(specs_.begin(), specs_.end(),
              [](const ToolSpec& a, const ToolSpec& b) { return a.name < b.name; });
}

Registry Registry::build_for(const sim::Testbed& testbed) {
    Registry r;
    const auto kinds = testbed.present_kinds();
    register_core_tools(r, kinds);
    register_extension_tools(r, kinds);
    return r;
}

const ToolSpec* Registry::find(const std::string& name) const {
    auto it = entries_.find(name);
    return it == entries_.end() ? nullptr : &it->second.spec;
}

std::vector<ToolSpec> Registry::list_tools(const std::optional<std::string>& device_filter) const {
    if (!device_filter) return specs_;
    std::vector<ToolSpec> out;
    for (const auto& s : specs_) {
        if (s.device_id == *device_filter) out.push_back(s);
    }
    if (out.empty()) {
        throw ToolError(errc::unknown_device,
                        "no tools registered for device '" + *device_filter + "'");
    }
    return out;
}

std::map<std::string, int> Registry::per_device_counts() const {
    std::map<std::string, int> counts;
    for (const auto& s : specs_) counts[s.device_id]++;
    return counts;
}

json Registry::manifest() const {
    json arr = json::array();
    for (const auto& s : specs_) arr.push_back(s.to_json());
    return arr;
}

namespace {

std::string range_text(const ParamSpec& p) {
    std::string s = "[";
    s += p.min ? std::to_string(*p.min) : "-inf";
    s += ", ";
    s += p.max ? std::to_string(*p.max) : "inf";
    s += "]";
    if (!p.unit.empty()) s += " " + p.unit;
    return s;
}

void check_param(const ParamSpec& p, const json& value) {
    using Kind = ParamSpec::Kind;
    switch (p.kind) {
        case Kind::number:
        case Kind::integer: {
            if (!value.is_number()) {
                throw ToolError(errc::param_out_of_range,
                                "parameter '" + p.name + "' must be a number");
            }
            const double v = value.get<double>();
            if (p.kind == Kind::integer && std::floor(v) != v) {
                throw ToolError(errc::param_out_of_range,
                                "parameter '" + p.name + "' must be an integer");
            }
            if ((p.min && v < *p.min) || (p.max && v > *p.max)) {
                throw ToolError(errc::param_out_of_range,
                                "parameter '" + p.name + "' out of range: got " +
                                    std::to_string(v) + ", allowed " + range_text(p));
            }
            break;
        }
        case Kind::string:
            if (!value.is_string()) {
                throw ToolError(errc::param_out_of_range,
                                "parameter '" + p.name + "' must be a string");
            }
            break;
        case Kind::enumeration: {
            if (!value.is_string()) {
                throw ToolError(errc::param_out_of_range,
                                "parameter '" + p.name + "' must be one of its allowed values");
            }
            const auto s = value.get<std::string>();
            if (std::find(p.allowed.begin(), p.allowed.end(), s) == p.allowed.end()) {
                std::string allowed;
                for (const auto& a : p.allowed) {
                    if (!allowed.empty()) allowed += ", ";
                    allowed += a;
                }
                throw ToolError(errc::param_out_of_range, "parameter '" + p.name + "' must be one of {" +
                                                               allowed + "}, got '" + s + "'");
            }
            break;
        }
    }
}

}  // namespace

ToolResult Registry::run(const ToolCall& call, sim::Testbed& testbed, bool commit) const {
    auto it = entries_.find(call.tool);
    if (it == entries_.end()) {
        return ToolResult::make_error(call.call_id, errc::nonexistent_tool,
                                      "tool '" + call.tool + "' is not registered");
    }
    const Entry& entry = it->second;

    try {
        const json args = call.args.is_null() ? json::object() : call.args;
        if (!args.is_object()) {
            throw ToolError(errc::param_out_of_range, "arguments must be a JSON object");
        }
        for (const auto& p : entry.spec.params) {
            if (p.required && !args.contains(p.name)) {
                throw ToolError(errc::missing_param,
                                "missing required parameter '" + p.name + "'");
            }
        }
        for (const auto& p : entry.spec.params) {
            if (args.contains(p.name)) check_param(p, args.at(p.name));
        }

        sim::Device& dev = entry.resolve(testbed, args);

        // Lock ordering: device mutex strictly before the snapshot mutex.
        const LockMode mode = commit ? entry.lock : LockMode::read;
        json payload;
        switch (mode) {
            case LockMode::read: {
                std::shared_lock dev_lock(dev.mutex);
                payload = entry.handler(testbed, dev, args, commit);
                break;
            }
            case LockMode::write: {
                std::unique_lock dev_lock(dev.mutex);
                std::shared_lock snap(testbed.snapshot_mutex());
                payload = entry.handler(testbed, dev, args, commit);
                break;
            }
            case LockMode::snapshot: {
                std::unique_lock dev_lock(dev.mutex);
                std::unique_lock snap(testbed.snapshot_mutex());
                payload = entry.handler(testbed, dev, args, commit);
                break;
            }
        }
        return ToolResult::make_ok(call.call_id, std::move(payload));
    } catch (const ToolError& e) {
        return ToolResult::make_error(call.call_id, e.code(), e.what());
    }
}

ToolResult Registry::dispatch(const ToolCall& call, sim::Testbed& testbed) const {
    return run(call, testbed, true);
}

ToolResult Registry::validate_only(const ToolCall& call, sim::Testbed& testbed) const {
    return run(call, testbed, false);
}

}  // namespace optctl::tools
