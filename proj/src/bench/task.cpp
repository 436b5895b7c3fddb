#include "optctl/bench/task.hpp"

#include <cmath>

#include "optctl/sim/error.hpp"

namespace optctl::bench {

std::string to_string(Variant v) {
    switch (v) {
        case Variant::base: return "base";
        case Variant::paraphrase: return "paraphrase";
        case Variant::non_sequitur: return "non_sequitur";
        case Variant::error: return "error";
        case Variant::role: return "role";
        case Variant::chain: return "chain";
    }
    return "base";
}

Variant variant_from_string(const std::string& s) {
    if (s == "base") return Variant::base;
    if (s == "paraphrase") return Variant::paraphrase;
    if (s == "non_sequitur") return Variant::non_sequitur;
    if (s == "error") return Variant::error;
    if (s == "role") return Variant::role;
    if (s == "chain") return Variant::chain;
    throw ToolError(errc::config_invalid, "unknown variant '" + s + "'");
}

std::string to_string(FailureCategory c) {
    switch (c) {
        case FailureCategory::MissingTool: return "MissingTool";
        case FailureCategory::IncorrectTool: return "IncorrectTool";
        case FailureCategory::NonexistentTool: return "NonexistentTool";
        case FailureCategory::WrongArgs: return "WrongArgs";
        case FailureCategory::OrderViolation: return "OrderViolation";
        case FailureCategory::StateMismatch: return "StateMismatch";
        case FailureCategory::ForbiddenMutation: return "ForbiddenMutation";
    }
    return "StateMismatch";
}

bool ArgMatcher::matches(const json& value) const {
    switch (kind) {
        case Kind::exact:
            if (expected.is_number() && value.is_number()) {
                return expected.get<double>() == value.get<double>();
            }
            return expected == value;
        case Kind::near:
            if (!value.is_number()) return false;
            return std::abs(value.get<double>() - expected.get<double>()) <= tolerance;
        case Kind::any:
            return true;
    }
    return false;
}

json ArgMatcher::to_json() const {
    switch (kind) {
        case Kind::exact: return json{{"eq", expected}};
        case Kind::near: return json{{"near", expected}, {"tol", tolerance}};
        case Kind::any: return json{{"any", true}};
    }
    return json::object();
}

ArgMatcher ArgMatcher::from_json(const json& j) {
    ArgMatcher m;
    if (j.contains("eq")) {
        m.kind = Kind::exact;
        m.expected = j.at("eq");
    } else if (j.contains("near")) {
        m.kind = Kind::near;
        m.expected = j.at("near");
        m.tolerance = j.value("tol", 0.0);
    } else if (j.contains("any")) {
        m.kind = Kind::any;
    } else {
        throw ToolError(errc::config_invalid, "arg matcher needs eq, near or any");
    }
    return m;
}

json GtStep::canonical_args() const {
    json out = json::object();
    for (const auto& [name, m] : args) {
        if (m.kind == ArgMatcher::Kind::any) {
            throw ToolError(errc::config_invalid,
                            "step '" + tool + "' arg '" + name +
                                "' uses an 'any' matcher and has no canonical value");
        }
        out[name] = m.expected;
    }
    return out;
}

json GtStep::to_json() const {
    json args_j = json::object();
    for (const auto& [name, m] : args) args_j[name] = m.to_json();
    return json{{"tool", tool}, {"args", args_j}};
}

GtStep GtStep::from_json(const json& j) {
    GtStep s;
    s.tool = j.at("tool").get<std::string>();
    for (const auto& [name, mj] : j.at("args").items()) {
        s.args[name] = ArgMatcher::from_json(mj);
    }
    return s;
}

json GroundTruth::to_json() const {
    if (expectation == Expectation::reject) {
        return json{{"expectation", "reject"}, {"rejection_reason", rejection_reason}};
    }
    json steps_j = json::array();
    for (const auto& s : steps) steps_j.push_back(s.to_json());
    json j{{"expectation", "execute"},
           {"ordering", ordering == Ordering::strict ? "strict" : "independent"},
           {"steps", steps_j}};
    if (!predicate.name.empty()) {
        j["state_predicate"] = json{{"name", predicate.name}, {"params", predicate.params}};
    }
    return j;
}

GroundTruth GroundTruth::from_json(const json& j) {
    GroundTruth gt;
    const std::string exp = j.at("expectation").get<std::string>();
    if (exp == "reject") {
        gt.expectation = Expectation::reject;
        gt.rejection_reason = j.value("rejection_reason", "invalid request");
        return gt;
    }
    gt.expectation = Expectation::execute;
    gt.ordering = j.value("ordering", "strict") == "independent" ? Ordering::independent_sets
                                                                 : Ordering::strict;
    for (const auto& sj : j.at("steps")) gt.steps.push_back(GtStep::from_json(sj));
    if (gt.steps.empty()) {
        throw ToolError(errc::config_invalid, "execute ground truth needs steps");
    }
    if (j.contains("state_predicate")) {
        gt.predicate.name = j.at("state_predicate").at("name").get<std::string>();
        gt.predicate.params = j.at("state_predicate").value("params", json::object());
    }
    return gt;
}

json Verdict::to_json() const {
    json j{{"success", success}, {"detail", detail}};
    if (failure) j["failure_category"] = to_string(*failure);
    return j;
}

json TaskRecord::to_json() const {
    return json{{"id", id},
                {"action_count", action_count},
                {"variant", to_string(variant)},
                {"prompt", prompt},
                {"devices", devices},
                {"ground_truth", ground_truth.to_json()}};
}

TaskRecord TaskRecord::from_json(const json& j) {
    TaskRecord r;
    r.id = j.at("id").get<std::string>();
    r.action_count = j.at("action_count").get<int>();
    r.variant = variant_from_string(j.at("variant").get<std::string>());
    r.prompt = j.at("prompt").get<std::string>();
    r.devices = j.value("devices", std::vector<std::string>{});
    r.ground_truth = GroundTruth::from_json(j.at("ground_truth"));
    return r;
}

namespace {

bool near(double a, double b, double tol = 1e-9) { return std::abs(a - b) <= tol; }

}  // namespace

bool evaluate_predicate(const StatePredicate& p, const sim::Testbed& testbed) {
    if (p.name.empty() || p.name == "always") return true;
    auto& tb = const_cast<sim::Testbed&>(testbed);
    const json& a = p.params;

    if (p.name == "cfp2_power") {
        const auto& st = tb.cfp2_by_port(a.at("port").get<std::string>()).as<sim::Cfp2Device>();
        return near(st.target_tx_power_dbm, a.at("dbm").get<double>());
    }
    if (p.name == "cfp2_frequency") {
        const auto& st = tb.cfp2_by_port(a.at("port").get<std::string>()).as<sim::Cfp2Device>();
        return near(st.center_frequency_mhz, a.at("mhz").get<double>());
    }
    if (p.name == "cfp2_mode") {
        const auto& st = tb.cfp2_by_port(a.at("port").get<std::string>()).as<sim::Cfp2Device>();
        return st.mode == a.at("mode").get<std::string>();
    }
    if (p.name == "osa_window") {
        const auto* dev = tb.find_first_of_kind(sim::DeviceKind::osa);
        if (dev == nullptr) return false;
        const auto& st = dev->as<sim::OsaDevice>();
        bool ok = true;
        if (a.contains("start_nm")) ok = ok && near(st.start_nm, a.at("start_nm").get<double>());
        if (a.contains("stop_nm")) ok = ok && near(st.stop_nm, a.at("stop_nm").get<double>());
        return ok;
    }
    if (p.name == "osa_points") {
        const auto* dev = tb.find_first_of_kind(sim::DeviceKind::osa);
        return dev != nullptr && dev->as<sim::OsaDevice>().sweep_points == a.at("points").get<int>();
    }
    if (p.name == "osa_rbw") {
        const auto* dev = tb.find_first_of_kind(sim::DeviceKind::osa);
        return dev != nullptr && near(dev->as<sim::OsaDevice>().rbw_nm, a.at("nm").get<double>());
    }
    if (p.name == "osa_marker") {
        const auto* dev = tb.find_first_of_kind(sim::DeviceKind::osa);
        if (dev == nullptr) return false;
        const auto& markers = dev->as<sim::OsaDevice>().markers;
        auto it = markers.find(a.at("id").get<int>());
        return it != markers.end() && near(it->second, a.at("nm").get<double>());
    }
    if (p.name == "edfa_gain") {
        const auto& st = tb.roadm(a.value("node", 1)).as<sim::RoadmState>();
        const auto& e = st.edfa(sim::edfa_module_from_string(a.at("module").get<std::string>()));
        return near(e.target_gain_db, a.at("db").get<double>());
    }
    if (p.name == "arof_bias") {
        const auto* dev = tb.find_first_of_kind(sim::DeviceKind::arof);
        return dev != nullptr &&
               near(dev->as<sim::ArofDevice>().state.bias_voltage_v, a.at("volts").get<double>());
    }
    if (p.name == "arof_current") {
        const auto* dev = tb.find_first_of_kind(sim::DeviceKind::arof);
        return dev != nullptr &&
               near(dev->as<sim::ArofDevice>().state.drive_current_ma, a.at("ma").get<double>());
    }
    if (p.name == "arof_state") {
        const auto* dev = tb.find_first_of_kind(sim::DeviceKind::arof);
        if (dev == nullptr) return false;
        const auto& st = dev->as<sim::ArofDevice>().state;
        bool ok = true;
        if (a.contains("volts")) ok = ok && near(st.bias_voltage_v, a.at("volts").get<double>());
        if (a.contains("ma")) ok = ok && near(st.drive_current_ma, a.at("ma").get<double>());
        return ok;
    }
    if (p.name == "wss_connection") {
        const auto& st = tb.roadm(a.value("node", 1)).as<sim::RoadmState>();
        const auto* c = st.find_connection(
            sim::wss_side_from_string(a.at("side").get<std::string>()), a.at("id").get<int>());
        if (c == nullptr) return false;
        bool ok = true;
        if (a.contains("attenuation_db")) {
            ok = ok && near(c->attenuation_db, a.at("attenuation_db").get<double>());
        }
        if (a.contains("start_ghz")) ok = ok && near(c->range.f_lo_ghz, a.at("start_ghz").get<double>());
        if (a.contains("end_ghz")) ok = ok && near(c->range.f_hi_ghz, a.at("end_ghz").get<double>());
        if (a.contains("port")) ok = ok && c->port == a.at("port").get<int>();
        return ok;
    }

    throw ToolError(errc::config_invalid, "unknown state predicate '" + p.name + "'");
}

}  // namespace optctl::bench
