#include "optctl/bench/manifest.hpp"

#include <fstream>
#include <set>

#include "optctl/sim/error.hpp"

namespace optctl::bench {

namespace {

std::string capitalize(std::string s) {
    if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
    return s;
}

BasicAction action_from_json(const json& j) {
    BasicAction a;
    a.phrase = j.at("phrase").get<std::string>();
    a.phrase_no_device = j.value("phrase_no_device", a.phrase);
    for (const auto& sj : j.at("steps")) a.steps.push_back(GtStep::from_json(sj));
    return a;
}

BasicTask task_from_json(const json& j) {
    BasicTask t;
    t.id = j.at("id").get<std::string>();
    t.device = j.at("device").get<std::string>();
    t.devices = j.value("devices", std::vector<std::string>{t.device});
    t.device_label = j.value("device_label", t.device);
    t.outcome = j.value("outcome", "");
    for (const auto& aj : j.at("actions")) t.actions.push_back(action_from_json(aj));
    t.ordering = j.value("ordering", "strict") == "independent"
                     ? Ordering::independent_sets
                     : Ordering::strict;
    if (j.contains("state_predicate")) {
        t.predicate.name = j.at("state_predicate").at("name").get<std::string>();
        t.predicate.params = j.at("state_predicate").value("params", json::object());
    }
    for (const auto& ej : j.value("errors", json::array())) {
        t.errors.push_back({ej.at("prompt").get<std::string>(),
                            ej.at("reason").get<std::string>()});
    }
    return t;
}

}  // namespace

std::string BasicTask::base_prompt() const {
    std::string prompt = capitalize(actions[0].phrase);
    for (size_t i = 1; i < actions.size(); ++i) {
        prompt += ", then " + actions[i].phrase;
    }
    return prompt + ".";
}

TaskManifest TaskManifest::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ToolError(errc::manifest_invalid, "cannot open task manifest '" + path + "'");
    }
    json j;
    in >> j;
    return from_json(j);
}

TaskManifest TaskManifest::from_json(const json& j) {
    TaskManifest m;
    for (const auto& tj : j.at("single")) m.single.push_back(task_from_json(tj));
    for (const auto& tj : j.at("dual")) m.dual.push_back(task_from_json(tj));
    for (const auto& tj : j.at("triple")) m.triple.push_back(task_from_json(tj));
    m.validate();
    return m;
}

void TaskManifest::validate() const {
    if (single.size() != 10 || dual.size() != 10 || triple.size() != 10) {
        throw ToolError(errc::manifest_invalid,
                        "manifest must hold exactly 10 single-, 10 dual- and 10 triple-action "
                        "basics; got " +
                            std::to_string(single.size()) + "/" + std::to_string(dual.size()) +
                            "/" + std::to_string(triple.size()));
    }
    std::set<std::string> covered;
    auto check_group = [&covered](const std::vector<BasicTask>& group, size_t expected_actions) {
        for (const auto& t : group) {
            if (t.actions.size() != expected_actions) {
                throw ToolError(errc::manifest_invalid,
                                "task '" + t.id + "' must have " +
                                    std::to_string(expected_actions) + " action(s)");
            }
            for (const auto& a : t.actions) {
                if (a.steps.empty()) {
                    throw ToolError(errc::manifest_invalid,
                                    "task '" + t.id + "' has an action without steps");
                }
                for (const auto& s : a.steps) {
                    if (s.args.empty()) {
                        throw ToolError(errc::manifest_invalid,
                                        "task '" + t.id + "' step '" + s.tool +
                                            "' carries no arguments");
                    }
                }
            }
            covered.insert(t.device);
        }
    };
    check_group(single, 1);
    check_group(dual, 2);
    check_group(triple, 3);

    for (const auto& dev : {"roadm", "cfp2", "arof", "osa"}) {
        if (!covered.count(dev)) {
            throw ToolError(errc::manifest_invalid,
                            std::string("manifest does not cover device '") + dev + "'");
        }
    }
    for (const auto& t : single) {
        if (t.errors.size() != 3) {
            throw ToolError(errc::manifest_invalid,
                            "single-action task '" + t.id + "' needs exactly 3 error variants");
        }
        if (t.outcome.empty()) {
            throw ToolError(errc::manifest_invalid,
                            "single-action task '" + t.id + "' needs an outcome clause");
        }
    }
}

}  // namespace optctl::bench
