#pragma once

#include <string>
#include <vector>

#include "optctl/bench/task.hpp"

namespace optctl::bench {

// One imperative clause of a basic task and the tool calls it stands for.
struct BasicAction {
    std::string phrase;            // "set the OSA start wavelength to 1540 nm"
    std::string phrase_no_device;  // same clause with the device name dropped
    std::vector<GtStep> steps;
};

struct ErrorVariantSpec {
    std::string prompt;
    std::string reason;
};

struct BasicTask {
    std::string id;
    std::string device;                 // primary device group
    std::vector<std::string> devices;   // all devices touched
    std::string device_label;           // display name used by templates
    std::string outcome;                // single-action: outcome clause for templates
    std::vector<BasicAction> actions;   // 1, 2 or 3
    Ordering ordering = Ordering::strict;
    StatePredicate predicate;
    std::vector<ErrorVariantSpec> errors;  // exactly 3 on single-action tasks

    std::string base_prompt() const;
};

// The fixed manifest of 30 basic tasks the corpus expands from.
struct TaskManifest {
    std::vector<BasicTask> single;
    std::vector<BasicTask> dual;
    std::vector<BasicTask> triple;

    static TaskManifest from_file(const std::string& path);
    static TaskManifest from_json(const json& j);

    // Throws ManifestInvalid on wrong counts, missing device coverage, or
    // single-action tasks without their three error variants.
    void validate() const;
};

}  // namespace optctl::bench
