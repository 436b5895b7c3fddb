#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "optctl/sim/testbed.hpp"

namespace optctl::bench {

using nlohmann::json;

enum class Variant { base, paraphrase, non_sequitur, error, role, chain };
enum class Expectation { execute, reject };
enum class Ordering { strict, independent_sets };

std::string to_string(Variant v);
Variant variant_from_string(const std::string& s);

// How one ground-truth argument is compared against an issued value.
struct ArgMatcher {
    enum class Kind { exact, near, any };

    Kind kind = Kind::exact;
    json expected;
    double tolerance = 0.0;

    bool matches(const json& value) const;
    json to_json() const;
    static ArgMatcher from_json(const json& j);
};

struct GtStep {
    std::string tool;
    std::map<std::string, ArgMatcher> args;

    // Concrete argument object the oracle sends for this step.
    json canonical_args() const;
    json to_json() const;
    static GtStep from_json(const json& j);
};

struct StatePredicate {
    std::string name;  // empty: no end-state requirement
    json params = json::object();
};

struct GroundTruth {
    Expectation expectation = Expectation::execute;
    Ordering ordering = Ordering::strict;
    std::vector<GtStep> steps;        // execute only
    StatePredicate predicate;         // execute only
    std::string rejection_reason;     // reject only

    json to_json() const;
    static GroundTruth from_json(const json& j);
};

enum class FailureCategory {
    MissingTool,
    IncorrectTool,
    NonexistentTool,
    WrongArgs,
    OrderViolation,
    StateMismatch,
    ForbiddenMutation
};

std::string to_string(FailureCategory c);

struct Verdict {
    bool success = false;
    std::optional<FailureCategory> failure;
    std::string detail;

    json to_json() const;
};

struct TaskRecord {
    std::string id;
    int action_count = 1;  // 1..3
    Variant variant = Variant::base;
    std::string prompt;
    std::vector<std::string> devices;
    GroundTruth ground_truth;

    json to_json() const;
    static TaskRecord from_json(const json& j);
};

// Named end-state predicates evaluated over the final testbed.
bool evaluate_predicate(const StatePredicate& p, const sim::Testbed& testbed);

}  // namespace optctl::bench
