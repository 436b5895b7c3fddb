#pragma once

#include <string>

#include <json.hpp>

#include "optctl/sim/waterfall.hpp"

namespace optctl::ctrl {

using nlohmann::json;

struct DasFeatures {
    double vertical_persistence = 0.0;  // max per-column hot fraction after its onset
    int persistent_columns = 0;         // columns whose persistence passes 0.5
    int horizontal_line_count = 0;      // rows with mean >= floor + 6*sigma
    double brightness_ratio = 1.0;      // post/pre mean beyond the brightest streak
};

struct DasVerdict {
    sim::DasScenario label = sim::DasScenario::stable;
    DasFeatures features;
    std::string rationale;

    json to_json() const;
};

// Deterministic feature rules over a waterfall matrix:
//   cut        if >=3 columns persist hot for >=50% of their post-onset rows,
//              or the region beyond the brightest streak dims to <=0.5x after onset
//   agitation  if >=2 full-width hot rows
//   stable     otherwise
DasVerdict classify_waterfall(const sim::Waterfall& w);

// Prompt text for a remote vision model: the two-condition rule description
// plus the question. `with_rules=false` drops the rule paragraph.
std::string build_das_prompt(bool with_rules = true, const std::string& metadata = "");

}  // namespace optctl::ctrl
