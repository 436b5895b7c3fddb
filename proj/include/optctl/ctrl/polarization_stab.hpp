#pragma once

#include <array>
#include <string>
#include <vector>

#include "optctl/sim/polarization.hpp"
#include "optctl/tools/tool_client.hpp"

namespace optctl::ctrl {

using nlohmann::json;

struct StabilizeOptions {
    double target_psi_deg = -47.0;
    double target_chi_deg = 8.0;
    double threshold_deg = 0.5;
    int max_iterations = 200;
    int coarse_delta = 64;        // DAC codes per probe while far from target
    int fine_delta = 8;           // once the error drops below stage_switch_deg
    double stage_switch_deg = 10.0;
};

struct StabilizeIteration {
    std::array<int, 4> codes{};
    std::array<double, 4> voltages{};
    double psi_deg = 0.0;
    double chi_deg = 0.0;
    double angular_error_deg = 0.0;
};

struct StabilizationTrace {
    std::vector<StabilizeIteration> iterations;
    bool converged = false;
    int iteration_count = 0;
    double avg_iteration_time_s = 0.0;
    json to_json() const;
};

// Multi-stage descent over the four piezo DAC codes: each iteration probes
// every channel one step up and down, measures the great-circle error to the
// target on the Poincare sphere, and applies the single best-improving step.
// The probe size halves (floor 1) whenever no probe improves.
StabilizationTrace stabilize_polarization(tools::ToolClient& client,
                                          const StabilizeOptions& options);

}  // namespace optctl::ctrl
