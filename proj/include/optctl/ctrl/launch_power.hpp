#pragma once

#include <string>
#include <vector>

#include "optctl/tools/tool_client.hpp"

namespace optctl::ctrl {

using nlohmann::json;

struct LaunchPowerOptions {
    std::string new_port;        // transceiver carrying the new channel
    std::string existing_port;   // background channel that must stay stable
    int monitor_node = 2;        // ROADM whose demux input powers are guarded
    double start_dbm = -10.0;
    double step_db = 2.0;
    double min_dbm = -15.0;
    double max_dbm = 0.0;
    double rx_threshold_dbm = 0.0;
    double background_tolerance_db = 0.5;
    double existing_ber_ratio_tolerance = 10.0;
};

struct LaunchPowerIteration {
    double tx_power_dbm = 0.0;
    double rx_power_dbm = 0.0;
    double pre_fec_ber = 0.5;
    double existing_channel_ber = 0.5;
    std::vector<double> demux_powers_dbm;
    bool compliant = true;  // background powers within tolerance at this point
};

enum class LaunchStopReason { rx_threshold, range_end, ber_floor };

struct OptimizationTrace {
    std::vector<LaunchPowerIteration> iterations;
    double chosen_power_dbm = 0.0;
    LaunchStopReason terminated_reason = LaunchStopReason::range_end;
    std::vector<double> baseline_demux_powers_dbm;
    json to_json() const;
};

std::string to_string(LaunchStopReason r);

// Launch-power walk for a newly added channel: start at -10 dBm, climb in
// 2 dB steps while the receiver power stays below the threshold and the
// transmitter below its cap, then settle on the visited power with the lowest
// pre-FEC BER whose background impact stayed within tolerance.
OptimizationTrace optimize_launch_power(tools::ToolClient& client,
                                        const LaunchPowerOptions& options);

}  // namespace optctl::ctrl
