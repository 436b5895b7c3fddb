#include "optctl/ctrl/launch_power.hpp"

#include <cmath>

#include "optctl/sim/error.hpp"

namespace optctl::ctrl {

std::string to_string(LaunchStopReason r) {
    switch (r) {
        case LaunchStopReason::rx_threshold: return "rx_threshold";
        case LaunchStopReason::range_end: return "range_end";
        case LaunchStopReason::ber_floor: return "ber_floor";
    }
    return "range_end";
}

json OptimizationTrace::to_json() const {
    json iters = json::array();
    for (const auto& it : iterations) {
        iters.push_back(json{{"tx_power_dbm", it.tx_power_dbm},
                             {"rx_power_dbm", it.rx_power_dbm},
                             {"pre_fec_ber", it.pre_fec_ber},
                             {"existing_channel_ber", it.existing_channel_ber},
                             {"demux_powers_dbm", it.demux_powers_dbm},
                             {"compliant", it.compliant}});
    }
    return json{{"iterations", iters},
                {"chosen_power_dbm", chosen_power_dbm},
                {"terminated_reason", to_string(terminated_reason)},
                {"baseline_demux_powers_dbm", baseline_demux_powers_dbm}};
}

namespace {

json expect_ok(const tools::ToolResult& r, const std::string& what) {
    if (!r.ok()) {
        throw ToolError(r.error_code, what + " failed: " + r.error_message);
    }
    return r.payload;
}

struct DemuxMonitor {
    int node;
    std::vector<int> connection_ids;

    std::vector<double> read(tools::ToolClient& client) const {
        std::vector<double> powers;
        powers.reserve(connection_ids.size());
        for (int id : connection_ids) {
            const json p = expect_ok(
                client.call("roadm_get_connection_input_power",
                            {{"node", node}, {"side", "demux"}, {"id", id}}),
                "demux power read");
            powers.push_back(p.at("power_dbm").get<double>());
        }
        return powers;
    }
};

}  // namespace

OptimizationTrace optimize_launch_power(tools::ToolClient& client,
                                        const LaunchPowerOptions& options) {
    OptimizationTrace trace;

    // Step 1: read transceiver parameters and WSS status.
    const json cfg = expect_ok(client.call("cfp2_get_config", {{"port", options.new_port}}),
                               "cfp2_get_config");
    const double new_center_ghz = cfg.at("center_frequency_mhz").get<double>() / 1000.0;
    const json conns = expect_ok(
        client.call("roadm_get_wss_connections", {{"node", options.monitor_node}, {"side", "demux"}}),
        "roadm_get_wss_connections");

    // Background monitor: every demux connection except the one carrying the
    // new channel itself.
    DemuxMonitor monitor{options.monitor_node, {}};
    for (const auto& c : conns.at("connections")) {
        const double lo = c.at("start_ghz").get<double>();
        const double hi = c.at("end_ghz").get<double>();
        if (new_center_ghz >= lo && new_center_ghz <= hi) continue;
        monitor.connection_ids.push_back(c.at("id").get<int>());
    }

    trace.baseline_demux_powers_dbm = monitor.read(client);
    const double baseline_existing_ber =
        expect_ok(client.call("cfp2_get_pre_fec_ber", {{"port", options.existing_port}}),
                  "existing-channel BER read")
            .at("pre_fec_ber")
            .get<double>();

    // Step 2: initialize the transmit power.
    double tx = options.start_dbm;
    expect_ok(client.call("cfp2_set_output_power",
                          {{"port", options.new_port}, {"power_dbm", tx}}),
              "cfp2_set_output_power");

    auto check_compliance = [&](const std::vector<double>& powers) {
        for (size_t i = 0; i < powers.size(); ++i) {
            if (std::abs(powers[i] - trace.baseline_demux_powers_dbm[i]) >
                options.background_tolerance_db) {
                return false;
            }
        }
        return true;
    };

    // Steps 3-4: walk upward until the receiver threshold or the power cap.
    trace.terminated_reason = LaunchStopReason::range_end;
    for (;;) {
        LaunchPowerIteration iter;
        iter.tx_power_dbm = tx;
        iter.rx_power_dbm =
            expect_ok(client.call("cfp2_get_rx_power", {{"port", options.new_port}}),
                      "cfp2_get_rx_power")
                .at("rx_power_dbm")
                .get<double>();
        iter.pre_fec_ber =
            expect_ok(client.call("cfp2_get_pre_fec_ber", {{"port", options.new_port}}),
                      "cfp2_get_pre_fec_ber")
                .at("pre_fec_ber")
                .get<double>();
        iter.existing_channel_ber =
            expect_ok(client.call("cfp2_get_pre_fec_ber", {{"port", options.existing_port}}),
                      "existing-channel BER read")
                .at("pre_fec_ber")
                .get<double>();
        iter.demux_powers_dbm = monitor.read(client);
        iter.compliant = check_compliance(iter.demux_powers_dbm);
        trace.iterations.push_back(iter);

        if (iter.pre_fec_ber <= 0.0) {
            trace.terminated_reason = LaunchStopReason::ber_floor;
            break;
        }
        if (iter.rx_power_dbm >= options.rx_threshold_dbm) {
            trace.terminated_reason = LaunchStopReason::rx_threshold;
            break;
        }
        if (tx >= options.max_dbm) {
            trace.terminated_reason = LaunchStopReason::range_end;
            break;
        }
        tx = std::min(tx + options.step_db, options.max_dbm);
        expect_ok(client.call("cfp2_set_output_power",
                              {{"port", options.new_port}, {"power_dbm", tx}}),
                  "cfp2_set_output_power");
    }

    // Choose the best compliant visited point and settle there.
    const LaunchPowerIteration* best = nullptr;
    for (const auto& it : trace.iterations) {
        if (!it.compliant) continue;
        if (best == nullptr || it.pre_fec_ber < best->pre_fec_ber) best = &it;
    }
    if (best == nullptr) {
        throw ToolError(errc::constraint_violated,
                        "every visited launch power broke the +/-" +
                            std::to_string(options.background_tolerance_db) +
                            " dB background bound");
    }
    trace.chosen_power_dbm = best->tx_power_dbm;
    expect_ok(client.call("cfp2_set_output_power",
                          {{"port", options.new_port}, {"power_dbm", trace.chosen_power_dbm}}),
              "cfp2_set_output_power");

    // Step 5: verify the background held at the chosen operating point.
    const auto final_powers = monitor.read(client);
    if (!check_compliance(final_powers)) {
        throw ToolError(errc::constraint_violated,
                        "background demux powers moved beyond tolerance at the chosen power");
    }
    const double final_existing_ber =
        expect_ok(client.call("cfp2_get_pre_fec_ber", {{"port", options.existing_port}}),
                  "existing-channel BER read")
            .at("pre_fec_ber")
            .get<double>();
    const double lo = baseline_existing_ber / options.existing_ber_ratio_tolerance;
    const double hi = baseline_existing_ber * options.existing_ber_ratio_tolerance;
    if (final_existing_ber < lo || final_existing_ber > hi) {
        throw ToolError(errc::constraint_violated,
                        "existing-channel BER changed by more than the allowed ratio");
    }

    return trace;
}

}  // namespace optctl::ctrl
