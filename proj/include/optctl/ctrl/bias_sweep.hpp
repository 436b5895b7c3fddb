#pragma once

#include <map>
#include <string>
#include <vector>

#include "optctl/sim/ber.hpp"
#include "optctl/tools/tool_client.hpp"

namespace optctl::ctrl {

using nlohmann::json;

struct BiasSweepOptions {
    double v_start = -1.5;
    double v_end = 0.0;
    double step = 0.1;
    std::vector<sim::Modulation> modulations = {sim::Modulation::qpsk, sim::Modulation::qam16,
                                                sim::Modulation::qam64};
};

struct BiasPoint {
    double snr_db = 0.0;
    double evm_pct = 0.0;
    double ber = 0.5;
};

struct SweepRow {
    double bias_v = 0.0;
    std::map<std::string, BiasPoint> per_modulation;  // keyed by modulation name
};

struct SweepResult {
    std::vector<SweepRow> rows;
    double best_bias_v = 0.0;  // argmax SNR (equivalently argmin BER)

    json to_json() const;
    // One table per modulation: | bias | SNR | EVM | BER |.
    std::map<std::string, std::string> markdown_tables() const;
    // Plot-ready series: bias,snr_db,evm_pct,ber per modulation.
    std::map<std::string, std::string> csv_series() const;
};

// Sweeps the transmitter bias through the link tester, one measurement per
// (bias, modulation) pair.
SweepResult sweep_arof_bias(tools::ToolClient& client, const BiasSweepOptions& options);

}  // namespace optctl::ctrl
