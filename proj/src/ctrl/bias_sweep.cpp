#include "optctl/ctrl/bias_sweep.hpp"

#include <cmath>
#include <cstdio>

#include "optctl/sim/error.hpp"

namespace optctl::ctrl {

namespace {

json expect_ok(const tools::ToolResult& r, const std::string& what) {
    if (!r.ok()) {
        throw ToolError(r.error_code, what + " failed: " + r.error_message);
    }
    return r.payload;
}

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

std::string scientific(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3e", v);
    return buf;
}

}  // namespace

json SweepResult::to_json() const {
    json rows_j = json::array();
    for (const auto& row : rows) {
        json mods = json::object();
        for (const auto& [name, p] : row.per_modulation) {
            mods[name] = json{{"snr_db", p.snr_db}, {"evm_pct", p.evm_pct}, {"ber", p.ber}};
        }
        rows_j.push_back(json{{"bias_v", row.bias_v}, {"metrics", mods}});
    }
    return json{{"rows", rows_j}, {"best_bias_v", best_bias_v}};
}

std::map<std::string, std::string> SweepResult::markdown_tables() const {
    std::map<std::string, std::string> tables;
    if (rows.empty()) return tables;
    for (const auto& [name, unused] : rows.front().per_modulation) {
        std::string t = "# " + name + " bias sweep\n\n";
        t += "| Bias (V) | SNR (dB) | EVM (%) | BER |\n";
        t += "|---------:|---------:|--------:|----:|\n";
        for (const auto& row : rows) {
            const auto& p = row.per_modulation.at(name);
            t += "| " + fixed(row.bias_v, 1) + " | " + fixed(p.snr_db, 2) + " | " +
                 fixed(p.evm_pct, 2) + " | " + scientific(p.ber) + " |\n";
        }
        t += "\nBest bias (max SNR): " + fixed(best_bias_v, 1) + " V\n";
        tables[name] = t;
    }
    return tables;
}

std::map<std::string, std::string> SweepResult::csv_series() const {
    std::map<std::string, std::string> series;
    if (rows.empty()) return series;
    for (const auto& [name, unused] : rows.front().per_modulation) {
        std::string s = "bias_v,snr_db,evm_pct,ber\n";
        for (const auto& row : rows) {
            const auto& p = row.per_modulation.at(name);
            s += fixed(row.bias_v, 3) + "," + fixed(p.snr_db, 6) + "," + fixed(p.evm_pct, 6) +
                 "," + scientific(p.ber) + "\n";
        }
        series[name] = s;
    }
    return series;
}

SweepResult sweep_arof_bias(tools::ToolClient& client, const BiasSweepOptions& options) {
    if (options.step <= 0.0 || options.v_end < options.v_start) {
        throw ToolError(errc::sweep_range_invalid,
                        "sweep requires v_start <= v_end and a positive step");
    }

    SweepResult result;
    const int n_points =
        static_cast<int>(std::floor((options.v_end - options.v_start) / options.step + 0.5)) + 1;

    double best_snr = -1e9;
    for (int i = 0; i < n_points; ++i) {
        const double bias = options.v_start + options.step * i;
        expect_ok(client.call("arof_set_bias_voltage", {{"volts", bias}}),
                  "arof_set_bias_voltage");

        SweepRow row;
        row.bias_v = bias;
        double row_best_snr = -1e9;
        for (const auto mod : options.modulations) {
            const json m = expect_ok(
                client.call("rfsoc_run_link_test", {{"modulation", to_string(mod)}}),
                "rfsoc_run_link_test");
            BiasPoint p;
            p.snr_db = m.at("snr_db").get<double>();
            p.evm_pct = m.at("evm_pct").get<double>();
            p.ber = m.at("ber").get<double>();
            row.per_modulation[to_string(mod)] = p;
            row_best_snr = std::max(row_best_snr, p.snr_db);
        }
        result.rows.push_back(std::move(row));
        if (row_best_snr > best_snr) {
            best_snr = row_best_snr;
            result.best_bias_v = bias;
        }
    }
    return result;
}

}  // namespace optctl::ctrl
