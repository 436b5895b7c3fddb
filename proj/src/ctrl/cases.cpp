#include "optctl/ctrl/cases.hpp"

#include <filesystem>
#include <fstream>

#include "optctl/agent/local_client.hpp"
#include "optctl/ctrl/bias_sweep.hpp"
#include "optctl/ctrl/das_classify.hpp"
#include "optctl/ctrl/launch_power.hpp"
#include "optctl/ctrl/polarization_stab.hpp"
#include "optctl/sim/error.hpp"

namespace optctl::ctrl {

namespace fs = std::filesystem;

namespace {

json call_logged(tools::ToolClient& client, json& log, const std::string& tool,
                 const json& args) {
    const auto r = client.call(tool, args);
    log.push_back(json{{"tool", tool}, {"args", args}, {"status", r.ok() ? "ok" : "error"}});
    if (!r.ok()) {
        throw ToolError(r.error_code, tool + " failed: " + r.error_message);
    }
    return r.payload;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) {
        throw ToolError(errc::config_invalid, "cannot write '" + path.string() + "'");
    }
    out << text;
}

struct CaseContext {
    sim::Testbed testbed;
    tools::Registry registry;
    fs::path out;

    CaseContext(const CaseOptions& options, const std::string& fixture)
        : testbed(sim::Testbed::from_file(
              (fs::path(options.fixtures_dir) / fixture).string())),
          registry(tools::Registry::build_for(testbed)),
          out(options.output_dir) {
        fs::create_directories(out);
    }
};

}  // namespace

json provision_case1(tools::ToolClient& client) {
    json calls = json::array();

    call_logged(client, calls, "roadm_add_wss_connection",
                {{"node", 1}, {"side", "mux"}, {"id", 1}, {"name", "ARoF"}, {"port", 1},
                 {"start_ghz", 193900}, {"end_ghz", 194450}, {"attenuation_db", 19.5}});
    call_logged(client, calls, "roadm_add_wss_connection",
                {{"node", 1}, {"side", "mux"}, {"id", 2}, {"name", "CFP2"}, {"port", 20},
                 {"start_ghz", 193400}, {"end_ghz", 193700}, {"attenuation_db", 5}});
    call_logged(client, calls, "osa_set_start_wavelength", {{"nm", 1540}});
    call_logged(client, calls, "osa_set_stop_wavelength", {{"nm", 1550}});
    call_logged(client, calls, "roadm_add_wss_connection",
                {{"node", 2}, {"side", "demux"}, {"id", 1}, {"name", "ARoF"}, {"port", 1},
                 {"start_ghz", 193900}, {"end_ghz", 194450}, {"attenuation_db", 5}});
    call_logged(client, calls, "roadm_add_wss_connection",
                {{"node", 2}, {"side", "demux"}, {"id", 2}, {"name", "CFP2"}, {"port", 20},
                 {"start_ghz", 193400}, {"end_ghz", 193700}, {"attenuation_db", 5}});
    call_logged(client, calls, "cfp2_set_center_frequency",
                {{"port", "cfp2-opt-1-1"}, {"frequency_mhz", 193500000}});
    call_logged(client, calls, "arof_set_current", {{"ma", 99}});
    call_logged(client, calls, "arof_set_bias_voltage", {{"volts", -0.9}});

    const json peaks = call_logged(client, calls, "osa_get_peaks", json::object());
    const json channel =
        call_logged(client, calls, "cfp2_get_pre_fec_ber", {{"port", "cfp2-opt-1-1"}});
    const json arof_link = call_logged(client, calls, "rfsoc_run_link_test",
                                       {{"modulation", "16QAM"}});

    return json{{"calls", calls},
                {"provisioning_calls", 9},
                {"osa_peaks", peaks.at("peaks")},
                {"channel_metrics", channel},
                {"arof_evm_pct", arof_link.at("evm_pct")},
                {"arof_snr_db", arof_link.at("snr_db")}};
}

namespace {

json run_case1(const CaseOptions& options) {
    CaseContext ctx(options, "case1.json");
    agent::LocalClient client(ctx.registry, ctx.testbed);
    const json report = provision_case1(client);
    write_text(ctx.out / "case1_report.json", report.dump(2) + "\n");
    return report;
}

json run_case2(const CaseOptions& options) {
    CaseContext ctx(options, "case1.json");  // same bench: ARoF TX + link tester
    agent::LocalClient client(ctx.registry, ctx.testbed);

    const auto cur = client.call("arof_set_current", {{"ma", 99}});
    if (!cur.ok()) {
        throw ToolError(cur.error_code, "arof_set_current failed: " + cur.error_message);
    }
    const SweepResult sweep = sweep_arof_bias(client, {});

    for (const auto& [name, table] : sweep.markdown_tables()) {
        write_text(ctx.out / ("case2_" + name + ".md"), table);
    }
    for (const auto& [name, csv] : sweep.csv_series()) {
        write_text(ctx.out / ("case2_" + name + ".csv"), csv);
    }
    write_text(ctx.out / "case2_sweep.json", sweep.to_json().dump(2) + "\n");
    return json{{"best_bias_v", sweep.best_bias_v}, {"rows", sweep.rows.size()}};
}

json run_case3(const CaseOptions& options) {
    CaseContext ctx(options, "case3.json");
    agent::LocalClient client(ctx.registry, ctx.testbed);

    // Provision the new channel: set its power, open the mid-link passband.
    auto must = [&](const char* tool, const json& args) {
        const auto r = client.call(tool, args);
        if (!r.ok()) throw ToolError(r.error_code, std::string(tool) + ": " + r.error_message);
        return r.payload;
    };
    must("cfp2_set_output_power", {{"port", "cfp2-opt-1-1"}, {"power_dbm", -10}});
    must("roadm_add_wss_connection",
         {{"node", 2}, {"side", "demux"}, {"id", 30}, {"name", "400GbE-new"}, {"port", 1},
          {"start_ghz", 195450}, {"end_ghz", 195550}, {"attenuation_db", 10}});

    LaunchPowerOptions opts;
    opts.new_port = "cfp2-opt-1-1";
    opts.existing_port = "cfp2-opt-1-2";
    opts.monitor_node = 2;
    const OptimizationTrace trace = optimize_launch_power(client, opts);

    write_text(ctx.out / "case3_trace.json", trace.to_json().dump(2) + "\n");
    std::string csv = "tx_power_dbm,rx_power_dbm,pre_fec_ber,existing_channel_ber\n";
    for (const auto& it : trace.iterations) {
        csv += std::to_string(it.tx_power_dbm) + "," + std::to_string(it.rx_power_dbm) + "," +
               std::to_string(it.pre_fec_ber) + "," + std::to_string(it.existing_channel_ber) +
               "\n";
    }
    write_text(ctx.out / "case3_iterations.csv", csv);
    return json{{"chosen_power_dbm", trace.chosen_power_dbm},
                {"iterations", trace.iterations.size()},
                {"terminated_reason", to_string(trace.terminated_reason)}};
}

json run_case4(const CaseOptions& options) {
    CaseContext ctx(options, "case4.json");
    agent::LocalClient client(ctx.registry, ctx.testbed);

    auto must = [&](const char* tool, const json& args) {
        const auto r = client.call(tool, args);
        if (!r.ok()) throw ToolError(r.error_code, std::string(tool) + ": " + r.error_message);
        return r.payload;
    };
    must("pod_set_wavelength", {{"nm", 1090}});
    const json before = must("pod_read_polarization", json::object());

    StabilizeOptions opts;  // target -47 deg / 8 deg, threshold 0.5 deg
    const StabilizationTrace trace = stabilize_polarization(client, opts);
    const json after = must("pod_read_polarization", json::object());

    write_text(ctx.out / "case4_trace.json", trace.to_json().dump(2) + "\n");
    std::string csv = "iteration,psi_deg,chi_deg,angular_error_deg,v1,v2,v3,v4\n";
    for (size_t i = 0; i < trace.iterations.size(); ++i) {
        const auto& it = trace.iterations[i];
        csv += std::to_string(i) + "," + std::to_string(it.psi_deg) + "," +
               std::to_string(it.chi_deg) + "," + std::to_string(it.angular_error_deg);
        for (double v : it.voltages) csv += "," + std::to_string(v);
        csv += "\n";
    }
    write_text(ctx.out / "case4_iterations.csv", csv);
    return json{{"initial", before},
                {"final", after},
                {"converged", trace.converged},
                {"iterations", trace.iteration_count}};
}

json run_case5(const CaseOptions& options) {
    CaseContext ctx(options, "case5.json");
    agent::LocalClient client(ctx.registry, ctx.testbed);

    auto must = [&](const char* tool, const json& args) {
        const auto r = client.call(tool, args);
        if (!r.ok()) throw ToolError(r.error_code, std::string(tool) + ": " + r.error_message);
        return r.payload;
    };
    must("das_start_monitoring", {{"window_s", 10}});
    const json wf_json = must("das_get_waterfall", json::object());

    sim::Waterfall w;
    w.rows = wf_json.at("rows").get<int>();
    w.cols = wf_json.at("cols").get<int>();
    w.dt_s = wf_json.at("dt_s").get<double>();
    w.dx_m = wf_json.at("dx_m").get<double>();
    w.intensity = wf_json.at("intensity").get<std::vector<double>>();

    const DasVerdict verdict = classify_waterfall(w);

    std::string csv;
    for (int r = 0; r < w.rows; ++r) {
        for (int c = 0; c < w.cols; ++c) {
            csv += (c ? "," : "") + std::to_string(w.at(r, c));
        }
        csv += "\n";
    }
    write_text(ctx.out / "case5_waterfall.csv", csv);
    write_text(ctx.out / "case5_verdict.json", verdict.to_json().dump(2) + "\n");
    const std::string metadata = std::to_string(w.rows) + " time samples x " +
                                 std::to_string(w.cols) + " distance bins";
    write_text(ctx.out / "case5_prompt.txt", build_das_prompt(true, metadata) + "\n");
    write_text(ctx.out / "case5_prompt_no_rules.txt", build_das_prompt(false, metadata) + "\n");
    return verdict.to_json();
}

}  // namespace

json run_case(int number, const CaseOptions& options) {
    switch (number) {
        case 1: return run_case1(options);
        case 2: return run_case2(options);
        case 3: return run_case3(options);
        case 4: return run_case4(options);
        case 5: return run_case5(options);
        default:
            throw ToolError(errc::config_invalid,
                            "case number must be 1..5, got " + std::to_string(number));
    }
}

}  // namespace optctl::ctrl
