#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <set>

#include "optctl/tools/registry.hpp"

using namespace optctl;
using namespace optctl::tools;
using nlohmann::json;

namespace {

std::string fixture(const std::string& name) { return std::string(OPTCTL_FIXTURES) + "/" + name; }

sim::Testbed bench_testbed() { return sim::Testbed::from_file(fixture("bench.json")); }

ToolCall call(const std::string& tool, json args = json::object()) {
    static long seq = 0;
    ToolCall c;
    c.call_id = "t-" + std::to_string(++seq);
    c.tool = tool;
    c.args = std::move(args);
    return c;
}

}  // namespace

TEST_CASE("registry holds exactly 64 tools with the fixed per-device counts") {
    sim::Testbed tb = bench_testbed();
    const auto registry = Registry::build_for(tb);
    CHECK(registry.specs().size() == 64);

    const auto counts = registry.per_device_counts();
    CHECK(counts.at("roadm") == 10);
    CHECK(counts.at("cfp2") == 6);
    CHECK(counts.at("arof") == 6);
    CHECK(counts.at("osa") == 26);
    CHECK(counts.at("ocs") == 4);
    CHECK(counts.at("mems") == 2);
    CHECK(counts.at("pod") == 7);
    CHECK(counts.at("pcd") == 3);

    // Names are unique and sorted.
    std::set<std::string> names;
    std::string prev;
    for (const auto& s : registry.specs()) {
        CHECK(names.insert(s.name).second);
        CHECK(prev < s.name);
        prev = s.name;
    }
}

TEST_CASE("list_tools filters by device and rejects unknown groups") {
    sim::Testbed tb = bench_testbed();
    const auto registry = Registry::build_for(tb);
    CHECK(registry.list_tools(std::make_optional<std::string>("osa")).size() == 26);
    CHECK_THROWS_AS(registry.list_tools(std::make_optional<std::string>("nonexistent-device")),
                    ToolError);
}

TEST_CASE("registry matches the shipped manifest") {
    sim::Testbed tb = bench_testbed();
    const auto registry = Registry::build_for(tb);
    std::ifstream in(fixture("registry_manifest.json"));
    REQUIRE(in.is_open());
    json expected;
    in >> expected;
    CHECK(registry.manifest() == expected);
}

TEST_CASE("dispatch validation pipeline: existence, params, ranges, invariants") {
    sim::Testbed tb = bench_testbed();
    const auto registry = Registry::build_for(tb);

    SUBCASE("nonexistent tool") {
        const auto r = registry.dispatch(call("cfp2_get_voltage", {{"port", "cfp2-opt-1-1"}}), tb);
        CHECK_FALSE(r.ok());
        CHECK(r.error_code == "NonexistentTool");
    }
    SUBCASE("missing required param is named") {
        const auto r = registry.dispatch(call("cfp2_set_output_power", {{"port", "cfp2-opt-1-1"}}), tb);
        CHECK_FALSE(r.ok());
        CHECK(r.error_code == "MissingParam");
        CHECK(r.error_message.find("power_dbm") != std::string::npos);
    }
    SUBCASE("out-of-range param carries the allowed range") {
        const auto r = registry.dispatch(
            call("cfp2_set_output_power", {{"port", "cfp2-opt-1-1"}, {"power_dbm", -100}}), tb);
        CHECK_FALSE(r.ok());
        CHECK(r.error_code == "ParamOutOfRange");
        CHECK(r.error_message.find("power_dbm") != std::string::npos);
        CHECK(r.error_message.find("-15") != std::string::npos);
    }
    SUBCASE("osa wavelength zero is out of range") {
        const auto r = registry.dispatch(call("osa_set_start_wavelength", {{"nm", 0}}), tb);
        CHECK_FALSE(r.ok());
        CHECK(r.error_code == "ParamOutOfRange");
    }
    SUBCASE("device invariant: overlapping WSS connection") {
        const auto r = registry.dispatch(
            call("roadm_add_wss_connection",
                 {{"side", "mux"}, {"id", 7}, {"port", 4}, {"start_ghz", 193600},
                  {"end_ghz", 193900}, {"attenuation_db", 3}}),
            tb);
        CHECK_FALSE(r.ok());
        CHECK(r.error_code == "OverlappingConnection");
    }
    SUBCASE("valid set mutates state") {
        const auto r = registry.dispatch(
            call("cfp2_set_output_power", {{"port", "cfp2-opt-1-1"}, {"power_dbm", -5}}), tb);
        CHECK(r.ok());
        CHECK(tb.device("cfp2-1").as<sim::Cfp2Device>().target_tx_power_dbm == -5.0);
    }
    SUBCASE("unknown cfp2 port is a range error naming the port") {
        const auto r = registry.dispatch(
            call("cfp2_set_output_power", {{"port", "cfp2-opt-9-9"}, {"power_dbm", -5}}), tb);
        CHECK_FALSE(r.ok());
        CHECK(r.error_code == "ParamOutOfRange");
        CHECK(r.error_message.find("cfp2-opt-9-9") != std::string::npos);
    }
}

TEST_CASE("dispatch atomicity: invalid calls leave the testbed bit-identical") {
    sim::Testbed tb = bench_testbed();
    const auto registry = Registry::build_for(tb);
    const json before = tb.fingerprint();

    const std::vector<ToolCall> invalid = {
        call("cfp2_get_voltage"),
        call("cfp2_set_output_power", {{"port", "cfp2-opt-1-1"}}),
        call("cfp2_set_output_power", {{"port", "cfp2-opt-1-1"}, {"power_dbm", -100}}),
        call("cfp2_set_output_power", {{"port", "cfp2-opt-9-9"}, {"power_dbm", -5}}),
        call("osa_set_start_wavelength", {{"nm", 0}}),
        call("osa_set_start_wavelength", json::object()),
        call("osa_set_start_wavelength", {{"nm", "wide"}}),
        call("roadm_add_wss_connection",
             {{"side", "mux"}, {"id", 9}, {"port", 2}, {"start_ghz", 193500},
              {"end_ghz", 193800}, {"attenuation_db", 3}}),
        call("roadm_add_wss_connection",
             {{"side", "mux"}, {"id", 1}, {"port", 30}, {"start_ghz", 195000},
              {"end_ghz", 195100}, {"attenuation_db", 3}}),
        call("roadm_set_edfa_gain", {{"module", "booster"}, {"gain_db", 99}}),
        call("roadm_set_wss_attenuation", {{"side", "demux"}, {"id", 42}, {"attenuation_db", 1}}),
        call("arof_set_bias_voltage", {{"volts", 1.5}}),
        call("arof_set_current", {{"ma", -1}}),
        call("pcd_set_dac_code", {{"channel", 5}, {"code", 100}}),
        call("pcd_set_dac_code", {{"channel", 1}, {"code", 9999}}),
        call("mems_set_connection", {{"input", 0}, {"output", 3}}),
        call("ocs_add_connection", {{"in_port", 1}, {"out_port", 999}}),
        call("osa_set_span", {{"nm", 0}}),
        call("osa_save_trace", {{"label", "t"}}),  // no trace captured yet
    };

    for (const auto& c : invalid) {
        const auto r = registry.dispatch(c, tb);
        CHECK_FALSE(r.ok());
        CHECK(tb.fingerprint() == before);
    }
}

TEST_CASE("validate_only never touches state even for valid calls") {
    sim::Testbed tb = bench_testbed();
    const auto registry = Registry::build_for(tb);
    const json before = tb.fingerprint();

    const auto ok = registry.validate_only(
        call("arof_set_bias_voltage", {{"volts", -0.9}}), tb);
    CHECK(ok.ok());
    CHECK(tb.fingerprint() == before);

    const auto bad = registry.validate_only(call("cfp2_get_voltage"), tb);
    CHECK_FALSE(bad.ok());
    CHECK(bad.error_code == "NonexistentTool");
    CHECK(tb.fingerprint() == before);
}

TEST_CASE("every mutating tool declares an observing readback tool") {
    sim::Testbed tb = bench_testbed();
    const auto registry = Registry::build_for(tb);
    for (const auto& s : registry.specs()) {
        if (!s.mutating) continue;
        INFO(s.name);
        CHECK_FALSE(s.readback.empty());
        CHECK(registry.find(s.readback) != nullptr);
    }
}

TEST_CASE("set tools are observable through their readback") {
    sim::Testbed tb = bench_testbed();
    const auto registry = Registry::build_for(tb);

    struct Probe {
        const char* set_tool;
        json set_args;
        json expect_subset;  // keys expected in the readback payload
    };
    const std::vector<Probe> probes = {
        {"cfp2_set_output_power", {{"port", "cfp2-opt-1-1"}, {"power_dbm", -7}},
         {{"target_tx_power_dbm", -7.0}}},
        {"cfp2_set_center_frequency", {{"port", "cfp2-opt-1-1"}, {"frequency_mhz", 194000000}},
         {{"center_frequency_mhz", 194000000.0}}},
        {"cfp2_set_operation_mode", {{"port", "cfp2-opt-1-1"}, {"mode", "200g-qpsk"}},
         {{"mode", "200g-qpsk"}}},
        {"arof_set_bias_voltage", {{"volts", -1.1}}, {{"bias_voltage_v", -1.1}}},
        {"arof_set_current", {{"ma", 42}}, {{"drive_current_ma", 42.0}}},
        {"osa_set_start_wavelength", {{"nm", 1541}}, {{"nm", 1541.0}}},
        {"osa_set_stop_wavelength", {{"nm", 1551}}, {{"nm", 1551.0}}},
        {"osa_set_sweep_points", {{"points", 501}}, {{"points", 501}}},
        {"osa_set_resolution_bandwidth", {{"nm", 0.2}}, {{"nm", 0.2}}},
        {"osa_set_sweep_mode", {{"mode", "repeat"}}, {{"mode", "repeat"}}},
    };

    for (const auto& p : probes) {
        INFO(p.set_tool);
        const auto set_r = registry.dispatch(call(p.set_tool, p.set_args), tb);
        REQUIRE(set_r.ok());
        const auto* spec = registry.find(p.set_tool);
        REQUIRE(spec != nullptr);

        json readback_args = json::object();
        if (p.set_args.contains("port")) readback_args["port"] = p.set_args.at("port");
        if (std::string(p.set_tool).rfind("roadm_", 0) == 0) {
            readback_args = p.set_args;
        }
        const auto get_r = registry.dispatch(call(spec->readback, readback_args), tb);
        REQUIRE(get_r.ok());
        for (const auto& [key, value] : p.expect_subset.items()) {
            CHECK(get_r.payload.at(key) == value);
        }
    }
}

TEST_CASE("dispatch determinism: identical sequences yield identical payloads") {
    const std::vector<ToolCall> sequence = {
        call("arof_set_current", {{"ma", 99}}),
        call("arof_set_bias_voltage", {{"volts", -0.9}}),
        call("arof_get_status"),
        call("osa_set_start_wavelength", {{"nm", 1540}}),
        call("osa_set_stop_wavelength", {{"nm", 1550}}),
        call("osa_run_sweep"),
        call("osa_get_peaks"),
        call("cfp2_get_pre_fec_ber", {{"port", "cfp2-opt-1-1"}}),
        call("roadm_get_connection_input_power", {{"side", "mux"}, {"id", 1}}),
        call("pcd_set_dac_code", {{"channel", 2}, {"code", 1000}}),
        call("pod_read_polarization"),
    };

    auto run = [&sequence]() {
        sim::Testbed tb = bench_testbed();
        const auto registry = Registry::build_for(tb);
        json payloads = json::array();
        for (const auto& c : sequence) {
            payloads.push_back(registry.dispatch(c, tb).to_json());
        }
        return payloads;
    };

    CHECK(run() == run());
}

TEST_CASE("ocs and mems connection management") {
    sim::Testbed tb = bench_testbed();
    const auto registry = Registry::build_for(tb);

    CHECK(registry.dispatch(call("ocs_add_connection", {{"in_port", 1}, {"out_port", 5}}), tb).ok());
    auto dup = registry.dispatch(call("ocs_add_connection", {{"in_port", 1}, {"out_port", 6}}), tb);
    CHECK_FALSE(dup.ok());
    CHECK(dup.error_code == "DeviceInvariantViolation");
    auto ports = registry.dispatch(call("ocs_get_ports"), tb);
    CHECK(ports.payload.at("connections").size() == 1);
    CHECK(registry.dispatch(call("ocs_delete_all_connections"), tb).ok());
    CHECK(registry.dispatch(call("ocs_get_ports"), tb).payload.at("connections").empty());

    CHECK(registry.dispatch(call("mems_set_connection", {{"input", 2}, {"output", 9}}), tb).ok());
    auto conns = registry.dispatch(call("mems_get_connections"), tb);
    CHECK(conns.payload.at("connections").size() == 1);
}

TEST_CASE("extension servers register outside the 64-tool core") {
    sim::Testbed case5 = sim::Testbed::from_file(fixture("case5.json"));
    const auto registry = Registry::build_for(case5);
    const auto counts = registry.per_device_counts();
    CHECK(counts.count("das") == 1);
    CHECK(counts.count("roadm") == 0);

    // das_get_waterfall requires monitoring to be running.
    auto early = registry.dispatch(call("das_get_waterfall"), case5);
    CHECK_FALSE(early.ok());
    CHECK(registry.dispatch(call("das_start_monitoring", {{"window_s", 5}}), case5).ok());
    auto wf = registry.dispatch(call("das_get_waterfall"), case5);
    REQUIRE(wf.ok());
    CHECK(wf.payload.at("rows") == 96);
    CHECK(wf.payload.at("intensity").size() == 96 * 96);
}
