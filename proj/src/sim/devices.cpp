#include "optctl/sim/devices.hpp"

#include <algorithm>
#include <random>

namespace optctl::sim {

std::string to_string(DeviceKind k) {
    switch (k) {
        case DeviceKind::roadm: return "roadm";
        case DeviceKind::cfp2: return "cfp2";
        case DeviceKind::arof: return "arof";
        case DeviceKind::osa: return "osa";
        case DeviceKind::ocs: return "ocs";
        case DeviceKind::mems: return "mems";
        case DeviceKind::pod: return "pod";
        case DeviceKind::pcd: return "pcd";
        case DeviceKind::ase_comb: return "ase_comb";
        case DeviceKind::laser: return "laser";
        case DeviceKind::das: return "das";
        case DeviceKind::rfsoc: return "rfsoc";
    }
    return "roadm";
}

DeviceKind device_kind_from_string(const std::string& s) {
    static const std::map<std::string, DeviceKind> table = {
        {"roadm", DeviceKind::roadm}, {"cfp2", DeviceKind::cfp2},   {"arof", DeviceKind::arof},
        {"osa", DeviceKind::osa},     {"ocs", DeviceKind::ocs},     {"mems", DeviceKind::mems},
        {"pod", DeviceKind::pod},     {"pcd", DeviceKind::pcd},     {"ase_comb", DeviceKind::ase_comb},
        {"laser", DeviceKind::laser}, {"das", DeviceKind::das},     {"rfsoc", DeviceKind::rfsoc},
    };
    auto it = table.find(s);
    if (it == table.end()) {
        throw ToolError(errc::unknown_device, "unknown device kind '" + s + "'");
    }
    return it->second;
}

bool is_core_kind(DeviceKind k) {
    switch (k) {
        case DeviceKind::roadm:
        case DeviceKind::cfp2:
        case DeviceKind::arof:
        case DeviceKind::osa:
        case DeviceKind::ocs:
        case DeviceKind::mems:
        case DeviceKind::pod:
        case DeviceKind::pcd:
            return true;
        default:
            return false;
    }
}

std::vector<WssConnection> RoadmState::side_connections(WssSide side) const {
    std::vector<WssConnection> out;
    for (const auto& c : connections) {
        if (c.side == side) out.push_back(c);
    }
    return out;
}

const WssConnection* RoadmState::find_connection(WssSide side, int id) const {
    for (const auto& c : connections) {
        if (c.side == side && c.id == id) return &c;
    }
    return nullptr;
}

const std::vector<std::string>& cfp2_modes() {
    static const std::vector<std::string> modes = {"200g-qpsk", "400g-16qam", "600g-64qam"};
    return modes;
}

Modulation cfp2_mode_modulation(const std::string& mode) {
    if (mode == "200g-qpsk") return Modulation::qpsk;
    if (mode == "400g-16qam") return Modulation::qam16;
    if (mode == "600g-64qam") return Modulation::qam64;
    throw ToolError(errc::param_out_of_range, "unknown CFP2 operation mode '" + mode + "'");
}

Mat3 plant_rotation_from_seed(std::uint32_t seed) {
    if (seed == 0) return mat3_identity();
    std::mt19937 rng(seed);
    auto angle = [&rng]() {
        return (rng() / 4294967296.0) * 2.0 * 3.14159265358979323846 - 3.14159265358979323846;
    };
    Mat3 m = rotation_about_basis_axis(0, angle());
    m = mat3_mul(rotation_about_basis_axis(1, angle()), m);
    m = mat3_mul(rotation_about_basis_axis(2, angle()), m);
    return m;
}

namespace {

json wss_connection_to_json(const WssConnection& c) {
    return json{{"id", c.id},
                {"name", c.name},
                {"side", to_string(c.side)},
                {"port", c.port},
                {"start_ghz", c.range.f_lo_ghz},
                {"end_ghz", c.range.f_hi_ghz},
                {"attenuation_db", c.attenuation_db}};
}

WssConnection wss_connection_from_json(const json& j) {
    WssConnection c;
    c.id = j.at("id").get<int>();
    c.name = j.value("name", "");
    c.side = wss_side_from_string(j.at("side").get<std::string>());
    c.port = j.at("port").get<int>();
    c.range.f_lo_ghz = j.at("start_ghz").get<double>();
    c.range.f_hi_ghz = j.at("end_ghz").get<double>();
    c.attenuation_db = j.at("attenuation_db").get<double>();
    c.validate();
    return c;
}

json edfa_to_json(const EdfaState& e) {
    return json{{"module", to_string(e.module)},
                {"mode", to_string(e.mode)},
                {"target_gain_db", e.target_gain_db},
                {"target_power_dbm", e.target_power_dbm},
                {"noise_figure_db", e.noise_figure_db},
                {"enabled", e.enabled}};
}

EdfaState edfa_from_json(const json& j, EdfaModule module) {
    EdfaState e;
    e.module = module;
    if (j.contains("mode")) e.mode = edfa_mode_from_string(j.at("mode").get<std::string>());
    e.target_gain_db = j.value("gain_db", j.value("target_gain_db", 15.0));
    e.target_power_dbm = j.value("target_power_dbm", 3.0);
    e.noise_figure_db = j.value("noise_figure_db", 5.0);
    e.enabled = j.value("enabled", true);
    e.validate();
    return e;
}

}  // namespace

json device_state_to_json(const Device& d) {
    json j;
    j["id"] = d.id;
    j["kind"] = to_string(d.kind);
    std::visit(
        [&j](const auto& st) {
            using T = std::decay_t<decltype(st)>;
            if constexpr (std::is_same_v<T, RoadmState>) {
                json conns = json::array();
                for (const auto& c : st.connections) conns.push_back(wss_connection_to_json(c));
                j["connections"] = conns;
                j["booster"] = edfa_to_json(st.booster);
                j["preamp"] = edfa_to_json(st.preamp);
            } else if constexpr (std::is_same_v<T, Cfp2Device>) {
                j["port_name"] = st.port_name;
                j["center_frequency_mhz"] = st.center_frequency_mhz;
                j["target_tx_power_dbm"] = st.target_tx_power_dbm;
                j["mode"] = st.mode;
                j["enabled"] = st.enabled;
            } else if constexpr (std::is_same_v<T, ArofDevice>) {
                j["bias_voltage_v"] = st.state.bias_voltage_v;
                j["drive_current_ma"] = st.state.drive_current_ma;
                j["enabled"] = st.state.enabled;
                j["carrier_ghz"] = st.carrier_ghz;
                j["tx_power_dbm"] = st.tx_power_dbm;
            } else if constexpr (std::is_same_v<T, OsaDevice>) {
                j["start_nm"] = st.start_nm;
                j["stop_nm"] = st.stop_nm;
                j["sweep_points"] = st.sweep_points;
                j["rbw_nm"] = st.rbw_nm;
                j["sweep_mode"] = st.sweep_mode;
                j["sweep_running"] = st.sweep_running;
                json markers = json::object();
                for (const auto& [id, nm] : st.markers) markers[std::to_string(id)] = nm;
                j["markers"] = markers;
                j["saved_traces"] = st.saved_traces;
            } else if constexpr (std::is_same_v<T, OcsDevice>) {
                j["port_count"] = st.port_count;
                json conns = json::object();
                for (const auto& [in, out] : st.connections) conns[std::to_string(in)] = out;
                j["connections"] = conns;
            } else if constexpr (std::is_same_v<T, MemsDevice>) {
                j["size"] = st.size;
                json conns = json::object();
                for (const auto& [in, out] : st.connections) conns[std::to_string(in)] = out;
                j["connections"] = conns;
            } else if constexpr (std::is_same_v<T, PodDevice>) {
                j["wavelength_nm"] = st.wavelength_nm;
                j["averaging"] = st.averaging;
                j["source_device"] = st.source_device;
                j["actuator_device"] = st.actuator_device;
            } else if constexpr (std::is_same_v<T, PcdDevice>) {
                j["codes"] = st.piezo.codes;
            } else if constexpr (std::is_same_v<T, LaserDevice>) {
                j["wavelength_nm"] = st.wavelength_nm;
                j["power_dbm"] = st.power_dbm;
                j["sop"] = st.sop.s;
                j["enabled"] = st.enabled;
            } else if constexpr (std::is_same_v<T, AseCombDevice>) {
                json ch = json::array();
                for (const auto& r : st.channels) ch.push_back({r.f_lo_ghz, r.f_hi_ghz});
                j["channels"] = ch;
                j["per_channel_dbm"] = st.per_channel_dbm;
            } else if constexpr (std::is_same_v<T, DasDevice>) {
                j["scenario"] = to_string(st.scenario);
                j["seed"] = st.seed;
                j["rows"] = st.rows;
                j["cols"] = st.cols;
                j["fiber_km"] = st.fiber_km;
                j["monitoring"] = st.monitoring;
                j["window_s"] = st.window_s;
            } else if constexpr (std::is_same_v<T, RfsocDevice>) {
                j["arof_device"] = st.arof_device;
                j["fiber_km"] = st.fiber_km;
            }
        },
        d.state);
    return j;
}

std::unique_ptr<Device> device_from_json(const json& spec) {
    auto d = std::make_unique<Device>();
    d->id = spec.at("id").get<std::string>();
    d->kind = device_kind_from_string(spec.at("kind").get<std::string>());
    switch (d->kind) {
        case DeviceKind::roadm: {
            RoadmState st;
            st.booster = edfa_from_json(spec.value("booster", json::object()), EdfaModule::booster);
            st.preamp = edfa_from_json(spec.value("preamp", json::object()), EdfaModule::preamp);
            for (const auto& cj : spec.value("connections", json::array())) {
                WssConnection c = wss_connection_from_json(cj);
                check_wss_overlap(st.connections, c);
                st.connections.push_back(c);
            }
            d->state = std::move(st);
            break;
        }
        case DeviceKind::cfp2: {
            Cfp2Device st;
            st.port_name = spec.value("port_name", st.port_name);
            st.center_frequency_mhz = spec.value("center_frequency_mhz", st.center_frequency_mhz);
            st.target_tx_power_dbm = spec.value("target_tx_power_dbm", st.target_tx_power_dbm);
            st.mode = spec.value("mode", st.mode);
            st.enabled = spec.value("enabled", true);
            cfp2_mode_modulation(st.mode);
            d->state = st;
            break;
        }
        case DeviceKind::arof: {
            ArofDevice st;
            st.state.bias_voltage_v = spec.value("bias_voltage_v", st.state.bias_voltage_v);
            st.state.drive_current_ma = spec.value("drive_current_ma", st.state.drive_current_ma);
            st.state.enabled = spec.value("enabled", true);
            st.carrier_ghz = spec.value("carrier_ghz", st.carrier_ghz);
            st.tx_power_dbm = spec.value("tx_power_dbm", st.tx_power_dbm);
            st.eam.v0 = spec.value("eam_v0", st.eam.v0);
            st.eam.vw = spec.value("eam_vw", st.eam.vw);
            d->state = st;
            break;
        }
        case DeviceKind::osa: {
            OsaDevice st;
            st.start_nm = spec.value("start_nm", st.start_nm);
            st.stop_nm = spec.value("stop_nm", st.stop_nm);
            st.sweep_points = spec.value("sweep_points", st.sweep_points);
            st.rbw_nm = spec.value("rbw_nm", st.rbw_nm);
            d->state = st;
            break;
        }
        case DeviceKind::ocs: {
            OcsDevice st;
            st.port_count = spec.value("port_count", st.port_count);
            d->state = st;
            break;
        }
        case DeviceKind::mems: {
            MemsDevice st;
            st.size = spec.value("size", st.size);
            d->state = st;
            break;
        }
        case DeviceKind::pod: {
            PodDevice st;
            st.wavelength_nm = spec.value("wavelength_nm", st.wavelength_nm);
            st.averaging = spec.value("averaging", st.averaging);
            st.source_device = spec.value("source_device", "");
            st.actuator_device = spec.value("actuator_device", "");
            st.plant_seed = spec.value("plant_seed", 0u);
            st.plant_rotation = plant_rotation_from_seed(st.plant_seed);
            d->state = std::move(st);
            break;
        }
        case DeviceKind::pcd: {
            PcdDevice st;
            if (spec.contains("codes")) {
                auto codes = spec.at("codes").get<std::vector<int>>();
                if (codes.size() != 4) {
                    throw ToolError(errc::config_invalid, "pcd codes must have 4 entries");
                }
                std::copy(codes.begin(), codes.end(), st.piezo.codes.begin());
                st.piezo.validate();
            }
            d->state = st;
            break;
        }
        case DeviceKind::laser: {
            LaserDevice st;
            st.wavelength_nm = spec.value("wavelength_nm", st.wavelength_nm);
            st.power_dbm = spec.value("power_dbm", st.power_dbm);
            if (spec.contains("sop")) {
                auto v = spec.at("sop").get<std::vector<double>>();
                if (v.size() != 3) throw ToolError(errc::config_invalid, "laser sop needs 3 entries");
                st.sop.s = {v[0], v[1], v[2]};
                st.sop.validate();
            }
            st.enabled = spec.value("enabled", true);
            d->state = st;
            break;
        }
        case DeviceKind::ase_comb: {
            AseCombDevice st;
            st.per_channel_dbm = spec.value("per_channel_dbm", st.per_channel_dbm);
            if (spec.contains("channels")) {
                for (const auto& cj : spec.at("channels")) {
                    FrequencyRange r{cj.at(0).get<double>(), cj.at(1).get<double>()};
                    r.validate();
                    st.channels.push_back(r);
                }
            } else if (spec.contains("comb")) {
                // Shorthand: {"comb": {"start_ghz": x, "spacing_ghz": s, "count": n, "width_ghz": w}}
                const auto& c = spec.at("comb");
                const double start = c.at("start_ghz").get<double>();
                const double spacing = c.at("spacing_ghz").get<double>();
                const int count = c.at("count").get<int>();
                const double width = c.value("width_ghz", 40.0);
                for (int i = 0; i < count; ++i) {
                    const double center = start + spacing * i;
                    FrequencyRange r{center - width / 2, center + width / 2};
                    r.validate();
                    st.channels.push_back(r);
                }
            }
            d->state = std::move(st);
            break;
        }
        case DeviceKind::das: {
            DasDevice st;
            st.scenario = das_scenario_from_string(spec.value("scenario", "stable"));
            st.seed = spec.value("seed", 1u);
            st.rows = spec.value("rows", st.rows);
            st.cols = spec.value("cols", st.cols);
            st.fiber_km = spec.value("fiber_km", st.fiber_km);
            d->state = st;
            break;
        }
        case DeviceKind::rfsoc: {
            RfsocDevice st;
            st.arof_device = spec.value("arof_device", "");
            st.fiber_km = spec.value("fiber_km", st.fiber_km);
            d->state = st;
            break;
        }
    }
    return d;
}

}  // namespace optctl::sim
