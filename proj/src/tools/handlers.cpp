#include <algorithm>
#include <cmath>

#include "optctl/sim/error.hpp"
#include "optctl/tools/registry.hpp"

namespace optctl::tools {

using sim::Device;
using sim::DeviceKind;
using sim::Testbed;

namespace {

// --- parameter spec shorthands ---------------------------------------------

ParamSpec num(std::string name, std::string unit, double min, double max, std::string desc,
              bool required = true) {
    ParamSpec p;
    p.name = std::move(name);
    p.kind = ParamSpec::Kind::number;
    p.unit = std::move(unit);
    p.min = min;
    p.max = max;
    p.description = std::move(desc);
    p.required = required;
    return p;
}

ParamSpec integer(std::string name, std::string unit, double min, double max, std::string desc,
                  bool required = true) {
    ParamSpec p = num(std::move(name), std::move(unit), min, max, std::move(desc), required);
    p.kind = ParamSpec::Kind::integer;
    return p;
}

ParamSpec str(std::string name, std::string desc, bool required = true) {
    ParamSpec p;
    p.name = std::move(name);
    p.kind = ParamSpec::Kind::string;
    p.description = std::move(desc);
    p.required = required;
    return p;
}

ParamSpec choice(std::string name, std::vector<std::string> allowed, std::string desc,
                 bool required = true) {
    ParamSpec p;
    p.name = std::move(name);
    p.kind = ParamSpec::Kind::enumeration;
    p.allowed = std::move(allowed);
    p.description = std::move(desc);
    p.required = required;
    return p;
}

// --- device resolvers -------------------------------------------------------

DeviceResolver by_kind(DeviceKind kind) {
    return [kind](Testbed& tb, const json&) -> Device& {
        Device* d = tb.find_first_of_kind(kind);
        if (d == nullptr) {
            throw sim::ToolError(sim::errc::unknown_device,
                                 "no " + sim::to_string(kind) + " device in this testbed");
        }
        return *d;
    };
}

Device& resolve_roadm(Testbed& tb, const json& args) {
    const int node = args.value("node", 1);
    return tb.roadm(node);
}

Device& resolve_cfp2(Testbed& tb, const json& args) {
    return tb.cfp2_by_port(args.at("port").get<std::string>());
}

// --- shared handler helpers -------------------------------------------------

sim::WssSide side_arg(const json& args) {
    return sim::wss_side_from_string(args.at("side").get<std::string>());
}

json connection_json(const sim::WssConnection& c) {
    return json{{"id", c.id},
                {"name", c.name},
                {"side", to_string(c.side)},
                {"port", c.port},
                {"start_ghz", c.range.f_lo_ghz},
                {"end_ghz", c.range.f_hi_ghz},
                {"attenuation_db", c.attenuation_db}};
}

sim::WssConnection& require_connection(sim::RoadmState& st, sim::WssSide side, int id) {
    for (auto& c : st.connections) {
        if (c.side == side && c.id == id) return c;
    }
    throw sim::ToolError(sim::errc::device_invariant,
                         "no connection with id " + std::to_string(id) + " on the " +
                             to_string(side) + " side");
}

json edfa_json(const sim::EdfaState& e) {
    return json{{"module", to_string(e.module)},     {"mode", to_string(e.mode)},
                {"target_gain_db", e.target_gain_db}, {"target_power_dbm", e.target_power_dbm},
                {"noise_figure_db", e.noise_figure_db}, {"enabled", e.enabled}};
}

json spectrum_json(const sim::Spectrum& s) {
    json pts = json::array();
    for (const auto& p : s.points) pts.push_back({p.wavelength_nm, p.power_dbm});
    return json{{"start_nm", s.start_nm}, {"stop_nm", s.stop_nm}, {"points", pts}};
}

// Contiguous runs above the detection threshold become one peak each.
json find_peaks(const sim::Spectrum& s, double min_rise_db) {
    json peaks = json::array();
    const double threshold = sim::kNoiseFloorDbm + min_rise_db;
    size_t i = 0;
    while (i < s.points.size()) {
        if (s.points[i].power_dbm <= threshold) {
            ++i;
            continue;
        }
        size_t j = i;
        size_t best = i;
        while (j < s.points.size() && s.points[j].power_dbm > threshold) {
            if (s.points[j].power_dbm > s.points[best].power_dbm) best = j;
            ++j;
        }
        // Plateau: report the run's center sample.
        size_t lo = best, hi = best;
        while (lo > i && s.points[lo - 1].power_dbm == s.points[best].power_dbm) --lo;
        while (hi + 1 < j && s.points[hi + 1].power_dbm == s.points[best].power_dbm) ++hi;
        const size_t center = (lo + hi) / 2;
        peaks.push_back({{"wavelength_nm", s.points[center].wavelength_nm},
                         {"power_dbm", s.points[center].power_dbm}});
        i = j;
    }
    return peaks;
}

sim::Spectrum live_osa_trace(const Testbed& tb, const Device& osa_dev, bool locked) {
    const auto result = locked ? tb.propagate_unlocked() : tb.propagate();
    auto it = result.osa_spectra.find(osa_dev.id);
    if (it == result.osa_spectra.end()) {
        throw sim::ToolError(sim::errc::device_invariant,
                             "OSA '" + osa_dev.id + "' is not attached to the link topology");
    }
    return it->second;
}

// Window invariant shared by the four sweep-window setters.
void check_osa_window(double start_nm, double stop_nm) {
    if (!(start_nm < stop_nm)) {
        throw sim::ToolError(sim::errc::device_invariant,
                             "OSA window invalid: start " + std::to_string(start_nm) +
                                 " nm must stay below stop " + std::to_string(stop_nm) + " nm");
    }
}

json stokes_json(const sim::StokesState& s) {
    const auto angles = sim::stokes_to_angles(s);
    return json{{"s1", s.s[0]},        {"s2", s.s[1]},        {"s3", s.s[2]},
                {"dop", s.dop},        {"psi_deg", angles.psi_deg},
                {"chi_deg", angles.chi_deg}};
}

// Polarimeter measurement: laser SOP through the piezo squeezers, then the
// fiber plant. Advances the plant clock and fires due perturbations.
sim::StokesState pod_measure(Testbed& tb, Device& pod_dev) {
    auto& pod = pod_dev.as<sim::PodDevice>();
    sim::StokesState src;
    if (!pod.source_device.empty()) {
        src = tb.device(pod.source_device).as<sim::LaserDevice>().sop;
    }
    sim::PiezoState piezo;
    if (!pod.actuator_device.empty()) {
        piezo = tb.device(pod.actuator_device).as<sim::PcdDevice>().piezo;
    }
    pod.reads_done++;
    sim::StokesState through = sim::sop_from_piezo(src, piezo);
    for (auto& pert : pod.perturbations) {
        if (!pert.applied && pod.reads_done >= pert.at_read) {
            // Rotate the plant about an axis perpendicular to the current
            // output so the SOP jumps by exactly the requested angle.
            sim::StokesState now = sim::mat3_apply(pod.plant_rotation, through);
            const std::array<double, 3> s = now.s;
            int weakest = 0;
            for (int k = 1; k < 3; ++k) {
                if (std::abs(s[k]) < std::abs(s[weakest])) weakest = k;
            }
            std::array<double, 3> e{0, 0, 0};
            e[weakest] = 1.0;
            std::array<double, 3> axis{s[1] * e[2] - s[2] * e[1], s[2] * e[0] - s[0] * e[2],
                                       s[0] * e[1] - s[1] * e[0]};
            const double n = std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
            for (auto& v : axis) v /= n;
            const double rad = pert.angle_deg * 3.14159265358979323846 / 180.0;
            pod.plant_rotation =
                sim::mat3_mul(sim::rotation_about_axis(axis, rad), pod.plant_rotation);
            pert.applied = true;
        }
    }
    return sim::mat3_apply(pod.plant_rotation, through);
}

}  // namespace

// ============================================================================
// ROADM (10 tools)
// ============================================================================

static void register_roadm(Registry& r) {
    auto node_param = integer("node", "", 1, 8, "ROADM node number", false);
    auto side_param = choice("side", {"mux", "demux"}, "WSS side");
    auto module_param = choice("module", {"booster", "preamp"}, "EDFA module");

    r.add({ToolSpec{"roadm_add_wss_connection",
                    "Add a WSS connection (passband) on one side of the ROADM.",
                    "roadm",
                    {side_param, integer("id", "", 1, 999, "connection id"),
                     integer("port", "", 1, 20, "WSS port"),
                     num("start_ghz", "GHz", 190000, 197000, "passband start"),
                     num("end_ghz", "GHz", 190000, 197000, "passband end"),
                     num("attenuation_db", "dB", 0, 25, "passband attenuation"),
                     str("name", "connection label", false), node_param},
                    true,
                    "roadm_get_wss_connections"},
           resolve_roadm,
           [](Testbed&, Device& dev, const json& args, bool commit) -> json {
               auto& st = dev.as<sim::RoadmState>();
               sim::WssConnection c;
               c.id = args.at("id").get<int>();
               c.name = args.value("name", "");
               c.side = side_arg(args);
               c.port = args.at("port").get<int>();
               c.range = {args.at("start_ghz").get<double>(), args.at("end_ghz").get<double>()};
               c.attenuation_db = args.at("attenuation_db").get<double>();
               c.validate();
               sim::check_wss_overlap(st.connections, c);
               if (st.find_connection(c.side, c.id) != nullptr) {
                   throw sim::ToolError(sim::errc::device_invariant,
                                        "connection id " + std::to_string(c.id) +
                                            " already exists on the " + to_string(c.side) +
                                            " side");
               }
               if (!commit) return json::object();
               st.connections.push_back(c);
               return connection_json(c);
           },
           LockMode::write});

    r.add({ToolSpec{"roadm_delete_wss_connection",
                    "Delete one WSS connection by side and id.",
                    "roadm",
                    {side_param, integer("id", "", 1, 999, "connection id"), node_param},
                    true,
                    "roadm_get_wss_connections"},
           resolve_roadm,
           [](Testbed&, Device& dev, const json& args, bool commit) -> json {
               auto& st = dev.as<sim::RoadmState>();
               const auto side = side_arg(args);
               const int id = args.at("id").get<int>();
               require_connection(st, side, id);
               if (!commit) return json::object();
               std::erase_if(st.connections, [&](const sim::WssConnection& c) {
                   return c.side == side && c.id == id;
               });
               return json{{"deleted", id}, {"side", to_string(side)}};
           },
           LockMode::write});

    r.add({ToolSpec{"roadm_get_wss_connections",
                    "List the WSS connections configured on one side.",
                    "roadm",
                    {side_param, node_param},
                    false,
                    ""},
           resolve_roadm,
           [](Testbed&, Device& dev, const json& args, bool) -> json {
               const auto& st = dev.as<sim::RoadmState>();
               const auto side = side_arg(args);
               json conns = json::array();
               for (const auto& c : st.connections) {
                   if (c.side == side) conns.push_back(connection_json(c));
               }
               return json{{"side", to_string(side)}, {"connections", conns}};
           },
           LockMode::read});

    r.add({ToolSpec{"roadm_set_wss_attenuation",
                    "Set the attenuation of an existing WSS connection.",
                    "roadm",
                    {side_param, integer("id", "", 1, 999, "connection id"),
                     num("attenuation_db", "dB", 0, 25, "new attenuation"), node_param},
                    true,
                    "roadm_get_wss_attenuation"},
           resolve_roadm,
           [](Testbed&, Device& dev, const json& args, bool commit) -> json {
               auto& st = dev.as<sim::RoadmState>();
               auto& c = require_connection(st, side_arg(args), args.at("id").get<int>());
               if (!commit) return json::object();
               c.attenuation_db = args.at("attenuation_db").get<double>();
               return connection_json(c);
           },
           LockMode::write});

    r.add({ToolSpec{"roadm_get_wss_attenuation",
                    "Read the attenuation of an existing WSS connection.",
                    "roadm",
                    {side_param, integer("id", "", 1, 999, "connection id"), node_param},
                    false,
                    ""},
           resolve_roadm,
           [](Testbed&, Device& dev, const json& args, bool) -> json {
               auto& st = dev.as<sim::RoadmState>();
               const auto& c = require_connection(st, side_arg(args), args.at("id").get<int>());
               return json{{"id", c.id}, {"attenuation_db", c.attenuation_db}};
           },
           LockMode::read});

    r.add({ToolSpec{"roadm_set_edfa_gain",
                    "Set the target gain of the booster or preamp EDFA.",
                    "roadm",
                    {module_param, num("gain_db", "dB", 0, 30, "target gain"), node_param},
                    true,
                    "roadm_get_edfa_gain"},
           resolve_roadm,
           [](Testbed&, Device& dev, const json& args, bool commit) -> json {
               auto& e = dev.as<sim::RoadmState>().edfa(
                   sim::edfa_module_from_string(args.at("module").get<std::string>()));
               if (!commit) return json::object();
               e.target_gain_db = args.at("gain_db").get<double>();
               return edfa_json(e);
           },
           LockMode::write});

    r.add({ToolSpec{"roadm_get_edfa_gain",
                    "Read the target gain of the booster or preamp EDFA.",
                    "roadm",
                    {module_param, node_param},
                    false,
                    ""},
           resolve_roadm,
           [](Testbed&, Device& dev, const json& args, bool) -> json {
               const auto& e = dev.as<sim::RoadmState>().edfa(
                   sim::edfa_module_from_string(args.at("module").get<std::string>()));
               return json{{"module", to_string(e.module)}, {"target_gain_db", e.target_gain_db}};
           },
           LockMode::read});

    r.add({ToolSpec{"roadm_set_edfa_mode",
                    "Switch an EDFA between constant-gain and constant-power mode.",
                    "roadm",
                    {module_param, choice("mode", {"constant_gain", "constant_power"}, "mode"),
                     num("target_power_dbm", "dBm", -10, 23, "total output target", false),
                     node_param},
                    true,
                    "roadm_get_edfa_config"},
           resolve_roadm,
           [](Testbed&, Device& dev, const json& args, bool commit) -> json {
               auto& e = dev.as<sim::RoadmState>().edfa(
                   sim::edfa_module_from_string(args.at("module").get<std::string>()));
               if (!commit) return json::object();
               e.mode = sim::edfa_mode_from_string(args.at("mode").get<std::string>());
               if (args.contains("target_power_dbm")) {
                   e.target_power_dbm = args.at("target_power_dbm").get<double>();
               }
               return edfa_json(e);
           },
           LockMode::write});

    r.add({ToolSpec{"roadm_get_edfa_config",
                    "Read the full configuration of the booster or preamp EDFA.",
                    "roadm",
                    {module_param, node_param},
                    false,
                    ""},
           resolve_roadm,
           [](Testbed&, Device& dev, const json& args, bool) -> json {
               return edfa_json(dev.as<sim::RoadmState>().edfa(
                   sim::edfa_module_from_string(args.at("module").get<std::string>())));
           },
           LockMode::read});

    r.add({ToolSpec{"roadm_get_connection_input_power",
                    "Measure the optical power entering one WSS connection passband.",
                    "roadm",
                    {side_param, integer("id", "", 1, 999, "connection id"), node_param},
                    false,
                    ""},
           resolve_roadm,
           [](Testbed& tb, Device& dev, const json& args, bool) -> json {
               auto& st = dev.as<sim::RoadmState>();
               const auto side = side_arg(args);
               const auto& c = require_connection(st, side, args.at("id").get<int>());
               const auto result = tb.propagate();
               const double p = result.wss_input_power_dbm(dev.id, side, c.range);
               return json{{"id", c.id}, {"side", to_string(side)}, {"power_dbm", p}};
           },
           LockMode::read});
}

// ============================================================================
// CFP2-DCO transceiver (6 tools)
// ============================================================================

static void register_cfp2(Registry& r) {
    auto port_param = str("port", "transceiver port name, e.g. cfp2-opt-1-1");

    r.add({ToolSpec{"cfp2_set_center_frequency",
                    "Tune the transceiver center frequency (1 MHz grid).",
                    "cfp2",
                    {port_param,
                     integer("frequency_mhz", "MHz", 190000000, 197000000, "center frequency")},
                    true,
                    "cfp2_get_config"},
           resolve_cfp2,
           [](Testbed&, Device& dev, const json& args, bool commit) -> json {
               auto& st = dev.as<sim::Cfp2Device>();
               if (!commit) return json::object();
               st.center_frequency_mhz = args.at("frequency_mhz").get<double>();
               return json{{"port", st.port_name},
                           {"center_frequency_mhz", st.center_frequency_mhz}};
           },
           LockMode::write});

    r.add({ToolSpec{"cfp2_set_output_power",
                    "Set the transmitter output target power.",
                    "cfp2",
                    {port_param, num("power_dbm", "dBm", -15, 0, "output target power")},
                    true,
                    "cfp2_get_config"},
           resolve_cfp2,
           [](Testbed&, Device& dev, const json& args, bool commit) -> json {
               auto& st = dev.as<sim::Cfp2Device>();
               if (!commit) return json::object();
               st.target_tx_power_dbm = args.at("power_dbm").get<double>();
               return json{{"port", st.port_name},
                           {"target_tx_power_dbm", st.target_tx_power_dbm}};
           },
           LockMode::write});

    r.add({ToolSpec{"cfp2_set_operation_mode",
                    "Select the transceiver operation mode.",
                    "cfp2",
                    {port_param, choice("mode", sim::cfp2_modes(), "operation mode")},
                    true,
                    "cfp2_get_config"},
           resolve_cfp2,
           [](Testbed&, Device& dev, const json& args, bool commit) -> json {
               auto& st = dev.as<sim::Cfp2Device>();
               if (!commit) return json::object();
               st.mode = args.at("mode").get<std::string>();
               return json{{"port", st.port_name}, {"mode", st.mode}};
           },
           LockMode::write});

    r.add({ToolSpec{"cfp2_get_config", "Read the transceiver configuration.", "cfp2",
                    {port_param}, false, ""},
           resolve_cfp2,
           [](Testbed&, Device& dev, const json&, bool) -> json {
               const auto& st = dev.as<sim::Cfp2Device>();
               return json{{"port", st.port_name},
                           {"center_frequency_mhz", st.center_frequency_mhz},
                           {"target_tx_power_dbm", st.target_tx_power_dbm},
                           {"mode", st.mode},
                           {"enabled", st.enabled}};
           },
           LockMode::read});

    r.add({ToolSpec{"cfp2_get_rx_power", "Read the received optical power.", "cfp2",
                    {port_param}, false, ""},
           resolve_cfp2,
           [](Testbed& tb, Device& dev, const json&, bool) -> json {
               const auto result = tb.propagate();
               const auto& m = result.metrics_for(dev.id);
               return json{{"port", dev.as<sim::Cfp2Device>().port_name},
                           {"rx_power_dbm", m.rx_power_dbm}};
           },
           LockMode::read});

    r.add({ToolSpec{"cfp2_get_pre_fec_ber",
                    "Read the pre-FEC BER and the signal quality of the received channel.",
                    "cfp2",
                    {port_param},
                    false,
                    ""},
           resolve_cfp2,
           [](Testbed& tb, Device& dev, const json&, bool) -> json {
               const auto result = tb.propagate();
               const auto& m = result.metrics_for(dev.id);
               return json{{"port", dev.as<sim::Cfp2Device>().port_name},
                           {"pre_fec_ber", m.pre_fec_ber},
                           {"osnr_db", m.osnr_db},
                           {"gsnr_db", m.gsnr_db},
                           {"rx_power_dbm", m.rx_power_dbm}};
           },
           LockMode::read});
}

// ============================================================================
// ARoF transmitter (6 tools)
// ============================================================================

static void register_arof(Registry& r) {
    r.add({ToolSpec{"arof_set_bias_voltage",
                    "Set the EAM bias voltage.",
                    "arof",
                    {num("volts", "V", -3, 0, "bias voltage")},
                    true,
                    "arof_get_status"},
           by_kind(DeviceKind::arof),
           [](Testbed&, Device& dev, const json& args, bool commit) -> json {
               auto& st = dev.as<sim::ArofDevice>();
               if (!commit) return json::object();
               st.state.bias_voltage_v = args.at("volts").get<double>();
               return json{{"bias_voltage_v", st.state.bias_voltage_v}};
           },
           LockMode::write});

    r.add({ToolSpec{"arof_set_current",
                    "Set the transmitter drive current.",
                    "arof",
                    {num("ma", "mA", 0, 120, "drive current")},
                    true,
                    "arof_get_status"},
           by_kind(DeviceKind::arof),
           [](Testbed&, Device& dev, const json& args, bool commit) -> json {
               auto& st = dev.as<sim::ArofDevice>();
               if (!commit) return json::object();
               st.state.drive_current_ma = args.at("ma").get<double>();
               return json{{"drive_current_ma", st.state.drive_current_ma}};
           },
           LockMode::write});

    r.add({ToolSpec{"arof_get_status", "Read the transmitter status.", "arof", {}, false, ""},
           by_kind(DeviceKind::arof),
           [](Testbed&, Device& dev, const json&, bool) -> json {
               const auto& st = dev.as<sim::ArofDevice>();
               return json{{"bias_voltage_v", st.state.bias_voltage_v},
                           {"drive_current_ma", st.state.drive_current_ma},
                           {"enabled", st.state.enabled},
                           {"carrier_ghz", st.carrier_ghz}};
           },
           LockMode::read});

    r.add({ToolSpec{"arof_enable_output", "Enable the optical output.", "arof", {}, true,
                    "arof_get_status"},
           by_kind(DeviceKind::arof),
           [](Testbed&, Device& dev, const json&, bool commit) -> json {
               if (!commit) return json::object();
               dev.as<sim::ArofDevice>().state.enabled = true;
               return json{{"enabled", true}};
           },
           LockMode::write});

    r.add({ToolSpec{"arof_disable_output", "Disable the optical output.", "arof", {}, true,
                    "arof_get_status"},
           by_kind(DeviceKind::arof),
           [](Testbed&, Device& dev, const json&, bool commit) -> json {
               if (!commit) return json::object();
               dev.as<sim::ArofDevice>().state.enabled = false;
               return json{{"enabled", false}};
           },
           LockMode::write});

    r.add({ToolSpec{"arof_read_power", "Read the launched optical power.", "arof", {}, false, ""},
           by_kind(DeviceKind::arof),
           [](Testbed&, Device& dev, const json&, bool) -> json {
               const auto& st = dev.as<sim::ArofDevice>();
               double p = sim::kNoiseFloorDbm;
               if (st.state.enabled) {
                   const double t = st.eam.transfer(st.state.bias_voltage_v);
                   p = st.tx_power_dbm + sim::linear_to_db(std::max(t, 1e-6));
               }
               return json{{"output_power_dbm", p}, {"enabled", st.state.enabled}};
           },
           LockMode::read});
}

// ============================================================================
// OSA (26 tools)
// ============================================================================

static void register_osa(Registry& r) {
    auto osa = by_kind(DeviceKind::osa);

    auto add_window_setter = [&](const std::string& name, const std::string& desc,
                                 auto apply) {
        r.add({ToolSpec{name, desc, "osa",
                        {num("nm", "nm", 1250, 1650, "wavelength")}, true,
                        "osa_get_" + name.substr(8)},
               by_kind(DeviceKind::osa),
               [apply](Testbed&, Device& dev, const json& args, bool commit) -> json {
                   auto& st = dev.as<sim::OsaDevice>();
                   double start = st.start_nm, stop = st.stop_nm;
                   apply(start, stop, args.at("nm").get<double>());
                   check_osa_window(start, stop);
                   if (!commit) return json::object();
                   st.start_nm = start;
                   st.stop_nm = stop;
                   return json{{"start_nm", st.start_nm}, {"stop_nm", st.stop_nm}};
               },
               LockMode::write});
    };

    add_window_setter("osa_set_start_wavelength", "Set the sweep start wavelength.",
                      [](double& start, double&, double v) { start = v; });
    add_window_setter("osa_set_stop_wavelength", "Set the sweep stop wavelength.",
                      [](double&, double& stop, double v) { stop = v; });
    add_window_setter("osa_set_center_wavelength",
                      "Set the sweep center wavelength, keeping the span.",
                      [](double& start, double& stop, double v) {
                          const double half = (stop - start) / 2.0;
                          start = v - half;
                          stop = v + half;
                      });

    r.add({ToolSpec{"osa_get_start_wavelength", "Read the sweep start wavelength.", "osa", {},
                    false, ""},
           osa,
           [](Testbed&, Device& dev, const json&, bool) -> json {
               return json{{"nm", dev.as<sim::OsaDevice>().start_nm}};
           },
           LockMode::read});

    r.add({ToolSpec{"osa_get_stop_wavelength", "Read the sweep stop wavelength.", "osa", {},
                    false, ""},
           osa,
           [](Testbed&, Device& dev, const json&, bool) -> json {
               return json{{"nm", dev.as<sim::OsaDevice>().stop_nm}};
           },
           LockMode::read});

    r.add({ToolSpec{"osa_get_center_wavelength", "Read the sweep center wavelength.", "osa", {},
                    false, ""},
           osa,
           [](Testbed&, Device& dev, const json&, bool) -> json {
               const auto& st = dev.as<sim::OsaDevice>();
               return json{{"nm", (st.start_nm + st.stop_nm) / 2.0}};
           },
           LockMode::read});

    r.add({ToolSpec{"osa_set_span", "Set the sweep span, keeping the center.", "osa",
                    {num("nm", "nm", 0.1, 400, "span width")}, true, "osa_get_span"},
           osa,
           [](Testbed&, Device& dev, const json& args, bool commit) -> json {
               auto& st = dev.as<sim::OsaDevice>();
               const double center = (st.start_nm + st.stop_nm) / 2.0;
               const double half = args.at("nm").get<double>() / 2.0;
               check_osa_window(center - half, center + half);
               if (!commit) return json::object();
               st.start_nm = center - half;
               st.stop_nm = center + half;
               return json{{"start_nm", st.start_nm}, {"stop_nm", st.stop_nm}};
           },
           LockMode::write});

    r.add({ToolSpec{"osa_get_span", "Read the sweep span.", "osa", {}, false, ""},
           osa,
           [](Testbed&, Device& dev, const json&, bool) -> json {
               const auto& st = dev.as<sim::OsaDevice>();
               return json{{"nm", st.stop_nm - st.start_nm}};
           },
           LockMode::read});

    r.add({ToolSpec{"osa_set_resolution_bandwidth", "Set the resolution bandwidth.", "osa",
                    {num("nm", "nm", 0.01, 2, "resolution bandwidth")}, true,
                    "osa_get_resolution_bandwidth"},
           osa,
           [](Testbed&, Device& dev, const json& args, bool commit) -> json {
               if (!commit) return json::object();
               auto& st = dev.as<sim::OsaDevice>();
               st.rbw_nm = args.at("nm").get<double>();
               return json{{"rbw_nm", st.rbw_nm}};
           },
           LockMode::write});

    r.add({ToolSpec{"osa_get_resolution_bandwidth", "Read the resolution bandwidth.", "osa", {},
                    false, ""},
           osa,
           [](Testbed&, Device& dev, const json&, bool) -> json {
               return json{{"nm", dev.as<sim::OsaDevice>().rbw_nm}};
           },
           LockMode::read});

    r.add({ToolSpec{"osa_set_sweep_points", "Set the number of sweep points.", "osa",
                    {integer("points", "", 101, 20001, "sample count")}, true,
                    "osa_get_sweep_points"},
           osa,
           [](Testbed&, Device& dev, const json& args, bool commit) -> json {
               if (!commit) return json::object();
               auto& st = dev.as<sim::OsaDevice>();
               st.sweep_points = args.at("points").get<int>();
               return json{{"points", st.sweep_points}};
           },
           LockMode::write});

    r.add({ToolSpec{"osa_get_sweep_points", "Read the number of sweep points.", "osa", {}, false,
                    ""},
           osa,
           [](Testbed&, Device& dev, const json&, bool) -> json {
               return json{{"points", dev.as<sim::OsaDevice>().sweep_points}};
           },
           LockMode::read});

    r.add({ToolSpec{"osa_set_sweep_mode", "Select single or repeat sweep mode.", "osa",
                    {choice("mode", {"single", "repeat"}, "sweep mode")}, true,
                    "osa_get_sweep_mode"},
           osa,
           [](Testbed&, Device& dev, const json& args, bool commit) -> json {
               if (!commit) return json::object();
               auto& st = dev.as<sim::OsaDevice>();
               st.sweep_mode = args.at("mode").get<std::string>();
               return json{{"mode", st.sweep_mode}};
           },
           LockMode::write});

    r.add({ToolSpec{"osa_get_sweep_mode", "Read the sweep mode and sweep state.", "osa", {},
                    false, ""},
           osa,
           [](Testbed&, Device& dev, const json&, bool) -> json {
               const auto& st = dev.as<sim::OsaDevice>();
               return json{{"mode", st.sweep_mode}, {"running", st.sweep_running}};
           },
           LockMode::read});

    r.add({ToolSpec{"osa_run_sweep", "Run a sweep and capture the trace.", "osa", {}, true,
                    "osa_get_spectrum"},
           osa,
           [](Testbed& tb, Device& dev, const json&, bool commit) -> json {
               if (!commit) return json::object();
               auto& st = dev.as<sim::OsaDevice>();
               st.last_trace = live_osa_trace(tb, dev, /*locked=*/true);
               st.sweep_running = st.sweep_mode == "repeat";
               return json{{"points", st.last_trace->points.size()},
                           {"total_power_dbm", st.last_trace->total_power_dbm()}};
           },
           LockMode::snapshot});

    r.add({ToolSpec{"osa_stop_sweep", "Stop a running sweep.", "osa", {}, true,
                    "osa_get_sweep_mode"},
           osa,
           [](Testbed&, Device& dev, const json&, bool commit) -> json {
               if (!commit) return json::object();
               auto& st = dev.as<sim::OsaDevice>();
               st.sweep_running = false;
               return json{{"running", false}};
           },
           LockMode::write});

    r.add({ToolSpec{"osa_get_spectrum",
                    "Return the captured trace, or a live capture when none is stored.", "osa",
                    {}, false, ""},
           osa,
           [](Testbed& tb, Device& dev, const json&, bool) -> json {
               const auto& st = dev.as<sim::OsaDevice>();
               if (st.last_trace) return spectrum_json(*st.last_trace);
               return spectrum_json(live_osa_trace(tb, dev, false));
           },
           LockMode::read});

    r.add({ToolSpec{"osa_get_power", "Read the total power within the sweep window.", "osa", {},
                    false, ""},
           osa,
           [](Testbed& tb, Device& dev, const json&, bool) -> json {
               const auto result = tb.propagate();
               double mw = 0.0;
               auto it = result.osa_channels.find(dev.id);
               if (it == result.osa_channels.end()) {
                   throw sim::ToolError(sim::errc::device_invariant,
                                        "OSA '" + dev.id + "' is not attached to the link topology");
               }
               const auto& st = dev.as<sim::OsaDevice>();
               for (const auto& ch : it->second) {
                   const double wl = sim::ghz_to_nm(ch.range.center_ghz());
                   if (wl >= st.start_nm && wl <= st.stop_nm) {
                       mw += sim::dbm_to_mw(ch.power_dbm);
                   }
               }
               const double p = mw > 0.0 ? sim::mw_to_dbm(mw) : sim::kNoiseFloorDbm;
               return json{{"power_dbm", p}};
           },
           LockMode::read});

    r.add({ToolSpec{"osa_get_peak", "Find the strongest peak in the sweep window.", "osa", {},
                    false, ""},
           osa,
           [](Testbed& tb, Device& dev, const json&, bool) -> json {
               const auto trace = live_osa_trace(tb, dev, false);
               const json peaks = find_peaks(trace, 10.0);
               if (peaks.empty()) {
                   throw sim::ToolError(sim::errc::device_invariant,
                                        "no peak above the noise floor in the sweep window");
               }
               const json* best = &peaks[0];
               for (const auto& p : peaks) {
                   if (p.at("power_dbm").get<double>() > best->at("power_dbm").get<double>()) {
                       best = &p;
                   }
               }
               return *best;
           },
           LockMode::read});

    r.add({ToolSpec{"osa_get_peaks", "List spectral peaks in the sweep window.", "osa",
                    {num("min_rise_db", "dB", 0, 60, "detection threshold above the noise floor",
                         false)},
                    false, ""},
           osa,
           [](Testbed& tb, Device& dev, const json& args, bool) -> json {
               const auto trace = live_osa_trace(tb, dev, false);
               return json{{"peaks", find_peaks(trace, args.value("min_rise_db", 10.0))}};
           },
           LockMode::read});

    r.add({ToolSpec{"osa_get_osnr",
                    "Estimate the OSNR (0.1 nm reference) of the channel at a wavelength.",
                    "osa",
                    {num("nm", "nm", 1250, 1650, "channel wavelength; defaults to the strongest peak",
                         false)},
                    false, ""},
           osa,
           [](Testbed& tb, Device& dev, const json& args, bool) -> json {
               const auto result = tb.propagate();
               auto it = result.osa_channels.find(dev.id);
               if (it == result.osa_channels.end() || it->second.empty()) {
                   throw sim::ToolError(sim::errc::device_invariant,
                                        "no channel visible at this OSA");
               }
               const sim::ChannelSignal* chosen = nullptr;
               if (args.contains("nm")) {
                   const double f = sim::nm_to_ghz(args.at("nm").get<double>());
                   for (const auto& ch : it->second) {
                       if (ch.range.contains(f)) chosen = &ch;
                   }
               } else {
                   for (const auto& ch : it->second) {
                       if (chosen == nullptr || ch.power_dbm > chosen->power_dbm) chosen = &ch;
                   }
               }
               if (chosen == nullptr) {
                   throw sim::ToolError(sim::errc::device_invariant,
                                        "no channel at the requested wavelength");
               }
               const double inv = std::max(chosen->inv_osnr_linear, 1e-20);
               return json{{"wavelength_nm", sim::ghz_to_nm(chosen->range.center_ghz())},
                           {"osnr_db", sim::linear_to_db(1.0 / inv)}};
           },
           LockMode::read});

    r.add({ToolSpec{"osa_set_marker", "Place a marker at a wavelength.", "osa",
                    {integer("id", "", 1, 4, "marker id"),
                     num("nm", "nm", 1250, 1650, "marker wavelength")},
                    true, "osa_get_marker"},
           osa,
           [](Testbed&, Device& dev, const json& args, bool commit) -> json {
               if (!commit) return json::object();
               auto& st = dev.as<sim::OsaDevice>();
               const int id = args.at("id").get<int>();
               st.markers[id] = args.at("nm").get<double>();
               return json{{"id", id}, {"wavelength_nm", st.markers[id]}};
           },
           LockMode::write});

    r.add({ToolSpec{"osa_get_marker", "Read a marker and the live power at its wavelength.",
                    "osa", {integer("id", "", 1, 4, "marker id")}, false, ""},
           osa,
           [](Testbed& tb, Device& dev, const json& args, bool) -> json {
               const auto& st = dev.as<sim::OsaDevice>();
               const int id = args.at("id").get<int>();
               auto it = st.markers.find(id);
               if (it == st.markers.end()) {
                   throw sim::ToolError(sim::errc::device_invariant,
                                        "marker " + std::to_string(id) + " is not set");
               }
               const auto result = tb.propagate();
               double p = sim::kNoiseFloorDbm;
               auto cit = result.osa_channels.find(dev.id);
               if (cit != result.osa_channels.end()) {
                   const double f = sim::nm_to_ghz(it->second);
                   double mw = 0.0;
                   for (const auto& ch : cit->second) {
                       if (ch.range.contains(f)) mw += sim::dbm_to_mw(ch.power_dbm);
                   }
                   if (mw > 0.0) p = sim::mw_to_dbm(mw);
               }
               return json{{"id", id}, {"wavelength_nm", it->second}, {"power_dbm", p}};
           },
           LockMode::read});

    r.add({ToolSpec{"osa_clear_markers", "Remove all markers.", "osa", {}, true,
                    "osa_get_device_info"},
           osa,
           [](Testbed&, Device& dev, const json&, bool commit) -> json {
               if (!commit) return json::object();
               auto& st = dev.as<sim::OsaDevice>();
               st.markers.clear();
               return json{{"markers", 0}};
           },
           LockMode::write});

    r.add({ToolSpec{"osa_save_trace", "Store the captured trace under a label.", "osa",
                    {str("label", "trace label")}, true, "osa_get_device_info"},
           osa,
           [](Testbed&, Device& dev, const json& args, bool commit) -> json {
               auto& st = dev.as<sim::OsaDevice>();
               if (!st.last_trace) {
                   throw sim::ToolError(sim::errc::device_invariant,
                                        "no trace captured; run a sweep first");
               }
               if (!commit) return json::object();
               st.saved_traces.push_back(args.at("label").get<std::string>());
               return json{{"saved", args.at("label").get<std::string>()},
                           {"count", st.saved_traces.size()}};
           },
           LockMode::write});

    r.add({ToolSpec{"osa_get_device_info", "Read instrument information and status.", "osa", {},
                    false, ""},
           osa,
           [](Testbed&, Device& dev, const json&, bool) -> json {
               const auto& st = dev.as<sim::OsaDevice>();
               return json{{"model", "osa-sim-2000"},
                           {"serial", dev.id},
                           {"sweep_running", st.sweep_running},
                           {"markers", st.markers.size()},
                           {"saved_traces", st.saved_traces.size()}};
           },
           LockMode::read});
}

// ============================================================================
// Optical circuit switch (4 tools)
// ============================================================================

static void register_ocs(Registry& r) {
    auto ocs = by_kind(DeviceKind::ocs);

    r.add({ToolSpec{"ocs_get_ports", "List ports and active cross-connects.", "ocs", {}, false,
                    ""},
           ocs,
           [](Testbed&, Device& dev, const json&, bool) -> json {
               const auto& st = dev.as<sim::OcsDevice>();
               json conns = json::array();
               for (const auto& [in, out] : st.connections) {
                   conns.push_back({{"in_port", in}, {"out_port", out}});
               }
               return json{{"port_count", st.port_count}, {"connections", conns}};
           },
           LockMode::read});

    r.add({ToolSpec{"ocs_add_connection", "Create a cross-connect between two ports.", "ocs",
                    {integer("in_port", "", 1, 320, "input port"),
                     integer("out_port", "", 1, 320, "output port")},
                    true, "ocs_get_ports"},
           ocs,
           [](Testbed&, Device& dev, const json& args, bool commit) -> json {
               auto& st = dev.as<sim::OcsDevice>();
               const int in = args.at("in_port").get<int>();
               const int out = args.at("out_port").get<int>();
               if (in > st.port_count || out > st.port_count) {
                   throw sim::ToolError(sim::errc::invalid_port,
                                        "port beyond the switch size of " +
                                            std::to_string(st.port_count));
               }
               if (st.connections.count(in)) {
                   throw sim::ToolError(sim::errc::device_invariant,
                                        "input port " + std::to_string(in) +
                                            " already has a connection");
               }
               for (const auto& [i, o] : st.connections) {
                   if (o == out) {
                       throw sim::ToolError(sim::errc::device_invariant,
                                            "output port " + std::to_string(out) +
                                                " already has a connection");
                   }
               }
               if (!commit) return json::object();
               st.connections[in] = out;
               return json{{"in_port", in}, {"out_port", out}};
           },
           LockMode::write});

    r.add({ToolSpec{"ocs_delete_connection", "Remove one cross-connect.", "ocs",
                    {integer("in_port", "", 1, 320, "input port"),
                     integer("out_port", "", 1, 320, "output port")},
                    true, "ocs_get_ports"},
           ocs,
           [](Testbed&, Device& dev, const json& args, bool commit) -> json {
               auto& st = dev.as<sim::OcsDevice>();
               const int in = args.at("in_port").get<int>();
               const int out = args.at("out_port").get<int>();
               auto it = st.connections.find(in);
               if (it == st.connections.end() || it->second != out) {
                   throw sim::ToolError(sim::errc::device_invariant,
                                        "no connection " + std::to_string(in) + " -> " +
                                            std::to_string(out));
               }
               if (!commit) return json::object();
               st.connections.erase(it);
               return json{{"deleted", true}};
           },
           LockMode::write});

    r.add({ToolSpec{"ocs_delete_all_connections", "Remove every cross-connect.", "ocs", {}, true,
                    "ocs_get_ports"},
           ocs,
           [](Testbed&, Device& dev, const json&, bool commit) -> json {
               if (!commit) return json::object();
               auto& st = dev.as<sim::OcsDevice>();
               const size_t n = st.connections.size();
               st.connections.clear();
               return json{{"deleted", n}};
           },
           LockMode::write});
}

// ============================================================================
// MEMS switch (2 tools)
// ============================================================================

static void register_mems(Registry& r) {
    auto mems = by_kind(DeviceKind::mems);

    r.add({ToolSpec{"mems_get_connections", "Read the switch connection map.", "mems", {}, false,
                    ""},
           mems,
           [](Testbed&, Device& dev, const json&, bool) -> json {
               const auto& st = dev.as<sim::MemsDevice>();
               json conns = json::array();
               for (const auto& [in, out] : st.connections) {
                   conns.push_back({{"input", in}, {"output", out}});
               }
               return json{{"size", st.size}, {"connections", conns}};
           },
           LockMode::read});

    r.add({ToolSpec{"mems_set_connection", "Connect an input port to an output port.", "mems",
                    {integer("input", "", 1, 32, "input port"),
                     integer("output", "", 1, 32, "output port")},
                    true, "mems_get_connections"},
           mems,
           [](Testbed&, Device& dev, const json& args, bool commit) -> json {
               auto& st = dev.as<sim::MemsDevice>();
               const int in = args.at("input").get<int>();
               const int out = args.at("output").get<int>();
               for (const auto& [i, o] : st.connections) {
                   if (o == out && i != in) {
                       throw sim::ToolError(sim::errc::device_invariant,
                                            "output port " + std::to_string(out) +
                                                " already in use");
                   }
               }
               if (!commit) return json::object();
               st.connections[in] = out;
               return json{{"input", in}, {"output", out}};
           },
           LockMode::write});
}

// ============================================================================
// Polarimeter (7 tools)
// ============================================================================

static void register_pod(Registry& r) {
    auto pod = by_kind(DeviceKind::pod);

    r.add({ToolSpec{"pod_set_wavelength", "Configure the measurement wavelength.", "pod",
                    {num("nm", "nm", 1000, 1700, "wavelength")}, true, "pod_get_config"},
           pod,
           [](Testbed&, Device& dev, const json& args, bool commit) -> json {
               if (!commit) return json::object();
               auto& st = dev.as<sim::PodDevice>();
               st.wavelength_nm = args.at("nm").get<double>();
               return json{{"wavelength_nm", st.wavelength_nm}};
           },
           LockMode::write});

    r.add({ToolSpec{"pod_set_averaging", "Configure the measurement averaging count.", "pod",
                    {integer("count", "", 1, 1000, "averages per reading")}, true,
                    "pod_get_config"},
           pod,
           [](Testbed&, Device& dev, const json& args, bool commit) -> json {
               if (!commit) return json::object();
               auto& st = dev.as<sim::PodDevice>();
               st.averaging = args.at("count").get<int>();
               return json{{"averaging", st.averaging}};
           },
           LockMode::write});

    r.add({ToolSpec{"pod_get_config", "Read the polarimeter configuration.", "pod", {}, false, ""},
           pod,
           [](Testbed&, Device& dev, const json&, bool) -> json {
               const auto& st = dev.as<sim::PodDevice>();
               return json{{"wavelength_nm", st.wavelength_nm}, {"averaging", st.averaging}};
           },
           LockMode::read});

    r.add({ToolSpec{"pod_read_polarization",
                    "Measure the state of polarization (Stokes vector and angles).", "pod", {},
                    false, ""},
           pod,
           [](Testbed& tb, Device& dev, const json&, bool) -> json {
               return stokes_json(pod_measure(tb, dev));
           },
           LockMode::snapshot});

    r.add({ToolSpec{"pod_read_power", "Measure the received optical power.", "pod", {}, false, ""},
           pod,
           [](Testbed& tb, Device& dev, const json&, bool) -> json {
               const auto& st = dev.as<sim::PodDevice>();
               double p = sim::kNoiseFloorDbm;
               if (!st.source_device.empty()) {
                   const auto& laser = tb.device(st.source_device).as<sim::LaserDevice>();
                   if (laser.enabled) p = laser.power_dbm;
               }
               return json{{"power_dbm", p}};
           },
           LockMode::snapshot});

    r.add({ToolSpec{"pod_read_dop", "Measure the degree of polarization.", "pod", {}, false, ""},
           pod,
           [](Testbed& tb, Device& dev, const json&, bool) -> json {
               return json{{"dop", pod_measure(tb, dev).dop}};
           },
           LockMode::snapshot});

    r.add({ToolSpec{"pod_get_device_info", "Read instrument information.", "pod", {}, false, ""},
           pod,
           [](Testbed&, Device& dev, const json&, bool) -> json {
               return json{{"model", "polarimeter-sim"}, {"serial", dev.id}, {"channels", 1}};
           },
           LockMode::read});
}

// ============================================================================
// Piezo polarization controller (3 tools)
// ============================================================================

static void register_pcd(Registry& r) {
    auto pcd = by_kind(DeviceKind::pcd);

    r.add({ToolSpec{"pcd_reset_dac_codes", "Reset all four DAC codes to mid-scale (2048).", "pcd",
                    {}, true, "pod_read_polarization"},
           pcd,
           [](Testbed&, Device& dev, const json&, bool commit) -> json {
               if (!commit) return json::object();
               auto& st = dev.as<sim::PcdDevice>();
               st.piezo.codes = {2048, 2048, 2048, 2048};
               return json{{"codes", st.piezo.codes}};
           },
           LockMode::write});

    r.add({ToolSpec{"pcd_set_dac_code", "Set one channel's 12-bit DAC code.", "pcd",
                    {integer("channel", "", 1, 4, "piezo channel"),
                     integer("code", "", 0, 4095, "DAC code")},
                    true, "pod_read_polarization"},
           pcd,
           [](Testbed&, Device& dev, const json& args, bool commit) -> json {
               auto& st = dev.as<sim::PcdDevice>();
               const int channel = args.at("channel").get<int>();
               const int code = args.at("code").get<int>();
               if (!commit) return json::object();
               st.piezo.codes[static_cast<size_t>(channel - 1)] = code;
               return json{{"channel", channel},
                           {"code", code},
                           {"volts", sim::PiezoState::code_to_volts(code)}};
           },
           LockMode::write});

    r.add({ToolSpec{"pcd_set_voltage",
                    "Set one channel's drive voltage (quantized to the DAC grid).", "pcd",
                    {integer("channel", "", 1, 4, "piezo channel"),
                     num("volts", "V", 0, 5, "drive voltage")},
                    true, "pod_read_polarization"},
           pcd,
           [](Testbed&, Device& dev, const json& args, bool commit) -> json {
               auto& st = dev.as<sim::PcdDevice>();
               const int channel = args.at("channel").get<int>();
               const double volts = args.at("volts").get<double>();
               const int code = static_cast<int>(
                   std::lround(volts / sim::kDacFullScaleV * sim::kDacCodeMax));
               if (!commit) return json::object();
               st.piezo.codes[static_cast<size_t>(channel - 1)] = code;
               return json{{"channel", channel},
                           {"code", code},
                           {"volts", sim::PiezoState::code_to_volts(code)}};
           },
           LockMode::write});
}

// ============================================================================
// Extension servers: DAS interrogator and RF link tester (outside the 64)
// ============================================================================

static void register_das(Registry& r) {
    auto das = by_kind(DeviceKind::das);

    r.add({ToolSpec{"das_start_monitoring", "Start vibration monitoring over a time window.",
                    "das", {num("window_s", "s", 1, 3600, "monitoring window", false)}, true,
                    "das_get_status"},
           das,
           [](Testbed&, Device& dev, const json& args, bool commit) -> json {
               if (!commit) return json::object();
               auto& st = dev.as<sim::DasDevice>();
               st.monitoring = true;
               st.window_s = args.value("window_s", st.window_s);
               return json{{"monitoring", true}, {"window_s", st.window_s}};
           },
           LockMode::write});

    r.add({ToolSpec{"das_get_status", "Read the interrogator status.", "das", {}, false, ""},
           das,
           [](Testbed&, Device& dev, const json&, bool) -> json {
               const auto& st = dev.as<sim::DasDevice>();
               return json{{"monitoring", st.monitoring},
                           {"fiber_km", st.fiber_km},
                           {"window_s", st.window_s}};
           },
           LockMode::read});

    r.add({ToolSpec{"das_get_waterfall",
                    "Retrieve the waterfall matrix recorded over the monitoring window.", "das",
                    {}, false, ""},
           das,
           [](Testbed&, Device& dev, const json&, bool) -> json {
               const auto& st = dev.as<sim::DasDevice>();
               if (!st.monitoring) {
                   throw sim::ToolError(sim::errc::device_invariant,
                                        "monitoring is not running; start it first");
               }
               const auto w = sim::synthesize_waterfall(st.scenario, st.seed, st.rows, st.cols);
               return json{{"rows", w.rows},
                           {"cols", w.cols},
                           {"dt_s", w.dt_s},
                           {"dx_m", w.dx_m},
                           {"intensity", w.intensity}};
           },
           LockMode::read});
}

static void register_rfsoc(Registry& r) {
    auto rfsoc = by_kind(DeviceKind::rfsoc);

    r.add({ToolSpec{"rfsoc_run_link_test",
                    "Run an OFDM link test through the analog transmitter and report SNR, EVM and "
                    "BER.",
                    "rfsoc", {choice("modulation", {"QPSK", "16QAM", "64QAM"}, "OFDM modulation")},
                    false, ""},
           rfsoc,
           [](Testbed& tb, Device& dev, const json& args, bool) -> json {
               const auto& st = dev.as<sim::RfsocDevice>();
               if (st.arof_device.empty()) {
                   throw sim::ToolError(sim::errc::config_invalid,
                                        "link tester has no transmitter attached");
               }
               const auto& arof = tb.device(st.arof_device).as<sim::ArofDevice>();
               const auto mod = sim::modulation_from_string(args.at("modulation").get<std::string>());
               const auto m = sim::arof_link_metrics(arof.state, mod, st.fiber_km, arof.eam);
               return json{{"modulation", to_string(mod)},
                           {"snr_db", m.snr_db},
                           {"evm_pct", m.evm_pct},
                           {"ber", m.ber},
                           {"bias_voltage_v", arof.state.bias_voltage_v},
                           {"drive_current_ma", arof.state.drive_current_ma}};
           },
           LockMode::snapshot});

    r.add({ToolSpec{"rfsoc_get_config", "Read the link tester configuration.", "rfsoc", {}, false,
                    ""},
           rfsoc,
           [](Testbed&, Device& dev, const json&, bool) -> json {
               const auto& st = dev.as<sim::RfsocDevice>();
               return json{{"arof_device", st.arof_device}, {"fiber_km", st.fiber_km}};
           },
           LockMode::read});
}

void register_core_tools(Registry& r, const std::vector<DeviceKind>& kinds) {
    for (const auto k : kinds) {
        switch (k) {
            case DeviceKind::roadm: register_roadm(r); break;
            case DeviceKind::cfp2: register_cfp2(r); break;
            case DeviceKind::arof: register_arof(r); break;
            case DeviceKind::osa: register_osa(r); break;
            case DeviceKind::ocs: register_ocs(r); break;
            case DeviceKind::mems: register_mems(r); break;
            case DeviceKind::pod: register_pod(r); break;
            case DeviceKind::pcd: register_pcd(r); break;
            default: break;
        }
    }
}

void register_extension_tools(Registry& r, const std::vector<DeviceKind>& kinds) {
    for (const auto k : kinds) {
        switch (k) {
            case DeviceKind::das: register_das(r); break;
            case DeviceKind::rfsoc: register_rfsoc(r); break;
            default: break;
        }
    }
}

}  // namespace optctl::tools
