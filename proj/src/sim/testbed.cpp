#include "optctl/sim/testbed.hpp"

#include <fstream>
#include <mutex>
#include <set>

namespace optctl::sim {

const ChannelMetrics& PropagationResult::metrics_for(const std::string& device_id) const {
    auto it = endpoint_metrics.find(device_id);
    if (it == endpoint_metrics.end()) {
        throw ToolError(errc::unrouted_channel,
                        "no channel reaches receiver '" + device_id +
                            "'; the signal is blocked upstream");
    }
    return it->second;
}

double PropagationResult::wss_input_power_dbm(const std::string& device_id, WssSide side,
                                              const FrequencyRange& range) const {
    auto it = wss_inputs.find(device_id + ":" + to_string(side));
    if (it == wss_inputs.end()) return kNoiseFloorDbm;
    double mw = 0.0;
    for (const auto& ch : it->second) {
        if (range.contains(ch.range.center_ghz())) mw += dbm_to_mw(ch.power_dbm);
    }
    return mw > 0.0 ? mw_to_dbm(mw) : kNoiseFloorDbm;
}

Testbed Testbed::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ToolError(errc::config_invalid, "cannot open topology file '" + path + "'");
    }
    json j;
    in >> j;
    return from_json(j);
}

Testbed Testbed::from_json(const json& config) {
    Testbed tb;
    tb.name_ = config.value("name", "testbed");
    tb.nli_eta_ = config.value("nli_eta_per_mw2", 0.0);
    for (const auto& dj : config.value("devices", json::array())) {
        auto dev = device_from_json(dj);
        if (tb.devices_.count(dev->id)) {
            throw ToolError(errc::config_invalid, "duplicate device id '" + dev->id + "'");
        }
        tb.devices_[dev->id] = std::move(dev);
    }
    tb.topology_ = Topology::from_json(config.value("elements", json::array()));
    for (const auto& e : tb.topology_.elements) {
        if (!e.device_id.empty() && !tb.devices_.count(e.device_id)) {
            throw ToolError(errc::config_invalid,
                            "topology references unknown device '" + e.device_id + "'");
        }
    }
    return tb;
}

Device& Testbed::device(const std::string& id) {
    auto it = devices_.find(id);
    if (it == devices_.end()) {
        throw ToolError(errc::unknown_device, "unknown device '" + id + "'");
    }
    return *it->second;
}

const Device& Testbed::device(const std::string& id) const {
    auto it = devices_.find(id);
    if (it == devices_.end()) {
        throw ToolError(errc::unknown_device, "unknown device '" + id + "'");
    }
    return *it->second;
}

Device* Testbed::find_first_of_kind(DeviceKind kind) {
    for (auto& [id, dev] : devices_) {
        if (dev->kind == kind) return dev.get();
    }
    return nullptr;
}

const Device* Testbed::find_first_of_kind(DeviceKind kind) const {
    for (const auto& [id, dev] : devices_) {
        if (dev->kind == kind) return dev.get();
    }
    return nullptr;
}

std::vector<std::string> Testbed::device_ids() const {
    std::vector<std::string> ids;
    ids.reserve(devices_.size());
    for (const auto& [id, dev] : devices_) ids.push_back(id);
    return ids;
}

std::vector<DeviceKind> Testbed::present_kinds() const {
    std::set<DeviceKind> seen;
    for (const auto& [id, dev] : devices_) seen.insert(dev->kind);
    return {seen.begin(), seen.end()};
}

Device& Testbed::roadm(int node) {
    const std::string id = "roadm" + std::to_string(node);
    auto it = devices_.find(id);
    if (it == devices_.end() || it->second->kind != DeviceKind::roadm) {
        throw ToolError(errc::param_out_of_range,
                        "no ROADM node " + std::to_string(node) + " in this testbed");
    }
    return *it->second;
}

Device& Testbed::cfp2_by_port(const std::string& port_name) {
    std::string available;
    for (auto& [id, dev] : devices_) {
        if (dev->kind != DeviceKind::cfp2) continue;
        const auto& st = dev->as<Cfp2Device>();
        if (st.port_name == port_name) return *dev;
        if (!available.empty()) available += ", ";
        available += st.port_name;
    }
    throw ToolError(errc::param_out_of_range,
                    "unknown CFP2 port '" + port_name + "' (available: " + available + ")");
}

namespace {

constexpr double kCfp2ChannelWidthGhz = 50.0;
constexpr double kArofChannelWidthGhz = 10.0;

void emit_transmitter(const Device& dev, std::vector<ChannelSignal>& channels) {
    switch (dev.kind) {
        case DeviceKind::cfp2: {
            const auto& st = dev.as<Cfp2Device>();
            if (!st.enabled) return;
            ChannelSignal ch;
            const double c = st.center_ghz();
            ch.range = {c - kCfp2ChannelWidthGhz / 2, c + kCfp2ChannelWidthGhz / 2};
            ch.origin = dev.id;
            ch.power_dbm = st.target_tx_power_dbm;
            ch.modulation = cfp2_mode_modulation(st.mode);
            channels.push_back(ch);
            break;
        }
        case DeviceKind::arof: {
            const auto& st = dev.as<ArofDevice>();
            if (!st.state.enabled) return;
            ChannelSignal ch;
            ch.range = {st.carrier_ghz - kArofChannelWidthGhz / 2,
                        st.carrier_ghz + kArofChannelWidthGhz / 2};
            ch.origin = dev.id;
            // The EAM sits in the carrier path: its static transfer at the
            // bias point attenuates the launched optical power.
            const double t = st.eam.transfer(st.state.bias_voltage_v);
            ch.power_dbm = st.tx_power_dbm + linear_to_db(std::max(t, 1e-6));
            channels.push_back(ch);
            break;
        }
        case DeviceKind::ase_comb: {
            const auto& st = dev.as<AseCombDevice>();
            for (const auto& r : st.channels) {
                ChannelSignal ch;
                ch.range = r;
                ch.origin = dev.id;
                ch.power_dbm = st.per_channel_dbm;
                channels.push_back(ch);
            }
            break;
        }
        default:
            throw ToolError(errc::config_invalid,
                            "device '" + dev.id + "' cannot act as a transmitter");
    }
}

Spectrum render_spectrum(const OsaDevice& osa, const std::vector<ChannelSignal>& channels) {
    Spectrum s;
    s.start_nm = osa.start_nm;
    s.stop_nm = osa.stop_nm;
    const int n = std::max(osa.sweep_points, 2);
    s.points.reserve(static_cast<size_t>(n));
    const double step = (osa.stop_nm - osa.start_nm) / (n - 1);
    for (int i = 0; i < n; ++i) {
        const double wl = osa.start_nm + step * i;
        const double f = nm_to_ghz(wl);
        double mw = 0.0;
        for (const auto& ch : channels) {
            if (ch.range.contains(f)) mw += dbm_to_mw(ch.power_dbm);
        }
        const double p = mw > 0.0 ? std::max(mw_to_dbm(mw), kNoiseFloorDbm) : kNoiseFloorDbm;
        s.points.push_back({wl, p});
    }
    return s;
}

}  // namespace

PropagationResult Testbed::propagate() const {
    std::unique_lock snapshot(*snapshot_mutex_);
    return propagate_unlocked();
}

PropagationResult Testbed::propagate_unlocked() const {
    PropagationResult result;
    std::vector<ChannelSignal> channels;
    std::optional<std::vector<ChannelSignal>> tapped;

    for (const auto& e : topology_.elements) {
        switch (e.kind) {
            case Element::Kind::transmitter:
                emit_transmitter(device(e.device_id), channels);
                break;

            case Element::Kind::wss: {
                const auto& st = device(e.device_id).as<RoadmState>();
                result.wss_inputs[e.device_id + ":" + to_string(e.side)] = channels;
                std::vector<ChannelSignal> passed;
                for (auto ch : channels) {
                    for (const auto& conn : st.connections) {
                        if (conn.side != e.side) continue;
                        if (!conn.range.contains(ch.range.center_ghz())) continue;
                        ch.power_dbm -= conn.attenuation_db;
                        passed.push_back(ch);
                        break;
                    }
                }
                channels = std::move(passed);
                break;
            }

            case Element::Kind::edfa: {
                const auto& st = device(e.device_id).as<RoadmState>().edfa(e.module);
                if (!st.enabled || channels.empty()) break;
                double total_mw = 0.0;
                for (const auto& ch : channels) total_mw += dbm_to_mw(ch.power_dbm);
                const double gain = st.gain_for_input(mw_to_dbm(total_mw));
                for (auto& ch : channels) {
                    ch.inv_osnr_linear += 1.0 / db_to_linear(st.stage_osnr_db(ch.power_dbm));
                    ch.power_dbm += gain;
                }
                break;
            }

            case Element::Kind::fiber_span: {
                const double loss = e.length_km * e.loss_db_per_km;
                for (auto& ch : channels) {
                    if (nli_eta_ > 0.0) {
                        const double p_mw = dbm_to_mw(ch.power_dbm);
                        ch.nli_ratio += nli_eta_ * p_mw * p_mw;
                    }
                    ch.power_dbm -= loss;
                }
                break;
            }

            case Element::Kind::tap: {
                auto copy = channels;
                for (auto& ch : copy) ch.power_dbm -= e.tap_ratio_db;
                tapped = std::move(copy);
                break;
            }

            case Element::Kind::osa: {
                const auto& st = device(e.device_id).as<OsaDevice>();
                const auto& seen = tapped ? *tapped : channels;
                result.osa_spectra[e.device_id] = render_spectrum(st, seen);
                result.osa_channels[e.device_id] = seen;
                tapped.reset();
                break;
            }

            case Element::Kind::receiver: {
                const auto& dev = device(e.device_id);
                if (dev.kind != DeviceKind::cfp2) {
                    throw ToolError(errc::config_invalid,
                                    "receiver element must reference a cfp2 device");
                }
                const auto& st = dev.as<Cfp2Device>();
                const double tuned = st.center_ghz();
                const ChannelSignal* found = nullptr;
                for (const auto& ch : channels) {
                    if (ch.range.contains(tuned)) {
                        found = &ch;
                        break;
                    }
                }
                if (found == nullptr) {
                    result.unrouted.push_back(e.device_id);
                    break;
                }
                ChannelMetrics m;
                m.channel = found->range;
                m.rx_power_dbm = found->power_dbm;
                const double inv_osnr = std::max(found->inv_osnr_linear, 1e-20);
                m.osnr_db = linear_to_db(1.0 / inv_osnr);
                const double inv_gsnr = inv_osnr + found->nli_ratio;
                m.gsnr_db = linear_to_db(1.0 / inv_gsnr);
                const double p_rx_mw = dbm_to_mw(found->power_dbm);
                m.nli_power_dbm = found->nli_ratio > 0.0
                                      ? mw_to_dbm(found->nli_ratio * p_rx_mw)
                                      : -200.0;
                m.pre_fec_ber =
                    ber_from_snr_linear(1.0 / inv_gsnr, cfp2_mode_modulation(st.mode));
                result.endpoint_metrics[e.device_id] = m;
                break;
            }
        }
    }
    return result;
}

json Testbed::fingerprint() const {
    json j = json::object();
    for (const auto& [id, dev] : devices_) {
        std::shared_lock lk(dev->mutex);
        j[id] = device_state_to_json(*dev);
    }
    return j;
}

}  // namespace optctl::sim
