#pragma once

#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include <json.hpp>

#include "optctl/sim/devices.hpp"
#include "optctl/sim/topology.hpp"

namespace optctl::sim {

// Per-channel quality at a receiver endpoint.
struct ChannelMetrics {
    FrequencyRange channel;
    double rx_power_dbm = 0.0;
    double osnr_db = 0.0;      // 0.1 nm reference
    double nli_power_dbm = 0.0;
    double gsnr_db = 0.0;
    double pre_fec_ber = 0.5;
};

// A lightpath tracked through the element walk.
struct ChannelSignal {
    FrequencyRange range;
    std::string origin;  // transmitter device id
    double power_dbm = 0.0;
    double inv_osnr_linear = 0.0;  // sum of 1/OSNR_stage
    double nli_ratio = 0.0;        // accumulated P_nli/P_ch (linear)
    Modulation modulation = Modulation::qam16;
};

struct PropagationResult {
    std::map<std::string, ChannelMetrics> endpoint_metrics;          // receiver device -> metrics
    std::map<std::string, Spectrum> osa_spectra;                     // osa device -> trace
    std::map<std::string, std::vector<ChannelSignal>> osa_channels;  // channels at the OSA tap
    std::map<std::string, std::vector<ChannelSignal>> wss_inputs;    // "device:side" -> input channels
    std::vector<std::string> unrouted;                               // receivers with no channel

    // Metrics for one endpoint; throws UnroutedChannel when the receiver's
    // tuned channel was blocked upstream.
    const ChannelMetrics& metrics_for(const std::string& device_id) const;

    // Input power (dBm) summed over channels falling inside `range` at the
    // given WSS input, or noise floor when none.
    double wss_input_power_dbm(const std::string& device_id, WssSide side,
                               const FrequencyRange& range) const;
};

// The composed simulated plant: all devices plus the link topology.
// Mutations are serialized per device; propagate() takes a snapshot lock so it
// observes a consistent state of all devices.
class Testbed {
public:
    Testbed() : snapshot_mutex_(std::make_unique<std::shared_mutex>()) {}
    Testbed(const Testbed&) = delete;
    Testbed& operator=(const Testbed&) = delete;
    Testbed(Testbed&&) = default;
    Testbed& operator=(Testbed&&) = default;

    static Testbed from_json(const json& config);
    static Testbed from_file(const std::string& path);

    const std::string& name() const { return name_; }
    double nli_eta_per_mw2() const { return nli_eta_; }
    const Topology& topology() const { return topology_; }

    Device& device(const std::string& id);
    const Device& device(const std::string& id) const;
    bool has_device(const std::string& id) const { return devices_.count(id) > 0; }
    Device* find_first_of_kind(DeviceKind kind);
    const Device* find_first_of_kind(DeviceKind kind) const;
    std::vector<std::string> device_ids() const;
    std::vector<DeviceKind> present_kinds() const;

    // Roadm instance for a `node` argument (1-based): "roadm<node>".
    Device& roadm(int node);
    // CFP2 instance matching a transceiver port name.
    Device& cfp2_by_port(const std::string& port_name);

    // Consistent end-to-end evaluation of the current state.
    PropagationResult propagate() const;
    // Variant for callers that already hold the snapshot lock.
    PropagationResult propagate_unlocked() const;

    // Serialized state of every device, for atomicity and determinism checks.
    json fingerprint() const;

    std::shared_mutex& snapshot_mutex() const { return *snapshot_mutex_; }

private:
    std::string name_;
    double nli_eta_ = 0.0;  // per-span NLI coefficient, mW^-2
    Topology topology_;
    std::map<std::string, std::unique_ptr<Device>> devices_;
    mutable std::unique_ptr<std::shared_mutex> snapshot_mutex_;
};

}  // namespace optctl::sim
