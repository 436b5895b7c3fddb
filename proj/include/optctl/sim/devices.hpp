#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "optctl/sim/arof.hpp"
#include "optctl/sim/edfa.hpp"
#include "optctl/sim/polarization.hpp"
#include "optctl/sim/waterfall.hpp"
#include "optctl/sim/wss.hpp"

namespace optctl::sim {

using nlohmann::json;

enum class DeviceKind { roadm, cfp2, arof, osa, ocs, mems, pod, pcd, ase_comb, laser, das, rfsoc };

std::string to_string(DeviceKind k);
DeviceKind device_kind_from_string(const std::string& s);

// Kinds that carry registered tools (the Table-1 eight).
bool is_core_kind(DeviceKind k);

// ---------------------------------------------------------------------------

struct RoadmState {
    std::vector<WssConnection> connections;  // both sides, non-overlapping per side
    EdfaState booster;
    EdfaState preamp;

    EdfaState& edfa(EdfaModule m) { return m == EdfaModule::booster ? booster : preamp; }
    const EdfaState& edfa(EdfaModule m) const {
        return m == EdfaModule::booster ? booster : preamp;
    }
    std::vector<WssConnection> side_connections(WssSide side) const;
    const WssConnection* find_connection(WssSide side, int id) const;
};

inline constexpr double kCfp2MinPowerDbm = -15.0;
inline constexpr double kCfp2MaxPowerDbm = 0.0;

// Operation modes of the pluggable coherent transceiver; the suffix selects
// the modulation used in BER estimates.
const std::vector<std::string>& cfp2_modes();
Modulation cfp2_mode_modulation(const std::string& mode);

struct Cfp2Device {
    std::string port_name = "cfp2-opt-1-1";
    double center_frequency_mhz = 193500000.0;  // 1 MHz grid
    double target_tx_power_dbm = -5.0;          // [-15, 0]
    std::string mode = "400g-16qam";
    bool enabled = true;

    double center_ghz() const { return center_frequency_mhz / 1000.0; }
};

struct ArofDevice {
    ArofTxState state;
    // Fixed hardware properties of the transmitter.
    double carrier_ghz = 194300.0;
    double tx_power_dbm = -5.0;
    EamModel eam;
};

struct OsaDevice {
    double start_nm = 1540.0;
    double stop_nm = 1550.0;
    int sweep_points = 2001;
    double rbw_nm = 0.1;
    std::string sweep_mode = "single";  // single | repeat
    bool sweep_running = false;
    std::map<int, double> markers;  // marker id -> wavelength nm
    std::vector<std::string> saved_traces;
    std::optional<Spectrum> last_trace;
};

struct OcsDevice {
    int port_count = 320;
    std::map<int, int> connections;  // input port -> output port
};

struct MemsDevice {
    int size = 32;
    std::map<int, int> connections;
};

struct PodDevice {
    double wavelength_nm = 1550.0;
    int averaging = 1;
    std::string source_device;    // laser feeding the fiber under test
    std::string actuator_device;  // piezo driver in the light path
    std::uint32_t plant_seed = 0;  // 0 = identity plant rotation

    // Simulation plumbing (not part of the device configuration).
    struct Perturbation {
        long at_read = 0;
        double angle_deg = 0.0;
        bool applied = false;
    };
    Mat3 plant_rotation = mat3_identity();
    std::vector<Perturbation> perturbations;
    long reads_done = 0;
};

struct PcdDevice {
    PiezoState piezo;
};

struct LaserDevice {
    double wavelength_nm = 1092.0;
    double power_dbm = 0.0;
    StokesState sop;
    bool enabled = true;
};

struct AseCombDevice {
    std::vector<FrequencyRange> channels;
    double per_channel_dbm = -8.0;
};

struct DasDevice {
    DasScenario scenario = DasScenario::stable;
    std::uint32_t seed = 1;
    int rows = 96;
    int cols = 96;
    double fiber_km = 27.4;
    bool monitoring = false;
    double window_s = 10.0;
};

struct RfsocDevice {
    std::string arof_device;  // transmitter under test
    double fiber_km = 10.0;
};

using DeviceState = std::variant<RoadmState, Cfp2Device, ArofDevice, OsaDevice, OcsDevice,
                                 MemsDevice, PodDevice, PcdDevice, LaserDevice, AseCombDevice,
                                 DasDevice, RfsocDevice>;

struct Device {
    std::string id;
    DeviceKind kind = DeviceKind::roadm;
    DeviceState state;
    mutable std::shared_mutex mutex;

    template <typename T>
    T& as() {
        return std::get<T>(state);
    }
    template <typename T>
    const T& as() const {
        return std::get<T>(state);
    }
};

// Configuration snapshot used by get_config payloads and state fingerprints.
// Simulation bookkeeping (plant clock, pending perturbations) is excluded.
json device_state_to_json(const Device& d);

// Builds a device from one `devices[]` entry of a topology file.
std::unique_ptr<Device> device_from_json(const json& spec);

// Deterministic plant rotation for a seed (identity for seed 0).
Mat3 plant_rotation_from_seed(std::uint32_t seed);

}  // namespace optctl::sim
