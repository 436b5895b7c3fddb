#pragma once

#include <map>
#include <string>
#include <vector>

#include "optctl/sim/spectrum.hpp"

namespace optctl::sim {

enum class WssSide { mux, demux };

inline std::string to_string(WssSide s) { return s == WssSide::mux ? "mux" : "demux"; }
inline WssSide wss_side_from_string(const std::string& s) {
    if (s == "mux") return WssSide::mux;
    if (s == "demux") return WssSide::demux;
    throw ToolError(errc::param_out_of_range, "side must be 'mux' or 'demux', got '" + s + "'");
}

inline constexpr int kWssPortCount = 20;
inline constexpr double kWssMaxAttenuationDb = 25.0;

// One passband of a 1x20 wavelength-selective switch.
struct WssConnection {
    int id = 0;
    std::string name;
    WssSide side = WssSide::mux;
    int port = 1;                 // 1..20
    FrequencyRange range;
    double attenuation_db = 0.0;  // [0, 25]

    void validate() const;
};

// Checks the per-side non-overlap invariant of `conn` against `existing`
// (connections on the other side are ignored). Throws OverlappingConnection.
void check_wss_overlap(const std::vector<WssConnection>& existing, const WssConnection& conn);

// Routes per-port input spectra through the given connections of one side:
// in-range bins are copied from the connection's port minus its attenuation,
// bins outside every connection fall to the noise floor. All input spectra
// must share one sampling grid; the output uses that grid.
Spectrum wss_route(const std::vector<WssConnection>& connections,
                   const std::map<int, Spectrum>& input_spectra);

}  // namespace optctl::sim
