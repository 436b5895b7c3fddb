#pragma once

#include <string>
#include <utility>

#include "optctl/sim/spectrum.hpp"

namespace optctl::sim {

enum class EdfaModule { booster, preamp };
enum class EdfaMode { constant_gain, constant_power };

inline std::string to_string(EdfaModule m) { return m == EdfaModule::booster ? "booster" : "preamp"; }
inline EdfaModule edfa_module_from_string(const std::string& s) {
    if (s == "booster") return EdfaModule::booster;
    if (s == "preamp") return EdfaModule::preamp;
    throw ToolError(errc::param_out_of_range, "EDFA module must be 'booster' or 'preamp'");
}
inline std::string to_string(EdfaMode m) {
    return m == EdfaMode::constant_gain ? "constant_gain" : "constant_power";
}
inline EdfaMode edfa_mode_from_string(const std::string& s) {
    if (s == "constant_gain") return EdfaMode::constant_gain;
    if (s == "constant_power") return EdfaMode::constant_power;
    throw ToolError(errc::param_out_of_range, "EDFA mode must be 'constant_gain' or 'constant_power'");
}

inline constexpr double kEdfaMinGainDb = 0.0;
inline constexpr double kEdfaMaxGainDb = 30.0;

struct EdfaState {
    EdfaModule module = EdfaModule::booster;
    EdfaMode mode = EdfaMode::constant_gain;
    double target_gain_db = 15.0;     // [0, 30]
    double target_power_dbm = 3.0;    // total output in constant_power mode
    double noise_figure_db = 5.0;     // [4, 7]
    bool enabled = true;

    void validate() const;

    // Effective gain for the given total input power (dBm).
    double gain_for_input(double total_input_dbm) const;

    // Per-channel stage OSNR (dB, 0.1 nm reference) for a channel entering
    // this amplifier at `channel_in_dbm`.
    double stage_osnr_db(double channel_in_dbm) const {
        return channel_in_dbm + kOsnrReferenceDb - noise_figure_db;
    }
};

// Applies the amplifier to a sampled spectrum. Returns the amplified spectrum
// and the stage ASE power spectral density (dBm per 0.1 nm) at the output.
std::pair<Spectrum, double> edfa_apply(const EdfaState& state, const Spectrum& input);

}  // namespace optctl::sim
