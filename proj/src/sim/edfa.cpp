#include "optctl/sim/edfa.hpp"

namespace optctl::sim {

void EdfaState::validate() const {
    if (target_gain_db < kEdfaMinGainDb || target_gain_db > kEdfaMaxGainDb) {
        throw ToolError(errc::gain_out_of_range,
                        "EDFA gain must be in [0, 30] dB, got " + std::to_string(target_gain_db));
    }
    if (noise_figure_db < 4.0 || noise_figure_db > 7.0) {
        throw ToolError(errc::param_out_of_range,
                        "EDFA noise figure must be in [4, 7] dB, got " +
                            std::to_string(noise_figure_db));
    }
}

double EdfaState::gain_for_input(double total_input_dbm) const {
    double g = target_gain_db;
    if (mode == EdfaMode::constant_power) {
        g = target_power_dbm - total_input_dbm;
        if (g < kEdfaMinGainDb || g > kEdfaMaxGainDb) {
            throw ToolError(errc::gain_out_of_range,
                            "constant-power mode requires a gain of " + std::to_string(g) +
                                " dB, outside [0, 30] dB");
        }
    }
    return g;
}

std::pair<Spectrum, double> edfa_apply(const EdfaState& state, const Spectrum& input) {
    if (!state.enabled) {
        throw ToolError(errc::edfa_disabled, "EDFA is disabled");
    }
    state.validate();
    const double gain = state.gain_for_input(input.total_power_dbm());

    Spectrum out = input;
    for (auto& p : out.points) p.power_dbm += gain;

    // ASE PSD the stage adds at its output, per 0.1 nm.
    const double ase_psd_dbm = state.noise_figure_db + gain - kOsnrReferenceDb;
    return {out, ase_psd_dbm};
}

}  // namespace optctl::sim
