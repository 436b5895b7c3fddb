#include "optctl/sim/arof.hpp"

#include <cmath>

#include "optctl/sim/units.hpp"

namespace optctl::sim {

namespace {
// Noise floor and distortion weight calibrated so the default plant peaks
// near 25 dB SNR at 99 mA over 10 km and keeps QPSK BER representable.
constexpr double kNoiseFloor = 12.34;
constexpr double kDistortionWeight = 30.0;
constexpr double kFiberLossDbPerKm = 0.2;
}  // namespace

void ArofTxState::validate() const {
    if (bias_voltage_v < kArofBiasMinV || bias_voltage_v > kArofBiasMaxV) {
        throw ToolError(errc::param_out_of_range,
                        "ARoF bias voltage must be in [-3, 0] V, got " +
                            std::to_string(bias_voltage_v));
    }
    if (drive_current_ma < kArofCurrentMinMa || drive_current_ma > kArofCurrentMaxMa) {
        throw ToolError(errc::param_out_of_range,
                        "ARoF drive current must be in [0, 120] mA, got " +
                            std::to_string(drive_current_ma));
    }
}

double EamModel::transfer(double v) const { return 0.5 * (1.0 + std::tanh((v - v0) / vw)); }

double EamModel::slope(double v) const {
    const double s = 1.0 / std::cosh((v - v0) / vw);
    return 0.5 / vw * s * s;
}

double EamModel::curvature(double v) const {
    const double u = (v - v0) / vw;
    const double s = 1.0 / std::cosh(u);
    return -1.0 / (vw * vw) * s * s * std::tanh(u);
}

ArofLinkMetrics arof_link_metrics(const ArofTxState& state, Modulation modulation,
                                  double fiber_km, const EamModel& eam) {
    if (!state.enabled) {
        throw ToolError(errc::output_disabled, "ARoF transmitter output is disabled");
    }
    if (state.drive_current_ma <= 0.0) {
        throw ToolError(errc::output_disabled, "ARoF drive current is zero; no RF signal");
    }
    state.validate();

    const double slope = eam.slope(state.bias_voltage_v);
    const double curv = eam.curvature(state.bias_voltage_v);
    const double signal = slope * slope * state.drive_current_ma * state.drive_current_ma;
    const double noise = kNoiseFloor + kDistortionWeight * curv * curv;

    // Square-law detection doubles the optical loss in the electrical domain.
    const double snr_db = linear_to_db(signal / noise) - 2.0 * kFiberLossDbPerKm * fiber_km;
    const double snr_lin = db_to_linear(snr_db);

    ArofLinkMetrics m;
    m.snr_db = snr_db;
    m.evm_pct = 100.0 / std::sqrt(snr_lin);
    m.ber = ber_from_snr_linear(snr_lin, modulation);
    return m;
}

}  // namespace optctl::sim
