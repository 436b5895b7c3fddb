#pragma once

#include <string>

#include "optctl/sim/ber.hpp"
#include "optctl/sim/error.hpp"

namespace optctl::sim {

inline constexpr double kArofBiasMinV = -3.0;
inline constexpr double kArofBiasMaxV = 0.0;
inline constexpr double kArofCurrentMinMa = 0.0;
inline constexpr double kArofCurrentMaxMa = 120.0;

// Controllable state of the EAM-based analog transmitter.
struct ArofTxState {
    double bias_voltage_v = -0.9;   // [-3, 0]
    double drive_current_ma = 0.0;  // [0, 120]
    bool enabled = true;

    void validate() const;
};

// Static electro-absorption transfer curve T(V) = 0.5*(1 + tanh((V - v0)/vw)).
// The bias optimum of the analog link sits at v0, where the slope is maximal
// and the curvature (the distortion source) vanishes.
struct EamModel {
    double v0 = -0.9;
    double vw = 0.5;

    double transfer(double v) const;
    double slope(double v) const;      // dT/dV
    double curvature(double v) const;  // d2T/dV2
};

struct ArofLinkMetrics {
    double snr_db = 0.0;
    double evm_pct = 0.0;
    double ber = 0.5;
};

// Analytic RF link quality for the EAM transmitter: signal scales with
// (dT/dV * I)^2, noise is a fixed floor plus (d2T/dV2)^2 distortion, and the
// fiber run costs 2*0.2 dB/km of electrical SNR after detection.
ArofLinkMetrics arof_link_metrics(const ArofTxState& state, Modulation modulation,
                                  double fiber_km, const EamModel& eam = {});

}  // namespace optctl::sim
