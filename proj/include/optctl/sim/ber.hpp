#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "optctl/sim/error.hpp"
#include "optctl/sim/units.hpp"

namespace optctl::sim {

enum class Modulation { qpsk, qam16, qam64 };

// Relative SNR requirement per modulation in the Q-factor formula. Only the
// monotone ordering matters for the control loops.
inline double kmod(Modulation m) {
    switch (m) {
        case Modulation::qpsk: return 1.0;
        case Modulation::qam16: return 5.0;
        case Modulation::qam64: return 21.0;
    }
    return 1.0;
}

inline Modulation modulation_from_string(const std::string& s) {
    if (s == "qpsk" || s == "QPSK") return Modulation::qpsk;
    if (s == "16qam" || s == "qam16" || s == "16QAM") return Modulation::qam16;
    if (s == "64qam" || s == "qam64" || s == "64QAM") return Modulation::qam64;
    throw ToolError(errc::param_out_of_range,
                    "unknown modulation '" + s + "' (expected QPSK, 16QAM or 64QAM)");
}

inline std::string to_string(Modulation m) {
    switch (m) {
        case Modulation::qpsk: return "QPSK";
        case Modulation::qam16: return "16QAM";
        case Modulation::qam64: return "64QAM";
    }
    return "QPSK";
}

// Pre-FEC BER from a linear SNR: 0.5*erfc(sqrt(snr/K)/sqrt(2)). Clamped to
// 1e-300 so the value stays positive when erfc underflows at very high SNR.
inline double ber_from_snr_linear(double snr_linear, Modulation m) {
    if (snr_linear <= 0.0) return 0.5;
    const double x = std::sqrt(snr_linear / kmod(m)) / std::sqrt(2.0);
    return std::max(0.5 * std::erfc(x), 1e-300);
}

inline double ber_from_snr_db(double snr_db, Modulation m) {
    return ber_from_snr_linear(db_to_linear(snr_db), m);
}

}  // namespace optctl::sim
