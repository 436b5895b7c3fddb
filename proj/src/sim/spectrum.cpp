#include "optctl/sim/spectrum.hpp"

#include <cmath>

namespace optctl::sim {

void FrequencyRange::validate() const {
    if (!(f_lo_ghz < f_hi_ghz)) {
        throw ToolError(errc::param_out_of_range,
                        "frequency range must satisfy f_lo < f_hi, got [" +
                            std::to_string(f_lo_ghz) + ", " + std::to_string(f_hi_ghz) + "] GHz");
    }
    if (f_lo_ghz < kCBandLoGhz || f_hi_ghz > kCBandHiGhz) {
        throw ToolError(errc::param_out_of_range,
                        "frequency range must lie within the C-band window [190000, 197000] GHz");
    }
}

void Spectrum::validate() const {
    if (!(start_nm < stop_nm)) {
        throw ToolError(errc::param_out_of_range, "spectrum start must be below stop");
    }
    for (size_t i = 1; i < points.size(); ++i) {
        if (!(points[i - 1].wavelength_nm < points[i].wavelength_nm)) {
            throw ToolError(errc::param_out_of_range,
                            "spectrum wavelengths must be strictly increasing");
        }
    }
}

double Spectrum::total_power_dbm() const {
    double mw = 0.0;
    for (const auto& p : points) mw += dbm_to_mw(p.power_dbm);
    if (mw <= 0.0) return kNoiseFloorDbm;
    return mw_to_dbm(mw);
}

Spectrum Spectrum::flat(double start_nm, double stop_nm, int n_points, double power_dbm) {
    Spectrum s;
    s.start_nm = start_nm;
    s.stop_nm = stop_nm;
    s.points.reserve(static_cast<size_t>(n_points));
    const double step = (n_points > 1) ? (stop_nm - start_nm) / (n_points - 1) : 0.0;
    for (int i = 0; i < n_points; ++i) {
        s.points.push_back({start_nm + step * i, power_dbm});
    }
    return s;
}

}  // namespace optctl::sim
