#pragma once

#include <string>
#include <vector>

#include "optctl/sim/error.hpp"
#include "optctl/sim/units.hpp"

namespace optctl::sim {

// Closed optical frequency interval in GHz, within the C-band window.
struct FrequencyRange {
    double f_lo_ghz = 0.0;
    double f_hi_ghz = 0.0;

    void validate() const;
    bool contains(double f_ghz) const { return f_ghz >= f_lo_ghz && f_ghz <= f_hi_ghz; }
    bool overlaps(const FrequencyRange& o) const {
        return f_lo_ghz <= o.f_hi_ghz && o.f_lo_ghz <= f_hi_ghz;
    }
    double center_ghz() const { return 0.5 * (f_lo_ghz + f_hi_ghz); }
    double width_ghz() const { return f_hi_ghz - f_lo_ghz; }
};

struct SpectrumPoint {
    double wavelength_nm = 0.0;
    double power_dbm = 0.0;
};

// Sampled optical power trace, wavelengths strictly increasing.
struct Spectrum {
    double start_nm = 0.0;
    double stop_nm = 0.0;
    std::vector<SpectrumPoint> points;

    void validate() const;
    double total_power_dbm() const;

    // Evenly sampled flat trace at `power_dbm` across [start, stop].
    static Spectrum flat(double start_nm, double stop_nm, int n_points, double power_dbm);
};

}  // namespace optctl::sim
