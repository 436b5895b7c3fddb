#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "optctl/sim/error.hpp"

namespace optctl::sim {

enum class DasScenario { stable, agitation, cut };

inline std::string to_string(DasScenario s) {
    switch (s) {
        case DasScenario::stable: return "stable";
        case DasScenario::agitation: return "agitation";
        case DasScenario::cut: return "cut";
    }
    return "stable";
}
inline DasScenario das_scenario_from_string(const std::string& s) {
    if (s == "stable") return DasScenario::stable;
    if (s == "agitation") return DasScenario::agitation;
    if (s == "cut") return DasScenario::cut;
    throw ToolError(errc::param_out_of_range, "scenario must be stable, agitation or cut");
}

// Time x distance vibration intensity matrix from the fiber interrogator.
// Row-major, rows = time samples, cols = distance bins.
struct Waterfall {
    int rows = 0;
    int cols = 0;
    std::vector<double> intensity;  // rows * cols, non-negative
    double dt_s = 0.1;              // seconds per row
    double dx_m = 10.0;             // meters per column

    double at(int r, int c) const { return intensity[static_cast<size_t>(r) * cols + c]; }
    double& at(int r, int c) { return intensity[static_cast<size_t>(r) * cols + c]; }
    void validate() const;
};

// Deterministic scenario synthesizer (fixed generator, portable across
// platforms for a given seed). Noise floor mean 5.0, sigma 1.0; agitation adds
// 2-5 full-width rows at +10 sigma; cut adds >=3 persistent column streaks at
// a location d0 and drops post-onset intensity beyond d0 to 0.25x.
Waterfall synthesize_waterfall(DasScenario scenario, std::uint32_t seed, int rows, int cols);

}  // namespace optctl::sim
