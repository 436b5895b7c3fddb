#include "optctl/sim/waterfall.hpp"

#include <cmath>
#include <random>

namespace optctl::sim {

namespace {

constexpr double kNoiseMean = 5.0;
constexpr double kNoiseSigma = 1.0;
constexpr double kEventAmplitude = kNoiseMean + 10.0 * kNoiseSigma;
constexpr double kPostCutFactor = 0.25;

// Portable gaussian: explicit Box-Muller over mt19937 draws, so a seed
// produces the same matrix on every platform (std::normal_distribution is
// implementation-defined).
class Gaussian {
public:
    explicit Gaussian(std::uint32_t seed) : rng_(seed) {}

    double operator()() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 1e-12) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    std::uint32_t raw() { return rng_(); }
    int uniform_int(int lo, int hi) {  // inclusive bounds
        return lo + static_cast<int>(rng_() % static_cast<std::uint32_t>(hi - lo + 1));
    }

private:
    double uniform() { return (rng_() + 0.5) / 4294967296.0; }

    std::mt19937 rng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace

void Waterfall::validate() const {
    if (rows < 1 || cols < 1 ||
        intensity.size() != static_cast<size_t>(rows) * static_cast<size_t>(cols)) {
        throw ToolError(errc::invalid_shape, "waterfall shape does not match its data");
    }
    for (double v : intensity) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw ToolError(errc::invalid_shape, "waterfall intensity must be finite and >= 0");
        }
    }
}

Waterfall synthesize_waterfall(DasScenario scenario, std::uint32_t seed, int rows, int cols) {
    if (rows < 64 || cols < 64) {
        throw ToolError(errc::invalid_shape, "waterfall requires rows >= 64 and cols >= 64");
    }

    Gaussian g(seed ^ 0x9e3779b9u);
    Waterfall w;
    w.rows = rows;
    w.cols = cols;
    w.intensity.resize(static_cast<size_t>(rows) * cols);

    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            w.at(r, c) = std::max(0.0, kNoiseMean + kNoiseSigma * g());
        }
    }

    if (scenario == DasScenario::agitation) {
        const int n_lines = g.uniform_int(2, 5);
        // Keep event rows away from the last quarter so no column develops a
        // persistent hot suffix.
        for (int i = 0; i < n_lines; ++i) {
            const int r = g.uniform_int(2, 3 * rows / 4);
            for (int c = 0; c < cols; ++c) {
                w.at(r, c) = kEventAmplitude + 0.2 * g();
            }
        }
    } else if (scenario == DasScenario::cut) {
        const int onset = g.uniform_int(rows / 4, rows / 2);
        const int d0 = g.uniform_int(cols / 3, 2 * cols / 3);
        const int n_streaks = g.uniform_int(3, 5);
        for (int i = 0; i < n_streaks; ++i) {
            const int c = d0 + i;
            for (int r = onset; r < rows; ++r) {
                w.at(r, c) = kEventAmplitude + 0.2 * g();
            }
        }
        // Power discontinuity: everything beyond the cut goes dark after onset.
        for (int r = onset; r < rows; ++r) {
            for (int c = d0 + n_streaks; c < cols; ++c) {
                w.at(r, c) *= kPostCutFactor;
            }
        }
    }

    w.validate();
    return w;
}

}  // namespace optctl::sim
