#include "optctl/ctrl/polarization_stab.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "optctl/sim/error.hpp"

namespace optctl::ctrl {

namespace {

json expect_ok(const tools::ToolResult& r, const std::string& what) {
    if (!r.ok()) {
        throw ToolError(r.error_code, what + " failed: " + r.error_message);
    }
    return r.payload;
}

struct Reading {
    sim::StokesState s;
    double psi_deg;
    double chi_deg;
};

Reading read_sop(tools::ToolClient& client) {
    const json p = expect_ok(client.call("pod_read_polarization", json::object()),
                             "pod_read_polarization");
    Reading r;
    r.s.s = {p.at("s1").get<double>(), p.at("s2").get<double>(), p.at("s3").get<double>()};
    r.s.dop = p.value("dop", 1.0);
    r.psi_deg = p.at("psi_deg").get<double>();
    r.chi_deg = p.at("chi_deg").get<double>();
    return r;
}

void set_code(tools::ToolClient& client, int channel, int code) {
    expect_ok(client.call("pcd_set_dac_code", {{"channel", channel}, {"code", code}}),
              "pcd_set_dac_code");
}

}  // namespace

json StabilizationTrace::to_json() const {
    json iters = json::array();
    for (const auto& it : iterations) {
        iters.push_back(json{{"codes", it.codes},
                             {"voltages", it.voltages},
                             {"psi_deg", it.psi_deg},
                             {"chi_deg", it.chi_deg},
                             {"angular_error_deg", it.angular_error_deg}});
    }
    return json{{"iterations", iters},
                {"converged", converged},
                {"iteration_count", iteration_count},
                {"avg_iteration_time_s", avg_iteration_time_s}};
}

StabilizationTrace stabilize_polarization(tools::ToolClient& client,
                                          const StabilizeOptions& options) {
    const auto started = std::chrono::steady_clock::now();
    const sim::StokesState target =
        sim::angles_to_stokes({options.target_psi_deg, options.target_chi_deg});

    StabilizationTrace trace;
    std::array<int, 4> codes{2048, 2048, 2048, 2048};

    // The driver may not sit at the assumed initialization; set it explicitly.
    for (int ch = 1; ch <= 4; ++ch) set_code(client, ch, codes[static_cast<size_t>(ch - 1)]);

    int shrink_delta = 0;  // 0: use the stage default
    bool was_fine_stage = false;

    for (int iter = 0; iter < options.max_iterations; ++iter) {
        const Reading now = read_sop(client);
        const double error = sim::stokes_angle_deg(now.s, target);

        StabilizeIteration rec;
        rec.codes = codes;
        for (int k = 0; k < 4; ++k) {
            rec.voltages[static_cast<size_t>(k)] =
                sim::PiezoState::code_to_volts(codes[static_cast<size_t>(k)]);
        }
        rec.psi_deg = now.psi_deg;
        rec.chi_deg = now.chi_deg;
        rec.angular_error_deg = error;
        trace.iterations.push_back(rec);

        if (error < options.threshold_deg) {
            trace.converged = true;
            break;
        }

        const bool fine_stage = error < options.stage_switch_deg;
        if (fine_stage != was_fine_stage) {
            shrink_delta = 0;  // stage change resets the probe size
            was_fine_stage = fine_stage;
        }
        const int stage_delta = fine_stage ? options.fine_delta : options.coarse_delta;
        const int delta = shrink_delta > 0 ? shrink_delta : stage_delta;

        // Probe every channel in both directions; the probes are reverted
        // before the winning step is applied for real.
        int best_channel = -1;
        int best_code = 0;
        double best_error = error;
        for (int ch = 0; ch < 4; ++ch) {
            const int base = codes[static_cast<size_t>(ch)];
            for (int dir : {+1, -1}) {
                const int probe = std::clamp(base + dir * delta, 0, sim::kDacCodeMax);
                if (probe == base) continue;
                set_code(client, ch + 1, probe);
                const Reading probed = read_sop(client);
                set_code(client, ch + 1, base);
                const double probe_error = sim::stokes_angle_deg(probed.s, target);
                if (probe_error < best_error) {
                    best_error = probe_error;
                    best_channel = ch;
                    best_code = probe;
                }
            }
        }

        trace.iteration_count++;
        if (best_channel >= 0) {
            codes[static_cast<size_t>(best_channel)] = best_code;
            set_code(client, best_channel + 1, best_code);
        } else {
            shrink_delta = std::max(delta / 2, 1);
        }
    }

    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    trace.avg_iteration_time_s =
        trace.iteration_count > 0 ? elapsed / trace.iteration_count : elapsed;

    // Hitting max_iterations leaves converged=false; the trace is returned
    // either way so callers can inspect the path taken.
    return trace;
}

}  // namespace optctl::ctrl
