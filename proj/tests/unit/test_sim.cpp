#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "optctl/sim/arof.hpp"
#include "optctl/sim/ber.hpp"
#include "optctl/sim/edfa.hpp"
#include "optctl/sim/polarization.hpp"
#include "optctl/sim/testbed.hpp"
#include "optctl/sim/waterfall.hpp"
#include "optctl/sim/wss.hpp"

using namespace optctl;
using namespace optctl::sim;

namespace {

std::string fixture(const std::string& name) { return std::string(OPTCTL_FIXTURES) + "/" + name; }

// Portable uniform double in [0,1) from a seeded engine.
double uniform(std::mt19937& rng) { return (rng() + 0.5) / 4294967296.0; }

StokesState random_unit_stokes(std::mt19937& rng) {
    // Uniform on the sphere via z/phi.
    const double z = 2.0 * uniform(rng) - 1.0;
    const double phi = 2.0 * 3.14159265358979323846 * uniform(rng);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    StokesState s;
    s.s = {r * std::cos(phi), r * std::sin(phi), z};
    return s;
}

}  // namespace

TEST_CASE("frequency/wavelength conversion round-trips the C-band") {
    CHECK(ghz_to_nm(193500.0) == doctest::Approx(1549.315).epsilon(1e-4));
    CHECK(ghz_to_nm(194300.0) == doctest::Approx(1542.937).epsilon(1e-4));
    CHECK(nm_to_ghz(ghz_to_nm(195500.0)) == doctest::Approx(195500.0).epsilon(1e-12));
}

TEST_CASE("wss_route applies attenuation in range and blocks outside") {
    WssConnection c;
    c.id = 1;
    c.side = WssSide::mux;
    c.port = 1;
    c.range = {193900.0, 194450.0};
    c.attenuation_db = 19.5;

    std::map<int, Spectrum> inputs;
    inputs[1] = Spectrum::flat(1528.0, 1568.0, 2001, -10.0);
    const Spectrum out = wss_route({c}, inputs);

    bool saw_in_range = false, saw_blocked = false;
    for (const auto& p : out.points) {
        const double f = nm_to_ghz(p.wavelength_nm);
        if (c.range.contains(f)) {
            CHECK(p.power_dbm == doctest::Approx(-29.5));
            saw_in_range = true;
        } else {
            CHECK(p.power_dbm == doctest::Approx(kNoiseFloorDbm));
            saw_blocked = true;
        }
    }
    CHECK(saw_in_range);
    CHECK(saw_blocked);
}

TEST_CASE("wss_route with no connections blocks everything") {
    std::map<int, Spectrum> inputs;
    inputs[1] = Spectrum::flat(1528.0, 1568.0, 501, -3.0);
    const Spectrum out = wss_route({}, inputs);
    for (const auto& p : out.points) CHECK(p.power_dbm == doctest::Approx(kNoiseFloorDbm));
}

TEST_CASE("wss overlap on one side is rejected") {
    WssConnection a;
    a.id = 1;
    a.side = WssSide::mux;
    a.port = 1;
    a.range = {193400.0, 193700.0};
    a.attenuation_db = 5.0;
    WssConnection b = a;
    b.id = 2;
    b.range = {193600.0, 193900.0};

    CHECK_THROWS_WITH_AS(check_wss_overlap({a}, b), doctest::Contains("overlaps"), ToolError);

    // Same range on the other side is fine.
    b.side = WssSide::demux;
    CHECK_NOTHROW(check_wss_overlap({a}, b));
}

TEST_CASE("wss conservation: output never exceeds input per bin") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        WssConnection c;
        c.id = 1;
        c.side = WssSide::mux;
        c.port = 1;
        const double lo = 190500.0 + 5000.0 * uniform(rng);
        c.range = {lo, lo + 100.0 + 800.0 * uniform(rng)};
        c.attenuation_db = 25.0 * uniform(rng);

        std::map<int, Spectrum> inputs;
        inputs[1] = Spectrum::flat(1528.0, 1568.0, 401, -40.0 + 35.0 * uniform(rng));
        const Spectrum out = wss_route({c}, inputs);
        for (size_t i = 0; i < out.points.size(); ++i) {
            CHECK(out.points[i].power_dbm <= inputs[1].points[i].power_dbm + 1e-12);
        }
    }
}

TEST_CASE("edfa_apply constant gain and stage OSNR") {
    EdfaState e;
    e.target_gain_db = 15.0;
    e.noise_figure_db = 5.0;

    const Spectrum in = Spectrum::flat(1540.0, 1550.0, 101, -20.0);
    const auto [out, ase_psd] = edfa_apply(e, in);
    for (const auto& p : out.points) CHECK(p.power_dbm == doctest::Approx(-5.0));

    // Per-channel stage OSNR at -20 dBm input: -20 + 58 - 5 = 33 dB.
    CHECK(e.stage_osnr_db(-20.0) == doctest::Approx(33.0));
    // ASE PSD consistent with that OSNR at the output power.
    CHECK(-5.0 - ase_psd == doctest::Approx(33.0));
}

TEST_CASE("edfa_apply identity at zero gain") {
    EdfaState e;
    e.target_gain_db = 0.0;
    const Spectrum in = Spectrum::flat(1540.0, 1550.0, 11, -7.5);
    const auto [out, ase] = edfa_apply(e, in);
    for (size_t i = 0; i < in.points.size(); ++i) {
        CHECK(out.points[i].power_dbm == doctest::Approx(in.points[i].power_dbm));
    }
}

TEST_CASE("edfa gain bounds") {
    EdfaState e;
    e.target_gain_db = 35.0;
    CHECK_THROWS_AS(edfa_apply(e, Spectrum::flat(1540, 1550, 11, -10)), ToolError);
    e.target_gain_db = 15.0;
    e.enabled = false;
    CHECK_THROWS_AS(edfa_apply(e, Spectrum::flat(1540, 1550, 11, -10)), ToolError);
}

TEST_CASE("edfa constant power computes the equalizing gain") {
    EdfaState e;
    e.mode = EdfaMode::constant_power;
    e.target_power_dbm = 3.0;
    const Spectrum in = Spectrum::flat(1540.0, 1550.0, 3, -10.0);
    // Total input: 3 x 0.1 mW = -5.23 dBm; required gain ~ 8.23 dB.
    const auto [out, ase] = edfa_apply(e, in);
    CHECK(out.total_power_dbm() == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("osnr cascade: two identical 33 dB stages combine to 29.99 dB") {
    const double inv = 2.0 / db_to_linear(33.0);
    CHECK(linear_to_db(1.0 / inv) == doctest::Approx(29.99).epsilon(1e-3));
}

TEST_CASE("ber is strictly decreasing in snr and within (0, 0.5]") {
    for (const auto mod : {Modulation::qpsk, Modulation::qam16, Modulation::qam64}) {
        double prev = 1.0;
        for (double snr_db = -5.0; snr_db <= 25.0; snr_db += 0.5) {
            const double ber = ber_from_snr_db(snr_db, mod);
            CHECK(ber > 0.0);
            CHECK(ber <= 0.5);
            CHECK(ber < prev);
            prev = ber;
        }
    }
    // Modulation ordering at a fixed SNR.
    const double snr = db_to_linear(15.0);
    CHECK(ber_from_snr_linear(snr, Modulation::qpsk) <
          ber_from_snr_linear(snr, Modulation::qam16));
    CHECK(ber_from_snr_linear(snr, Modulation::qam16) <
          ber_from_snr_linear(snr, Modulation::qam64));
}

TEST_CASE("arof metrics peak exactly at the EAM inflection bias") {
    ArofTxState st;
    st.drive_current_ma = 99.0;

    st.bias_voltage_v = -0.9;
    const auto at_peak = arof_link_metrics(st, Modulation::qam16, 10.0);

    // Fine brute-force sweep: nothing beats the inflection point.
    double best_snr = -1e9, best_bias = 0.0;
    for (double v = -1.5; v <= 0.0 + 1e-12; v += 0.001) {
        ArofTxState probe = st;
        probe.bias_voltage_v = v;
        const auto m = arof_link_metrics(probe, Modulation::qam16, 10.0);
        if (m.snr_db > best_snr) {
            best_snr = m.snr_db;
            best_bias = v;
        }
    }
    CHECK(std::abs(best_bias - (-0.9)) < 1e-6);
    CHECK(at_peak.snr_db == doctest::Approx(best_snr).epsilon(1e-9));

    // First-order symmetry about the optimum.
    ArofTxState lo = st, hi = st;
    lo.bias_voltage_v = -0.9 - 0.05;
    hi.bias_voltage_v = -0.9 + 0.05;
    const auto m_lo = arof_link_metrics(lo, Modulation::qam16, 10.0);
    const auto m_hi = arof_link_metrics(hi, Modulation::qam16, 10.0);
    CHECK(m_lo.snr_db == doctest::Approx(m_hi.snr_db).epsilon(1e-6));
}

TEST_CASE("arof errors when disabled or undriven") {
    ArofTxState st;
    st.enabled = false;
    st.drive_current_ma = 99.0;
    CHECK_THROWS_AS(arof_link_metrics(st, Modulation::qpsk, 10.0), ToolError);
    st.enabled = true;
    st.drive_current_ma = 0.0;
    CHECK_THROWS_AS(arof_link_metrics(st, Modulation::qpsk, 10.0), ToolError);
}

TEST_CASE("dac voltage mapping is exact") {
    CHECK(PiezoState::code_to_volts(4095) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(PiezoState::code_to_volts(0) == 0.0);
    // 5/4095 V = 1.221 mV step, 1.22 mV to three significant figures.
    CHECK(PiezoState::code_to_volts(1) * 1000.0 == doctest::Approx(1.221).epsilon(1e-3));
}

TEST_CASE("piezo rotations preserve the unit norm") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        const StokesState in = random_unit_stokes(rng);
        PiezoState p;
        for (auto& c : p.codes) c = static_cast<int>(rng() % 4096);
        const StokesState out = sop_from_piezo(in, p);
        CHECK(std::abs(out.norm() - 1.0) < 1e-9);
    }
}

TEST_CASE("piezo mid-scale codes rotate by (almost) nothing") {
    StokesState in;
    in.s = {0.0, 1.0, 0.0};
    PiezoState p;  // defaults to 2048 everywhere
    const StokesState out = sop_from_piezo(in, p);
    // code 2048 is 0.61 mV above exact mid-scale; four such rotations stay tiny.
    CHECK(stokes_angle_deg(in, out) < 4.0 * (360.0 / 5.0) * (2048.0 * 5.0 / 4095.0 - 2.5));
    CHECK(stokes_angle_deg(in, out) < 0.2);
}

TEST_CASE("piezo channel 2 rotates S1 onto -S3 at a quarter turn") {
    // theta = pi/2 about S2 requires V = 2.5 + 5/4 = 3.75 V -> code 3071.25;
    // use the exact voltage through a synthetic state instead.
    StokesState in;
    in.s = {1.0, 0.0, 0.0};
    const Mat3 r = rotation_about_basis_axis(1, 3.14159265358979323846 / 2.0);
    const StokesState out = mat3_apply(r, in);
    CHECK(out.s[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(out.s[1] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(out.s[2] == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("stokes angles: poles, axes, and the paper's operating point") {
    StokesState s1;
    s1.s = {1.0, 0.0, 0.0};
    auto a = stokes_to_angles(s1);
    CHECK(a.psi_deg == doctest::Approx(0.0));
    CHECK(a.chi_deg == doctest::Approx(0.0));

    StokesState pole;
    pole.s = {0.0, 0.0, 1.0};
    CHECK(stokes_to_angles(pole).chi_deg == doctest::Approx(45.0));

    const StokesState st = angles_to_stokes({-47.0, 8.0});
    CHECK(st.s[0] == doctest::Approx(-0.0671).epsilon(1e-2));
    CHECK(st.s[1] == doctest::Approx(-0.9589).epsilon(1e-3));
    CHECK(st.s[2] == doctest::Approx(0.2756).epsilon(1e-3));
}

TEST_CASE("angle round-trip is the identity on 1000 random unit vectors") {
    std::mt19937 rng(23);
    for (int trial = 0; trial < 1000; ++trial) {
        const StokesState s = random_unit_stokes(rng);
        const StokesState back = angles_to_stokes(stokes_to_angles(s));
        for (int k = 0; k < 3; ++k) CHECK(std::abs(back.s[k] - s.s[k]) < 1e-9);
    }
}

TEST_CASE("waterfall synthesizer: deterministic, shaped, classed") {
    const auto w1 = synthesize_waterfall(DasScenario::cut, 5, 96, 96);
    const auto w2 = synthesize_waterfall(DasScenario::cut, 5, 96, 96);
    CHECK(w1.intensity == w2.intensity);
    CHECK_THROWS_AS(synthesize_waterfall(DasScenario::stable, 1, 10, 96), ToolError);

    // Stable: over 100 seeds, no row mean exceeds the noise mean + 4 sigma.
    for (std::uint32_t seed = 1; seed <= 100; ++seed) {
        const auto w = synthesize_waterfall(DasScenario::stable, seed, 64, 64);
        double total = 0.0;
        for (double v : w.intensity) total += v;
        const double mean = total / w.intensity.size();
        for (int r = 0; r < w.rows; ++r) {
            double row = 0.0;
            for (int c = 0; c < w.cols; ++c) row += w.at(r, c);
            CHECK(row / w.cols < mean + 4.0);
        }
    }

    // Cut: the region beyond the cut dims to at most 0.5x after onset.
    for (std::uint32_t seed = 1; seed <= 20; ++seed) {
        const auto w = synthesize_waterfall(DasScenario::cut, seed, 96, 96);
        // Find the onset/cut from the matrix itself: brightest column run.
        int d0 = -1, t0 = -1;
        for (int c = 0; c < w.cols && d0 < 0; ++c) {
            for (int r = 0; r < w.rows; ++r) {
                if (w.at(r, c) > 10.0) {
                    d0 = c;
                    t0 = r;
                    break;
                }
            }
        }
        REQUIRE(d0 >= 0);
        double pre = 0.0, post = 0.0;
        long pre_n = 0, post_n = 0;
        for (int r = 0; r < w.rows; ++r) {
            for (int c = d0 + 6; c < w.cols; ++c) {
                if (r < t0) {
                    pre += w.at(r, c);
                    pre_n++;
                } else {
                    post += w.at(r, c);
                    post_n++;
                }
            }
        }
        REQUIRE(pre_n > 0);
        REQUIRE(post_n > 0);
        CHECK((post / post_n) / (pre / pre_n) <= 0.5);
    }
}

TEST_CASE("propagate: case1 fixture walk") {
    Testbed tb = Testbed::from_file(fixture("case1.json"));

    // Before provisioning nothing is routed.
    auto before = tb.propagate();
    CHECK(before.endpoint_metrics.empty());
    CHECK(before.unrouted.size() == 1);
    CHECK_THROWS_AS(before.metrics_for("cfp2-1"), ToolError);

    // Provision directly at the device level.
    auto& roadm1 = tb.device("roadm1").as<RoadmState>();
    roadm1.connections.push_back(
        {1, "ARoF", WssSide::mux, 1, {193900.0, 194450.0}, 19.5});
    roadm1.connections.push_back({2, "CFP2", WssSide::mux, 20, {193400.0, 193700.0}, 5.0});
    auto& roadm2 = tb.device("roadm2").as<RoadmState>();
    roadm2.connections.push_back({1, "ARoF", WssSide::demux, 1, {193900.0, 194450.0}, 5.0});
    roadm2.connections.push_back({2, "CFP2", WssSide::demux, 20, {193400.0, 193700.0}, 5.0});
    auto& cfp2 = tb.device("cfp2-1").as<Cfp2Device>();
    cfp2.center_frequency_mhz = 193500000.0;
    auto& arof = tb.device("arof1").as<ArofDevice>();
    arof.state.drive_current_ma = 99.0;
    arof.state.bias_voltage_v = -0.9;
    auto& osa = tb.device("osa1").as<OsaDevice>();
    osa.start_nm = 1540.0;
    osa.stop_nm = 1550.0;

    const auto result = tb.propagate();
    const auto& m = result.metrics_for("cfp2-1");

    // Straight-line evaluation of the same chain: booster stage at -10 dBm
    // input, preamp stage at +4 dBm input, NF 5 dB everywhere.
    const double inv = 1.0 / db_to_linear(-10.0 + 58.0 - 5.0) + 1.0 / db_to_linear(4.0 + 58.0 - 5.0);
    const double expected_osnr = linear_to_db(1.0 / inv);
    CHECK(m.osnr_db == doctest::Approx(expected_osnr).epsilon(1e-9));
    CHECK(m.gsnr_db <= m.osnr_db);
    CHECK(m.rx_power_dbm == doctest::Approx(-5.0 - 5.0 + 18.0 - 4.0 + 10.0 - 5.0));
    CHECK(m.pre_fec_ber > 0.0);
    CHECK(m.pre_fec_ber <= 0.5);

    // The OSA sees exactly the two provisioned channels in its window.
    const auto& spectrum = result.osa_spectra.at("osa1");
    int peaks = 0;
    bool in_peak = false;
    for (const auto& p : spectrum.points) {
        const bool hot = p.power_dbm > kNoiseFloorDbm + 10.0;
        if (hot && !in_peak) peaks++;
        in_peak = hot;
    }
    CHECK(peaks == 2);
}

TEST_CASE("propagate: appending an amplified stage never raises end-to-end OSNR") {
    // Build a chain incrementally and watch the receiver OSNR.
    json config = {
        {"name", "cascade"},
        {"devices",
         {{{"id", "roadm1"},
           {"kind", "roadm"},
           {"booster", {{"gain_db", 10}, {"noise_figure_db", 5}}},
           {"preamp", {{"gain_db", 10}, {"noise_figure_db", 5}}},
           {"connections",
            {{{"id", 1}, {"name", "all"}, {"side", "mux"}, {"port", 1},
              {"start_ghz", 193400}, {"end_ghz", 193700}, {"attenuation_db", 5}}}}},
          {{"id", "cfp2-1"}, {"kind", "cfp2"}, {"port_name", "cfp2-opt-1-1"},
           {"center_frequency_mhz", 193500000}, {"target_tx_power_dbm", -5}}}},
        {"elements", json::array()}};

    double previous_osnr = 1e9;
    json elements = json::array();
    elements.push_back({{"type", "transmitter"}, {"device", "cfp2-1"}});
    elements.push_back({{"type", "wss"}, {"device", "roadm1"}, {"side", "mux"}});
    for (int stages = 1; stages <= 6; ++stages) {
        elements.push_back({{"type", "edfa"}, {"device", "roadm1"}, {"module", "booster"}});
        elements.push_back({{"type", "fiber_span"}, {"length_km", 50}, {"loss_db_per_km", 0.2}});
        json cfg = config;
        cfg["elements"] = elements;
        cfg["elements"].push_back({{"type", "receiver"}, {"device", "cfp2-1"}});
        Testbed tb = Testbed::from_json(cfg);
        const double osnr = tb.propagate().metrics_for("cfp2-1").osnr_db;
        CHECK(osnr < previous_osnr);
        previous_osnr = osnr;
    }
}

TEST_CASE("launch-power unimodality on the calibrated two-span topology") {
    Testbed tb = Testbed::from_file(fixture("case3.json"));
    auto& roadm2 = tb.device("roadm2").as<RoadmState>();
    roadm2.connections.push_back({30, "new", WssSide::demux, 1, {195450.0, 195550.0}, 10.0});
    auto& cfp2 = tb.device("cfp2-1").as<Cfp2Device>();

    double best_power = 0.0, best_gsnr = -1e9;
    double prev_gsnr = -1e9;
    int direction_changes = 0;
    for (double p = -15.0; p <= 0.0 + 1e-9; p += 0.1) {
        cfp2.target_tx_power_dbm = p;
        const double gsnr = tb.propagate().metrics_for("cfp2-1").gsnr_db;
        if (gsnr > best_gsnr) {
            best_gsnr = gsnr;
            best_power = p;
        }
        if (prev_gsnr > -1e8 && gsnr < prev_gsnr - 1e-12 &&
            direction_changes == 0) {
            direction_changes = 1;  // passed the single maximum
        } else if (direction_changes == 1) {
            CHECK(gsnr < prev_gsnr + 1e-12);  // never rises again
        }
        prev_gsnr = gsnr;
    }
    // Calibration target: brute-force optimum at -4 dBm within 1 dB.
    CHECK(std::abs(best_power - (-4.0)) <= 1.0);
}
