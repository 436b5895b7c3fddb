#include "optctl/sim/wss.hpp"

namespace optctl::sim {

void WssConnection::validate() const {
    if (port < 1 || port > kWssPortCount) {
        throw ToolError(errc::invalid_port,
                        "WSS port must be in [1, 20], got " + std::to_string(port));
    }
    if (attenuation_db < 0.0 || attenuation_db > kWssMaxAttenuationDb) {
        throw ToolError(errc::param_out_of_range,
                        "WSS attenuation must be in [0, 25] dB, got " +
                            std::to_string(attenuation_db));
    }
    range.validate();
}

void check_wss_overlap(const std::vector<WssConnection>& existing, const WssConnection& conn) {
    for (const auto& e : existing) {
        if (e.side != conn.side) continue;
        if (e.range.overlaps(conn.range)) {
            throw ToolError(errc::overlapping_connection,
                            "connection range [" + std::to_string(conn.range.f_lo_ghz) + ", " +
                                std::to_string(conn.range.f_hi_ghz) + "] GHz overlaps connection " +
                                std::to_string(e.id) + " on the " + to_string(conn.side) + " side");
        }
    }
}

Spectrum wss_route(const std::vector<WssConnection>& connections,
                   const std::map<int, Spectrum>& input_spectra) {
    for (size_t i = 0; i < connections.size(); ++i) {
        connections[i].validate();
        std::vector<WssConnection> before(connections.begin(), connections.begin() + i);
        check_wss_overlap(before, connections[i]);
    }

    // All inputs share one grid; take it from the first.
    const Spectrum* grid = nullptr;
    for (const auto& [port, spec] : input_spectra) {
        spec.validate();
        if (grid == nullptr) grid = &spec;
    }
    if (grid == nullptr) {
        // Nothing connected upstream: a default blocked grid.
        return Spectrum::flat(1528.0, 1578.0, 2001, kNoiseFloorDbm);
    }

    Spectrum out;
    out.start_nm = grid->start_nm;
    out.stop_nm = grid->stop_nm;
    out.points.reserve(grid->points.size());
    for (size_t i = 0; i < grid->points.size(); ++i) {
        const double wl = grid->points[i].wavelength_nm;
        const double f_ghz = nm_to_ghz(wl);
        double power = kNoiseFloorDbm;
        for (const auto& c : connections) {
            if (!c.range.contains(f_ghz)) continue;
            auto it = input_spectra.find(c.port);
            if (it == input_spectra.end()) break;  // port not driven: stays blocked
            power = it->second.points[i].power_dbm - c.attenuation_db;
            break;  // non-overlap invariant: at most one connection matches
        }
        out.points.push_back({wl, power});
    }
    return out;
}

}  // namespace optctl::sim
