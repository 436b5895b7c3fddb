#pragma once

#include <cmath>

namespace optctl::sim {

inline constexpr double kSpeedOfLightMps = 299792458.0;

// C-band window accepted by every frequency-carrying parameter (GHz).
inline constexpr double kCBandLoGhz = 190000.0;
inline constexpr double kCBandHiGhz = 197000.0;

// Instrument noise floor used when a frequency bin carries no signal.
inline constexpr double kNoiseFloorDbm = -60.0;

// 10*log10(h*nu*B_0.1nm) at 1550 nm is about -58 dBm; the per-stage OSNR
// bookkeeping uses the rounded engineering constant.
inline constexpr double kOsnrReferenceDb = 58.0;

// c[m/s] / f[GHz] = wavelength in nm, and symmetrically back.
inline double ghz_to_nm(double f_ghz) { return kSpeedOfLightMps / f_ghz; }
inline double nm_to_ghz(double wl_nm) { return kSpeedOfLightMps / wl_nm; }

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
inline double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }

}  // namespace optctl::sim
