#pragma once

#include <array>
#include <cstdint>

#include "optctl/sim/error.hpp"

namespace optctl::sim {

inline constexpr int kPiezoChannels = 4;
inline constexpr int kDacCodeMax = 4095;
inline constexpr double kDacFullScaleV = 5.0;

// State of polarization as a unit Stokes vector (S1, S2, S3).
struct StokesState {
    std::array<double, 3> s{1.0, 0.0, 0.0};
    double dop = 1.0;

    double norm() const;
    void validate() const;  // unit norm within 1e-9
};

// Azimuth/ellipticity parameterization of the Poincare sphere, in degrees.
// psi in (-90, 90], chi in [-45, 45].
struct PolarizationAngles {
    double psi_deg = 0.0;
    double chi_deg = 0.0;
};

PolarizationAngles stokes_to_angles(const StokesState& s);
StokesState angles_to_stokes(const PolarizationAngles& a);

// Great-circle angle between two Stokes vectors, degrees.
double stokes_angle_deg(const StokesState& a, const StokesState& b);

// 12-bit DAC codes of the four-channel piezo driver.
struct PiezoState {
    std::array<int, 4> codes{2048, 2048, 2048, 2048};

    void validate() const;  // each code in [0, 4095]
    // Exact DAC mapping: code * 5/4095 volts.
    static double code_to_volts(int code) { return code * kDacFullScaleV / kDacCodeMax; }
    std::array<double, 4> voltages() const;
};

// Applies the four piezo squeezer rotations to an input Stokes vector.
// Channel k (1-based) rotates about S1 for odd k and S2 for even k, by
// theta_k = (2*pi/5) * (V_k - 2.5) rad, right-handed, channel 1 applied first.
StokesState sop_from_piezo(const StokesState& input, const PiezoState& piezo);

// 3x3 rotation matrices used by the polarization plant.
using Mat3 = std::array<std::array<double, 3>, 3>;

Mat3 mat3_identity();
Mat3 mat3_mul(const Mat3& a, const Mat3& b);
StokesState mat3_apply(const Mat3& m, const StokesState& v);
// Right-handed rotation about an arbitrary unit axis.
Mat3 rotation_about_axis(const std::array<double, 3>& axis, double angle_rad);
// Rotation about the Stokes basis axis (0 -> S1, 1 -> S2, 2 -> S3).
Mat3 rotation_about_basis_axis(int axis_index, double angle_rad);

}  // namespace optctl::sim
