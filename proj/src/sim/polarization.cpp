#include "optctl/sim/polarization.hpp"

#include <algorithm>
#include <cmath>

namespace optctl::sim {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kRadPerVolt = 2.0 * kPi / 5.0;
constexpr double kMidScaleV = 2.5;

double deg2rad(double d) { return d * kPi / 180.0; }
double rad2deg(double r) { return r * 180.0 / kPi; }
}  // namespace

double StokesState::norm() const {
    return std::sqrt(s[0] * s[0] + s[1] * s[1] + s[2] * s[2]);
}

void StokesState::validate() const {
    if (std::abs(norm() - 1.0) > 1e-9) {
        throw ToolError(errc::param_out_of_range, "Stokes vector must be unit norm");
    }
}

PolarizationAngles stokes_to_angles(const StokesState& st) {
    PolarizationAngles a;
    a.psi_deg = 0.5 * rad2deg(std::atan2(st.s[1], st.s[0]));
    if (a.psi_deg <= -90.0) a.psi_deg += 180.0;  // fold atan2(-0,-1) onto +90
    const double s3 = std::clamp(st.s[2], -1.0, 1.0);
    a.chi_deg = 0.5 * rad2deg(std::asin(s3));
    return a;
}

StokesState angles_to_stokes(const PolarizationAngles& a) {
    const double two_psi = deg2rad(2.0 * a.psi_deg);
    const double two_chi = deg2rad(2.0 * a.chi_deg);
    StokesState st;
    st.s = {std::cos(two_chi) * std::cos(two_psi), std::cos(two_chi) * std::sin(two_psi),
            std::sin(two_chi)};
    st.dop = 1.0;
    return st;
}

double stokes_angle_deg(const StokesState& a, const StokesState& b) {
    const double dot = a.s[0] * b.s[0] + a.s[1] * b.s[1] + a.s[2] * b.s[2];
    return rad2deg(std::acos(std::clamp(dot, -1.0, 1.0)));
}

void PiezoState::validate() const {
    for (int c : codes) {
        if (c < 0 || c > kDacCodeMax) {
            throw ToolError(errc::code_out_of_range,
                            "DAC code must be in [0, 4095], got " + std::to_string(c));
        }
    }
}

std::array<double, 4> PiezoState::voltages() const {
    std::array<double, 4> v{};
    for (int k = 0; k < 4; ++k) v[k] = code_to_volts(codes[k]);
    return v;
}

Mat3 mat3_identity() {
    return {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
}

Mat3 mat3_mul(const Mat3& a, const Mat3& b) {
    Mat3 r{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double acc = 0.0;
            for (int k = 0; k < 3; ++k) acc += a[i][k] * b[k][j];
            r[i][j] = acc;
        }
    return r;
}

StokesState mat3_apply(const Mat3& m, const StokesState& v) {
    StokesState out = v;
    for (int i = 0; i < 3; ++i) {
        out.s[i] = m[i][0] * v.s[0] + m[i][1] * v.s[1] + m[i][2] * v.s[2];
    }
    return out;
}

Mat3 rotation_about_axis(const std::array<double, 3>& axis, double angle_rad) {
    const double c = std::cos(angle_rad);
    const double s = std::sin(angle_rad);
    const double t = 1.0 - c;
    const double x = axis[0], y = axis[1], z = axis[2];
    return {{{t * x * x + c, t * x * y - s * z, t * x * z + s * y},
             {t * x * y + s * z, t * y * y + c, t * y * z - s * x},
             {t * x * z - s * y, t * y * z + s * x, t * z * z + c}}};
}

Mat3 rotation_about_basis_axis(int axis_index, double angle_rad) {
    std::array<double, 3> axis{0.0, 0.0, 0.0};
    axis[static_cast<size_t>(axis_index)] = 1.0;
    return rotation_about_axis(axis, angle_rad);
}

StokesState sop_from_piezo(const StokesState& input, const PiezoState& piezo) {
    piezo.validate();
    StokesState s = input;
    for (int k = 0; k < kPiezoChannels; ++k) {
        const double theta = kRadPerVolt * (PiezoState::code_to_volts(piezo.codes[k]) - kMidScaleV);
        const int axis = (k % 2 == 0) ? 0 : 1;  // channels 1,3 about S1; 2,4 about S2
        s = mat3_apply(rotation_about_basis_axis(axis, theta), s);
    }
    s.dop = input.dop;
    return s;
}

}  // namespace optctl::sim
