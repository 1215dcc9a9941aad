#pragma once

#include <complex>

namespace rimnull {

using cdouble = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSpeedOfLight = 299792458.0;        // m/s
inline constexpr double kMu0 = 4.0e-7 * kPi;                // H/m
inline constexpr double kEps0 = 8.8541878128e-12;           // F/m

inline constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

// Free-space wave impedance, ~376.73 ohm.
inline double wave_impedance() { return std::sqrt(kMu0 / kEps0); }

}  // namespace rimnull
