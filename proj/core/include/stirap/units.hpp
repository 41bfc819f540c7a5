#pragma once

#include <numbers>

// Unit conventions used throughout the library:
//   - angular frequencies (Rabi frequencies, detunings, decay and dephasing
//     rates) in rad/s
//   - times in seconds, lengths in meters, temperatures in kelvin
// User-facing layers (scenario files, CLI) speak MHz / kHz (of frequency,
// i.e. omega / 2pi), microseconds and m/s; the conversions below are the
// single place where those factors live.

namespace stirap::units {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * pi;

inline constexpr double boltzmann = 1.380649e-23;        // J/K (exact)
inline constexpr double atomic_mass = 1.66053906660e-27; // kg

constexpr double mhz_to_rad(double f_mhz) { return two_pi * f_mhz * 1e6; }
constexpr double rad_to_mhz(double w) { return w / (two_pi * 1e6); }

constexpr double khz_to_rad(double f_khz) { return two_pi * f_khz * 1e3; }
constexpr double rad_to_khz(double w) { return w / (two_pi * 1e3); }

constexpr double us_to_s(double t_us) { return t_us * 1e-6; }
constexpr double s_to_us(double t_s) { return t_s * 1e6; }

constexpr double nm_to_m(double l_nm) { return l_nm * 1e-9; }
constexpr double mk_to_k(double t_mk) { return t_mk * 1e-3; }

} // namespace stirap::units
