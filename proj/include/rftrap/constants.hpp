#pragma once

#include <numbers>

namespace rftrap {

// CODATA 2018, SI.
namespace constants {
inline constexpr double elementary_charge = 1.602176634e-19;   // C
inline constexpr double boltzmann = 1.380649e-23;              // J/K
inline constexpr double vacuum_permittivity = 8.8541878128e-12; // F/m
inline constexpr double atomic_mass_unit = 1.66053906660e-27;  // kg
inline constexpr double pi = std::numbers::pi;
}  // namespace constants

// Experimentalist units to SI. Conversion happens once, at construction.
namespace units {
inline constexpr double cm(double v) { return v * 1e-2; }
inline constexpr double mm(double v) { return v * 1e-3; }
inline constexpr double um(double v) { return v * 1e-6; }
inline constexpr double per_mm(double v) { return v * 1e3; }
// Ordinary frequency in MHz to angular frequency in rad/s.
inline constexpr double mhz_to_angular(double f_mhz) {
  return 2.0 * constants::pi * f_mhz * 1e6;
}
inline constexpr double angular_to_hz(double omega) {
  return omega / (2.0 * constants::pi);
}
}  // namespace units

}  // namespace rftrap
