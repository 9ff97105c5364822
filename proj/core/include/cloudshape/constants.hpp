#pragma once

/// \file constants.hpp
/// Physical constants and rubidium-87 D2-line data in SI units, plus the
/// unit conversions used at the configuration boundary. Everything inside
/// the library works in SI (m, s, kg, W, rad); only configuration parsing
/// and report formatting convert to laboratory units.

#include <numbers>

namespace cloudshape {

namespace constants {

inline constexpr double hbar = 1.054571817e-34;     // reduced Planck constant [J s]
inline constexpr double kB = 1.380649e-23;          // Boltzmann constant [J/K]
inline constexpr double g_earth = 9.80665;          // standard gravity [m/s^2]

}  // namespace constants

/// Rubidium-87 D2-line parameters (values from the standard alkali data
/// tables, rounded as commonly quoted).
namespace rb87 {

inline constexpr double mass = 1.44316e-25;           // atomic mass [kg]
inline constexpr double lambda_d2 = 780.241e-9;       // D2 wavelength in vacuum [m]
inline constexpr double gamma_d2 = 2.0 * std::numbers::pi * 6.0666e6;  // natural linewidth [rad/s]
inline constexpr double isat_cycling = 16.7;          // saturation intensity, cycling transition [W/m^2]

/// Wavenumber of the D2 line [rad/m].
inline constexpr double k_d2 = 2.0 * std::numbers::pi / lambda_d2;

/// Single-photon recoil velocity [m/s].
inline constexpr double recoil_velocity = constants::hbar * k_d2 / mass;

}  // namespace rb87

/// Laboratory-unit conversions. Each function name reads source -> SI.
namespace units {

inline constexpr double um_to_m(double v) { return v * 1e-6; }
inline constexpr double mm_to_m(double v) { return v * 1e-3; }
inline constexpr double us_to_s(double v) { return v * 1e-6; }
inline constexpr double ms_to_s(double v) { return v * 1e-3; }
inline constexpr double mW_to_W(double v) { return v * 1e-3; }
inline constexpr double uW_to_W(double v) { return v * 1e-6; }
inline constexpr double nJ_to_J(double v) { return v * 1e-9; }
inline constexpr double uK_to_K(double v) { return v * 1e-6; }

/// Detuning or rate given in MHz (as a frequency) to angular frequency [rad/s].
inline constexpr double MHz_to_rad_s(double v) { return 2.0 * std::numbers::pi * v * 1e6; }

/// Intensity mW/cm^2 -> W/m^2.
inline constexpr double mW_cm2_to_W_m2(double v) { return v * 10.0; }

/// Intensity curvature cm^-4 (with power in mW and length in cm) -> SI
/// curvature per power [m^-4 W^-1], as used in I = 1/2 * alpha0 * P * y^2.
inline constexpr double cm4_curvature_to_si(double v) { return v * 1e8; }

/// Saturation-parameter curvature per power mW^-1 cm^-2 -> SI [W^-1 m^-2],
/// as used in S = 1/2 * beta0 * P * rho^2.
inline constexpr double mW_cm2_beta_to_si(double v) { return v * 1e7; }

inline constexpr double m_to_um(double v) { return v * 1e6; }
inline constexpr double W_m2_to_mW_cm2(double v) { return v / 10.0; }

}  // namespace units

}  // namespace cloudshape
