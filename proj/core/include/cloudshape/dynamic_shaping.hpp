/// \file dynamic_shaping.hpp
/// Scattering-force cloud shaping: a parabolic-core beam propagating along z
/// pushes resonant atoms out of the imaged volume during a short
/// illumination window framed by two free-flight phases, with gravity along
/// -y throughout.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cloudshape/cloud.hpp"
#include "cloudshape/constants.hpp"
#include "cloudshape/vortex_field.hpp"

namespace cloudshape {

/// Driven two-level atom: decay rate, rest-frame detuning, saturation
/// intensity, photon wavevector, and mass.
struct TwoLevelParams {
    double gamma = rb87::gamma_d2;    ///< decay rate [rad/s]
    double delta = 0.0;               ///< detuning [rad/s]
    double i_sat = 70.45454545454545; ///< saturation intensity [W/m^2]
    Vec3 k_vec{0.0, 0.0, rb87::k_d2}; ///< photon wavevector [rad/m]
    double atom_mass = rb87::mass;    ///< [kg]
};

/// One shaping sequence: beam shape and power, phase timings, gravity.
/// The local saturation parameter is S = (1/2) beta0 P u^2 with u the
/// transverse offset along `axis` when set (two-lobe beam) or the full
/// transverse radius when not (funnel beam), clamped at smax_per_watt * P
/// where the true profile rolls over (0 disables the clamp).
struct DynamicRun {
    double beta0 = 2.2e11;  ///< saturation curvature per power [W^-1 m^-2]
    std::optional<double> axis = 1.5707963267948966;  ///< lobe axis [rad]
    double smax_per_watt = 0.0;  ///< saturation clamp per power [1/W]
    double power = 0.0;          ///< beam power [W]
    double tau1 = 1.2e-3;        ///< free flight before the light [s]
    double tau_ill = 35e-6;      ///< illumination window [s]
    double tau2 = 565e-6;        ///< free flight after the light [s]
    double gravity = constants::g_earth;  ///< magnitude along -y [m/s^2]
    int threads = 0;             ///< worker threads; 0 = hardware concurrency
};

/// Clamped saturation parameter of the run's beam at transverse position
/// (x, y).
double saturation_at(const DynamicRun& run, double x, double y);

/// Photon scattering rate (gamma/2) S / (1 + S + 4 delta_eff^2 / gamma^2)
/// with delta_eff = delta + k . v. [1/s]
double scattering_rate(const TwoLevelParams& p, double intensity,
                       const Vec3& velocity);

/// Mean radiation-pressure force hbar k_vec times the scattering rate. [N]
Vec3 scattering_force(const TwoLevelParams& p, double intensity,
                      const Vec3& velocity);

/// Runs the free-flight / illumination / free-flight sequence for every
/// atom of the ensemble and returns the final phase-space states with
/// Doppler visibility weights assigned from the acquired velocity.
std::vector<Atom> simulate_dynamic(const std::vector<Atom>& ensemble,
                                   const DynamicRun& run,
                                   const TwoLevelParams& p);

/// Advances a single atom through the three phases; no weight assignment.
Atom propagate_atom_dynamic(const Atom& atom, const DynamicRun& run,
                            const TwoLevelParams& p);

/// Time-stamped phase-space samples of one atom's trajectory.
struct TrajectorySample {
    double t = 0.0;
    Vec3 r;
    Vec3 v;
};

/// Trajectory of one atom sampled at n_samples uniform times across the
/// whole sequence (endpoints included).
std::vector<TrajectorySample> trace_atom_dynamic(const Atom& atom,
                                                 const DynamicRun& run,
                                                 const TwoLevelParams& p,
                                                 int n_samples);

/// Detection visibility of a moving atom imaged along an axis tilted from z
/// by imaging_angle in the x-z plane: Lorentzian factor
/// 1 / (1 + 4 delta_D^2 / gamma^2) with delta_D the first-order Doppler
/// shift of the projected velocity.
double doppler_visibility(const Vec3& velocity,
                          double imaging_angle = 0.6108652381980153,
                          double gamma = rb87::gamma_d2);

/// Visibility-weighted number of atoms inside |y| < half_width divided by
/// the total atom count.
double weighted_slab_fraction(const std::vector<Atom>& atoms,
                              double half_width);

/// Fills in the beam-shape entries of a run description from the analytic
/// optics model: places the beam so its curvature per power equals alpha0,
/// sets beta0 = alpha0 / i_sat and the saturation clamp from the profile
/// peak in that plane.
void configure_beam_from_model(DynamicRun& run, const VortexBeamModel& model,
                               double alpha0, double i_sat);

}  // namespace cloudshape
