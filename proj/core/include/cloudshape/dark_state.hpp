/// \file dark_state.hpp
/// Optical pumping into a dark hyperfine level: effective pumping rate,
/// analytic population evolution, the full three-level rate-equation
/// reference, and the shaped density and width laws that follow.

#pragma once

#include <array>
#include <vector>

#include "cloudshape/cloud.hpp"
#include "cloudshape/constants.hpp"

namespace cloudshape {

/// Three-level atom: bright ground level coupled to the light, excited
/// level decaying at gamma1 into the dark ground level and at gamma2 back
/// into the bright one.
struct ThreeLevelParams {
    double gamma1 = 2.0 * 3.14159265358979323846 * 3.0e6;  ///< [rad/s]
    double gamma2 = rb87::gamma_d2 - 2.0 * 3.14159265358979323846 * 3.0e6;
    double delta = 0.0;   ///< detuning [rad/s]
    double i_sat = 163.0; ///< saturation intensity [W/m^2]

    double gamma() const { return gamma1 + gamma2; }
};

/// One pumping pulse: power, duration, and the transverse curvature of the
/// beam intensity per power.
struct DarkPulse {
    double power = 0.0;     ///< [W]
    double tau_ill = 0.0;   ///< [s]
    double alpha0 = 1.2e13; ///< intensity curvature per power [m^-4]

    double energy() const { return power * tau_ill; }  ///< [J]
};

/// Populations ordered (dark ground, bright ground, excited).
using Populations = std::array<double, 3>;

/// Saturation parameter rescaled by the detuning Lorentzian,
/// S~ = S / (1 + 4 delta^2 / gamma^2).
double effective_saturation(const ThreeLevelParams& p, double intensity);

/// Quasi-steady relative population of the excited level within the driven
/// pair, rho~ = (S/2) / (1 + S + 4 delta^2 / gamma^2), in [0, 1/2).
double relative_population(const ThreeLevelParams& p, double intensity);

/// Effective one-way pumping rate into the dark level,
/// gamma_eff = gamma1 * rho~. [1/s]
double gamma_eff(const ThreeLevelParams& p, double intensity);

/// Exponential-decay solution starting from the bright ground level:
/// rho11 = 1 - exp(-gamma_eff t), rho22 = (1 - rho~) exp(-gamma_eff t),
/// rho_ee = rho~ exp(-gamma_eff t). Sums to one exactly.
Populations populations_analytic(const ThreeLevelParams& p, double intensity,
                                 double t);

/// Reference solution of the full rate equations
///   d rho_ee/dt = R (rho22 - rho_ee) - gamma rho_ee,
///   d rho22/dt  = -R (rho22 - rho_ee) + gamma2 rho_ee,
///   d rho11/dt  = gamma1 rho_ee,
/// with pump rate R = (gamma/2) S~ and initial state (0, 1, 0).
Populations full_rate_equations(const ThreeLevelParams& p, double intensity,
                                double t);

/// Local beam intensity of the funnel-shaped pulse at transverse radius
/// rho: (1/2) alpha0 P rho^2. [W/m^2]
double pulse_intensity(const DarkPulse& pulse, double x, double y);

/// Curvature per power of the saturation parameter at the detuned
/// transition, beta0~ = alpha0 / (i_sat (1 + 4 delta^2 / gamma^2)).
/// [W^-1 m^-2]
double beta0_tilde(const DarkPulse& pulse, const ThreeLevelParams& p);

/// Cloud density remaining bright after the pulse at point r. The exact
/// form multiplies the initial Gaussian by exp(-gamma_eff(r) tau_ill); the
/// approximate form uses the low-saturation Gaussian-product closed form.
/// [atoms/m^3]
double shaped_density(const CloudParams& spec, const DarkPulse& pulse,
                      const ThreeLevelParams& p, const Vec3& r,
                      bool exact = true);

/// Width of the pumped hole alone: sigma_s = ((gamma1/2) beta0~ E)^(-1/2).
/// [m]
double sigma_s(double gamma1, double beta0_tilde_value, double e_ill);

/// Width of one cloud axis after the pulse: 1/sigma^2 = 1/sigma_s^2 +
/// 1/sigma0^2, approaching sigma0 as the pulse energy vanishes. [m]
double shaped_width(double sigma0, double gamma1, double beta0_tilde_value,
                    double e_ill);

/// Same width law with beta0~ derived from the pulse and atom parameters.
double shaped_width(double sigma0, const DarkPulse& pulse,
                    const ThreeLevelParams& p);

/// Width law with an empirical detuning response: the saturation curvature
/// is suppressed by 1 + (2 c (delta - delta0) / gamma)^2. Even about
/// delta0. [m]
double width_vs_detuning(double delta, double sigma0, double e_ill,
                         double beta0, double gamma1, double gamma, double c,
                         double delta0);

/// Applies the pulse to every atom at its current position: populations set
/// from the analytic solution, detection weight multiplied by the remaining
/// bright fraction.
void pump_ensemble(std::vector<Atom>& atoms, const DarkPulse& pulse,
                   const ThreeLevelParams& p);

}  // namespace cloudshape
