/// \file vortex_field.hpp
/// Analytic propagation of a Gaussian beam through a vortex half-wave
/// retarder: closed-form transverse field, small-radius curvature of the
/// intensity core, peak intensity, and the parabolic core model used by the
/// shaping simulations.

#pragma once

#include <complex>
#include <optional>

#include "cloudshape/gaussian_beam.hpp"
#include "cloudshape/jones.hpp"

namespace cloudshape {

/// Gaussian beam plus vortex retarder, with an optional linear polarizer
/// downstream. Angles in radians, lengths in m.
struct VortexBeamModel {
    GaussianBeam beam;
    VortexRetarder plate;
    /// Transmission-axis angle of an optional polarizer after the plate,
    /// measured from x toward y. Without it the output stays vectorial.
    std::optional<double> polarizer_axis;
};

/// Scalar radial amplitude E~(rho, z) of the propagated vortex mode, such
/// that the full field is E~ * (cos m*phi, sin m*phi) for x-polarized input.
/// Requires z > plate position. [V/m]
complexd vortex_radial_amplitude(const VortexBeamModel& model, double rho,
                                 double z);

/// Full transverse Jones field at cylindrical coordinates (rho, phi, z).
/// At the plate plane this returns the retarder output of the incident
/// Gaussian directly; upstream planes throw UpstreamPlane. The polarizer,
/// if present, is applied to the result.
JonesVector vortex_field_analytic(const VortexBeamModel& model, double rho,
                                  double phi, double z);

/// Intensity |E|^2 at (rho, phi, z). [W/m^2]
double vortex_intensity(const VortexBeamModel& model, double rho, double phi,
                        double z);

/// Curvature alpha of the near-axis intensity I ~ (1/2) alpha rho^2 in the
/// plane z, from the closed-form amplitude. Only charge |m| = 1 has a
/// quadratic core; other charges throw UnsupportedOrder. Exactly linear in
/// the beam power. [W/m^4]
double curvature_analytic(const VortexBeamModel& model, double z);

/// Far-field small-offset approximation of the curvature for a plate at the
/// waist: alpha = pi P / (lambda z w0^2) * (1 + z^2/z0^2)^(-3/2). [W/m^4]
double curvature_simple(const GaussianBeam& beam, double z);

/// Quadratic core intensity model. Without an axis the core is the full
/// funnel (1/2) alpha rho^2; with an axis it is the two-lobe profile
/// (1/2) alpha u^2 where u is the coordinate along that axis.
struct ParabolicCore {
    double alpha = 0.0;                  ///< curvature [W/m^4]
    std::optional<double> axis;          ///< lobe axis angle from x [rad]

    /// Intensity at transverse position (x, y). [W/m^2]
    double operator()(double x, double y) const;
};

/// Core model of the beam at plane z, inheriting the polarizer axis.
ParabolicCore parabolic_core(const VortexBeamModel& model, double z);

/// Maximum of the radial intensity profile |E~(rho, z)|^2 over rho >= 0.
/// For a polarized beam this is the intensity at the lobe center. [W/m^2]
double peak_intensity(const VortexBeamModel& model, double z);

/// Radius where the quadratic core reaches the intensity I_c, i.e.
/// (1/2) alpha rho_c^2 = I_c. Scales as P^(-1/2). [m]
double critical_radius(double alpha, double intensity_c);

}  // namespace cloudshape
