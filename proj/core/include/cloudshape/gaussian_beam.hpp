#pragma once

/// \file gaussian_beam.hpp
/// Fundamental-mode Gaussian beam: envelope, wavefront curvature phase and
/// Gouy phase, with the power-based amplitude normalization used throughout.

#include <cmath>
#include <complex>
#include <numbers>

namespace cloudshape {

struct GaussianBeam {
  double w0;      // waist radius [m]
  double lambda;  // vacuum wavelength [m]
  double P;       // total beam power [W]
  double E0;      // on-axis field amplitude at the waist, sqrt(2P/(pi w0^2))

  /// Beam from waist, wavelength and power; sets |E0|^2 = 2P/(pi w0^2) so
  /// that the transverse integral of |E|^2 equals P in every plane.
  static GaussianBeam from_power(double w0, double lambda, double P) {
    return {w0, lambda, P, std::sqrt(2.0 * P / (std::numbers::pi * w0 * w0))};
  }

  double k() const { return 2.0 * std::numbers::pi / lambda; }

  /// Rayleigh length pi w0^2 / lambda [m].
  double z0() const { return std::numbers::pi * w0 * w0 / lambda; }

  /// 1/e field radius at distance z from the waist [m].
  double w(double z) const {
    const double zr = z0();
    return w0 * std::sqrt(1.0 + (z / zr) * (z / zr));
  }

  /// Gouy phase arctan(z/z0) [rad].
  double gouy(double z) const { return std::atan(z / z0()); }

  /// Wavefront-curvature phase k rho^2 / (2 R(z)), written as
  /// k rho^2 z / (2 (z^2 + z0^2)) which stays finite at z = 0.
  double curvature_phase(double rho, double z) const {
    const double zr = z0();
    return k() * rho * rho * z / (2.0 * (z * z + zr * zr));
  }

  /// Inverse wavefront radius 1/R(z) = z/(z^2+z0^2) [1/m]; finite at z = 0.
  double inv_radius(double z) const {
    const double zr = z0();
    return z / (z * z + zr * zr);
  }
};

/// Scalar Gaussian field at radial distance rho in the plane z:
/// E0 (w0/w) exp(-rho^2/w^2) exp(i(k z + k rho^2/(2R) - gouy)).
inline std::complex<double> gaussian_field(const GaussianBeam& beam, double rho,
                                           double z) {
  const double w = beam.w(z);
  const double amp =
      beam.E0 * (beam.w0 / w) * std::exp(-(rho * rho) / (w * w));
  const double phase =
      beam.k() * z + beam.curvature_phase(rho, z) - beam.gouy(z);
  return std::polar(amp, phase);
}

}  // namespace cloudshape
