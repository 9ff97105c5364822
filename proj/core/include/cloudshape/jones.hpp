#pragma once

/// \file jones.hpp
/// Jones-calculus primitives: two-component polarization vectors, the
/// half-wave-plate matrix, the azimuthally varying vortex retarder, and
/// linear polarizers. All angles are in radians.

#include <array>
#include <cmath>
#include <complex>

namespace cloudshape {

using complexd = std::complex<double>;

/// Transverse polarization state (E_x, E_y), complex valued.
struct JonesVector {
  complexd ex{0.0, 0.0};
  complexd ey{0.0, 0.0};

  /// |E_x|^2 + |E_y|^2.
  double intensity() const { return std::norm(ex) + std::norm(ey); }

  double norm() const { return std::sqrt(intensity()); }

  JonesVector operator*(complexd s) const { return {ex * s, ey * s}; }
  JonesVector operator+(const JonesVector& o) const {
    return {ex + o.ex, ey + o.ey};
  }
};

using JonesMatrix = std::array<std::array<complexd, 2>, 2>;

/// Half-wave plate with its fast axis at angle theta from x:
/// [[cos 2theta, sin 2theta], [sin 2theta, -cos 2theta]].
/// Symmetric, involutory, determinant -1.
inline JonesMatrix retarder_jones(double theta) {
  const double c = std::cos(2.0 * theta);
  const double s = std::sin(2.0 * theta);
  return {{{complexd{c}, complexd{s}}, {complexd{s}, complexd{-c}}}};
}

inline JonesVector apply(const JonesMatrix& m, const JonesVector& v) {
  return {m[0][0] * v.ex + m[0][1] * v.ey, m[1][0] * v.ex + m[1][1] * v.ey};
}

/// Half-wave plate whose fast-axis angle winds with azimuth as m*phi/2,
/// turning uniform linear input polarization into an m-fold polarization
/// winding (order-m polarization singularity on the axis).
struct VortexRetarder {
  int m = 1;           // winding order, >= 1
  double z_plate = 0;  // plate position along the optical axis [m]
};

/// Field right after the retarder at azimuth phi: the half-wave-plate matrix
/// evaluated at the local fast-axis angle m*phi/2. Norm preserving; linear
/// x input maps to polarization direction (cos m*phi, sin m*phi).
inline JonesVector apply_retarder(const VortexRetarder& vr, double phi,
                                  const JonesVector& vin) {
  return apply(retarder_jones(0.5 * vr.m * phi), vin);
}

/// Ideal linear polarizer with transmission axis at angle `axis` from x:
/// projects onto (cos axis, sin axis). Idempotent.
inline JonesVector apply_polarizer(double axis, const JonesVector& vin) {
  const double c = std::cos(axis);
  const double s = std::sin(axis);
  const complexd along = c * vin.ex + s * vin.ey;
  return {along * c, along * s};
}

}  // namespace cloudshape
