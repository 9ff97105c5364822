/// \file vortex_field.cpp
/// Closed-form Fresnel propagation of a vortex-retarder output beam.
///
/// The incident Gaussian at the plate plane z' carries a phase factor
/// exp(-i k rho'^2 / (2 Rc^2) * ...) collected, together with the Fresnel
/// kernel, into one complex Gaussian of inverse square width
///   1/Rc^2 = 1/w'^2 - i k/(2R') - i k/(2B),   B = z - z',
/// where w' and R' are the beam width and curvature radius at the plate.
/// The azimuthal harmonic cos/sin(m phi') propagates into the same harmonic
/// at z with radial amplitude
///   E~ = (-i)^(|m|+1) 2 pi^(3/2) E00 Rc^3 (k rho / B) / (8 lambda B)
///        * exp(-eta) [ I_((|m|-1)/2)(eta) - I_((|m|+1)/2)(eta) ],
///   eta = Rc^2 k^2 rho^2 / (8 B^2),
/// with E00 the on-axis amplitude factor of the incident beam including the
/// output-plane quadratic phase. exp(-eta) I_nu is evaluated as one scaled
/// quantity, which keeps the expression finite for eta far in the right
/// half-plane.

#include "cloudshape/vortex_field.hpp"

#include <cmath>
#include <complex>
#include <cstdlib>

#include "cloudshape/bessel.hpp"
#include "cloudshape/errors.hpp"

namespace cloudshape {

namespace {

constexpr double kPi = 3.14159265358979323846;

/// (-i)^n for integer n >= 0.
complexd minus_i_pow(int n) {
    switch (((n % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, -1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, 1.0};
    }
}

/// Inverse complex Gaussian width combining the beam at the plate plane
/// with the Fresnel kernel over a propagation distance b.
complexd inv_rc_squared(const GaussianBeam& beam, double z_plate, double b) {
    const double wp = beam.w(z_plate);
    const double k = beam.k();
    return complexd(1.0 / (wp * wp), 0.0) -
           complexd(0.0, 0.5 * k * beam.inv_radius(z_plate)) -
           complexd(0.0, 0.5 * k / b);
}

}  // namespace

complexd vortex_radial_amplitude(const VortexBeamModel& model, double rho,
                                 double z) {
    const GaussianBeam& beam = model.beam;
    const double b = z - model.plate.z_plate;
    if (b <= 0.0) {
        throw UpstreamPlane(
            "vortex_radial_amplitude: plane is at or before the plate");
    }
    if (rho == 0.0) return {0.0, 0.0};

    const int mabs = std::abs(model.plate.m);
    const double k = beam.k();
    const double lambda = beam.lambda;

    const complexd rc2 = 1.0 / inv_rc_squared(beam, model.plate.z_plate, b);
    const complexd rc3 = rc2 * std::sqrt(rc2);
    const complexd eta = rc2 * (k * k * rho * rho / (8.0 * b * b));

    const double nu_lo = 0.5 * (mabs - 1);
    const auto [i_lo, i_hi] = scaled_bessel_i_pair(nu_lo, eta);

    const double wp = beam.w(model.plate.z_plate);
    const complexd e00 =
        beam.E0 * (beam.w0 / wp) *
        std::exp(complexd(0.0, k * rho * rho / (2.0 * b) -
                                   beam.gouy(model.plate.z_plate)));

    const complexd prefactor = minus_i_pow(mabs + 1) * 2.0 *
                               std::pow(kPi, 1.5) * e00 * rc3 * k * rho /
                               (8.0 * lambda * b * b);
    return prefactor * std::exp(complexd(0.0, k * z)) * (i_lo - i_hi);
}

JonesVector vortex_field_analytic(const VortexBeamModel& model, double rho,
                                  double phi, double z) {
    const double b = z - model.plate.z_plate;
    if (b < 0.0) {
        throw UpstreamPlane(
            "vortex_field_analytic: plane is before the plate");
    }

    JonesVector out;
    if (b == 0.0) {
        const complexd eg = gaussian_field(model.beam, rho, z);
        out = apply_retarder(model.plate, phi, JonesVector{eg, {0.0, 0.0}});
    } else {
        const complexd amp = vortex_radial_amplitude(model, rho, z);
        const double mphi = model.plate.m * phi;
        out = JonesVector{amp * std::cos(mphi), amp * std::sin(mphi)};
    }
    if (model.polarizer_axis) {
        out = apply_polarizer(*model.polarizer_axis, out);
    }
    return out;
}

double vortex_intensity(const VortexBeamModel& model, double rho, double phi,
                        double z) {
    return vortex_field_analytic(model, rho, phi, z).intensity();
}

double curvature_analytic(const VortexBeamModel& model, double z) {
    if (std::abs(model.plate.m) != 1) {
        throw UnsupportedOrder(
            "curvature_analytic: quadratic core requires charge 1");
    }
    const GaussianBeam& beam = model.beam;
    const double b = z - model.plate.z_plate;
    if (b <= 0.0) {
        throw UpstreamPlane(
            "curvature_analytic: plane is at or before the plate");
    }
    const double k = beam.k();
    const double wp = beam.w(model.plate.z_plate);
    const complexd rc2 = 1.0 / inv_rc_squared(beam, model.plate.z_plate, b);
    const double rc2_mag = std::abs(rc2);
    const double k4 = k * k * k * k;
    return beam.P * k4 * rc2_mag * rc2_mag * rc2_mag /
           (16.0 * b * b * b * b * wp * wp);
}

double curvature_simple(const GaussianBeam& beam, double z) {
    if (z <= 0.0) {
        throw NonPositiveDistance(
            "curvature_simple: propagation distance must be positive");
    }
    const double zr = beam.z0();
    const double geo = std::pow(1.0 + (z / zr) * (z / zr), -1.5);
    return kPi * beam.P / (beam.lambda * z * beam.w0 * beam.w0) * geo;
}

double ParabolicCore::operator()(double x, double y) const {
    if (axis) {
        const double u = x * std::cos(*axis) + y * std::sin(*axis);
        return 0.5 * alpha * u * u;
    }
    return 0.5 * alpha * (x * x + y * y);
}

ParabolicCore parabolic_core(const VortexBeamModel& model, double z) {
    ParabolicCore core;
    core.alpha = curvature_analytic(model, z);
    core.axis = model.polarizer_axis;
    return core;
}

double peak_intensity(const VortexBeamModel& model, double z) {
    const double b = z - model.plate.z_plate;
    if (b <= 0.0) {
        throw UpstreamPlane(
            "peak_intensity: plane is at or before the plate");
    }
    const double w_here = model.beam.w(z);
    const double rho_max = 4.0 * w_here;
    const int n = 2000;

    auto profile = [&](double rho) {
        const complexd amp = vortex_radial_amplitude(model, rho, z);
        return std::norm(amp);
    };

    double best = 0.0;
    double best_rho = 0.0;
    for (int i = 1; i <= n; ++i) {
        const double rho = rho_max * i / n;
        const double v = profile(rho);
        if (v > best) {
            best = v;
            best_rho = rho;
        }
    }

    // Golden-section refinement inside the bracketing pair of samples.
    double lo = std::max(0.0, best_rho - rho_max / n);
    double hi = std::min(rho_max, best_rho + rho_max / n);
    const double inv_phi = 0.6180339887498949;
    double c = hi - inv_phi * (hi - lo);
    double d = lo + inv_phi * (hi - lo);
    double fc = profile(c);
    double fd = profile(d);
    for (int it = 0; it < 60 && hi - lo > 1e-12 * rho_max; ++it) {
        if (fc > fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = profile(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = profile(d);
        }
    }
    return std::max(best, std::max(fc, fd));
}

double critical_radius(double alpha, double intensity_c) {
    if (alpha <= 0.0) {
        throw NonPositiveDistance("critical_radius: curvature must be positive");
    }
    return std::sqrt(2.0 * intensity_c / alpha);
}

}  // namespace cloudshape
