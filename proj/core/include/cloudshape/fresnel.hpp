/// \file fresnel.hpp
/// Sampled transverse fields on square grids and scalar Fresnel propagation
/// between planes via the FFT transfer-function method.

#pragma once

#include <functional>
#include <vector>

#include "cloudshape/gaussian_beam.hpp"
#include "cloudshape/jones.hpp"
#include "cloudshape/vortex_field.hpp"

namespace cloudshape {

/// Square grid of Jones field samples in a transverse plane. Sample i lies
/// at (i - n/2 + 0.5) * dx so no sample sits exactly on the axis.
struct FieldGrid {
    int n = 0;                    ///< samples per side
    double half_width = 0.0;      ///< window half width [m]
    double z = 0.0;               ///< plane position [m]
    double lambda = 0.0;          ///< wavelength [m]
    std::vector<complexd> ex;     ///< x component, row-major [iy * n + ix]
    std::vector<complexd> ey;     ///< y component, row-major [iy * n + ix]

    double dx() const { return 2.0 * half_width / n; }
    /// Physical coordinate of sample index i along either axis. [m]
    double coord(int i) const { return (i - 0.5 * n + 0.5) * dx(); }
    std::size_t index(int ix, int iy) const {
        return static_cast<std::size_t>(iy) * n + ix;
    }
};

/// Samples an arbitrary transverse field f(x, y) on an n x n window of the
/// given half width at plane z.
FieldGrid sample_field(int n, double half_width, double z, double lambda,
                       const std::function<JonesVector(double, double)>& f);

/// Samples the analytic vortex-retarder output field at plane z.
FieldGrid sample_vortex(const VortexBeamModel& model, double z, int n,
                        double half_width);

/// Samples the incident Gaussian (x polarized) at plane z.
FieldGrid sample_gaussian(const GaussianBeam& beam, double z, int n,
                          double half_width);

/// Propagates the grid forward by dz with the Fresnel transfer function on a
/// 2x zero-padded copy, cropping back to the original window. Requires an
/// even grid size of at least 16. Throws NonPositiveDistance for dz <= 0 and
/// GridTooNarrow when the field has not decayed at the window edge (edge
/// amplitude above 1e-6 of the peak).
FieldGrid propagate_fresnel(const FieldGrid& in, double dz);

/// Total power carried by the sampled field, sum |E|^2 dx^2. [W]
double grid_power(const FieldGrid& grid);

/// Relative L2 distance sqrt(sum |a - b|^2 / sum |b|^2) over both
/// polarization components.
double relative_l2(const FieldGrid& a, const FieldGrid& b);

/// Window half width that comfortably contains the beam at the target
/// plane: four times the Gaussian width there. [m]
double default_half_width(const GaussianBeam& beam, double z_target);

}  // namespace cloudshape
