/// \file cloud.hpp
/// Thermal atom ensembles: deterministic sampling of positions and
/// velocities, Gaussian density profiles, and free-expansion widths.

#pragma once

#include <cstdint>
#include <vector>

namespace cloudshape {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3& operator+=(const Vec3& o) {
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }
};

/// One tracked atom: phase-space coordinates, an imaging weight, and the
/// populations of the two ground hyperfine levels and the excited level.
struct Atom {
    std::uint64_t id = 0;
    Vec3 r;              ///< position [m]
    Vec3 v;              ///< velocity [m/s]
    double weight = 1.0; ///< detection weight used by the imaging model
    double p11 = 0.0;    ///< lower ground level (dark to the probe)
    double p22 = 1.0;    ///< upper ground level (bright)
    double pee = 0.0;    ///< excited level
};

/// Initial thermal cloud description.
struct CloudParams {
    std::uint64_t n_atoms = 100000;
    double temperature = 45e-6;  ///< [K]
    Vec3 sigma0{100e-6, 100e-6, 100e-6};  ///< rms radii per axis [m]
    std::uint64_t seed = 1;
};

/// One-dimensional rms thermal velocity sqrt(kB T / m) for 87Rb. [m/s]
double velocity_sigma(double temperature);

/// Samples the ensemble. Each atom's coordinates come from its own counter
/// stream keyed by (seed, atom id), so the result is independent of
/// evaluation order and identical across thread counts.
std::vector<Atom> sample_cloud(const CloudParams& params);

/// Mean spatial density of the cloud model at position r. [atoms/m^3]
double gaussian_density(const CloudParams& params, const Vec3& r);

/// Rms width of one axis after free flight: sqrt(sigma0^2 + (sigma_v t)^2).
/// [m]
double expansion_width(double sigma0, double temperature, double t);

/// Ratio of the free expansion over a time tau to the tightest initial
/// radius, tau * sigma_v / min(sigma0). Values well below one mean the cloud
/// is effectively frozen during tau.
double expansion_ratio(const CloudParams& params, double tau);

/// Per-axis rms of atom positions about zero. [m]
Vec3 rms_radius(const std::vector<Atom>& atoms);

/// Per-axis mean velocity. [m/s]
Vec3 mean_velocity(const std::vector<Atom>& atoms);

}  // namespace cloudshape
