/// \file cloud.cpp
/// Thermal cloud sampling and Gaussian profile helpers.

#include "cloudshape/cloud.hpp"

#include <cmath>

#include "cloudshape/constants.hpp"
#include "cloudshape/errors.hpp"
#include "cloudshape/rng.hpp"

namespace cloudshape {

double velocity_sigma(double temperature) {
    if (temperature < 0.0) {
        throw ConfigError("velocity_sigma: temperature must be non-negative");
    }
    return std::sqrt(constants::kB * temperature / rb87::mass);
}

std::vector<Atom> sample_cloud(const CloudParams& params) {
    if (params.sigma0.x <= 0.0 || params.sigma0.y <= 0.0 ||
        params.sigma0.z <= 0.0) {
        throw ConfigError("sample_cloud: rms radii must be positive");
    }
    const double sv = velocity_sigma(params.temperature);
    std::vector<Atom> atoms(params.n_atoms);
    for (std::uint64_t i = 0; i < params.n_atoms; ++i) {
        RandomStream rng(params.seed, i);
        Atom& a = atoms[i];
        a.id = i;
        a.r = {params.sigma0.x * rng.normal(), params.sigma0.y * rng.normal(),
               params.sigma0.z * rng.normal()};
        a.v = {sv * rng.normal(), sv * rng.normal(), sv * rng.normal()};
    }
    return atoms;
}

double gaussian_density(const CloudParams& params, const Vec3& r) {
    const Vec3& s = params.sigma0;
    const double norm = static_cast<double>(params.n_atoms) /
                        (std::pow(2.0 * 3.14159265358979323846, 1.5) * s.x *
                         s.y * s.z);
    const double arg = 0.5 * (r.x * r.x / (s.x * s.x) +
                              r.y * r.y / (s.y * s.y) +
                              r.z * r.z / (s.z * s.z));
    return norm * std::exp(-arg);
}

double expansion_width(double sigma0, double temperature, double t) {
    const double sv = velocity_sigma(temperature);
    return std::sqrt(sigma0 * sigma0 + sv * sv * t * t);
}

double expansion_ratio(const CloudParams& params, double tau) {
    const Vec3& s = params.sigma0;
    const double s_min = std::min(s.x, std::min(s.y, s.z));
    if (s_min <= 0.0) {
        throw ConfigError("expansion_ratio: rms radii must be positive");
    }
    return tau * velocity_sigma(params.temperature) / s_min;
}

Vec3 rms_radius(const std::vector<Atom>& atoms) {
    if (atoms.empty()) throw InsufficientData("rms_radius: empty ensemble");
    Vec3 acc;
    for (const Atom& a : atoms) {
        acc.x += a.r.x * a.r.x;
        acc.y += a.r.y * a.r.y;
        acc.z += a.r.z * a.r.z;
    }
    const double inv = 1.0 / static_cast<double>(atoms.size());
    return {std::sqrt(acc.x * inv), std::sqrt(acc.y * inv),
            std::sqrt(acc.z * inv)};
}

Vec3 mean_velocity(const std::vector<Atom>& atoms) {
    if (atoms.empty()) throw InsufficientData("mean_velocity: empty ensemble");
    Vec3 acc;
    for (const Atom& a : atoms) acc += a.v;
    return acc * (1.0 / static_cast<double>(atoms.size()));
}

}  // namespace cloudshape
