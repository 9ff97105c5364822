/// \file dynamic_shaping.cpp
/// Ensemble integration of the scattering-force shaping sequence. Free
/// phases advance ballistically in closed form; during illumination each
/// atom's 6D phase-space state is integrated with the adaptive RK45 stepper,
/// restarted at the phase boundaries where the force switches on and off.

#include "cloudshape/dynamic_shaping.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <thread>

#include "cloudshape/errors.hpp"
#include "cloudshape/ode.hpp"

namespace cloudshape {

namespace {

void ballistic(Atom& a, double t, double gravity) {
    a.r += a.v * t;
    a.r.y -= 0.5 * gravity * t * t;
    a.v.y -= gravity * t;
}

/// Plane z > 0 where the analytic curvature per power falls to alpha0.
/// Curvature per power decreases monotonically with distance, so the
/// solution is unique; bisection on a bracket grown from the plate.
double matching_plane(const VortexBeamModel& model, double alpha0) {
    VortexBeamModel unit = model;
    unit.beam = GaussianBeam::from_power(model.beam.w0, model.beam.lambda, 1.0);
    const double z_plate = unit.plate.z_plate;
    double lo = z_plate + 1e-6;
    if (curvature_analytic(unit, lo) < alpha0) {
        throw NoSignal(
            "configure_beam_from_model: requested curvature above the model "
            "maximum");
    }
    double hi = lo;
    for (int i = 0; i < 200 && curvature_analytic(unit, hi) > alpha0; ++i) {
        hi = z_plate + 2.0 * (hi - z_plate);
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (curvature_analytic(unit, mid) > alpha0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

struct IlluminationForce {
    const DynamicRun& run;
    const TwoLevelParams& p;

    void operator()(double, const std::array<double, 6>& y,
                    std::array<double, 6>& dydt) const {
        const double sat = saturation_at(run, y[0], y[1]);
        const Vec3 vel{y[3], y[4], y[5]};
        const Vec3 f = scattering_force(p, sat * p.i_sat, vel);
        const double inv_m = 1.0 / p.atom_mass;
        dydt[0] = y[3];
        dydt[1] = y[4];
        dydt[2] = y[5];
        dydt[3] = f.x * inv_m;
        dydt[4] = f.y * inv_m - run.gravity;
        dydt[5] = f.z * inv_m;
    }
};

void illuminate(Atom& a, const DynamicRun& run, const TwoLevelParams& p,
                double t0, double t1) {
    if (t1 <= t0) return;
    std::array<double, 6> y{a.r.x, a.r.y, a.r.z, a.v.x, a.v.y, a.v.z};
    IlluminationForce force{run, p};
    integrate_rk45<6>(force, t0, t1, y);
    a.r = {y[0], y[1], y[2]};
    a.v = {y[3], y[4], y[5]};
}

void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t, std::size_t)>& body) {
    unsigned n = threads > 0 ? static_cast<unsigned>(threads)
                             : std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    n = static_cast<unsigned>(
        std::min<std::size_t>(n, count ? count : std::size_t{1}));
    if (n <= 1) {
        body(0, count);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(n);
    const std::size_t chunk = (count + n - 1) / n;
    for (unsigned i = 0; i < n; ++i) {
        const std::size_t lo = i * chunk;
        const std::size_t hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&body, lo, hi] { body(lo, hi); });
    }
    for (auto& th : pool) th.join();
}

}  // namespace

double saturation_at(const DynamicRun& run, double x, double y) {
    if (run.power <= 0.0) return 0.0;
    double u_sq;
    if (run.axis) {
        const double u = x * std::cos(*run.axis) + y * std::sin(*run.axis);
        u_sq = u * u;
    } else {
        u_sq = x * x + y * y;
    }
    const double sat = 0.5 * run.beta0 * run.power * u_sq;
    if (run.smax_per_watt > 0.0) {
        return std::min(sat, run.smax_per_watt * run.power);
    }
    return sat;
}

double scattering_rate(const TwoLevelParams& p, double intensity,
                       const Vec3& velocity) {
    if (intensity <= 0.0) return 0.0;
    const double sat = intensity / p.i_sat;
    const double kv = p.k_vec.x * velocity.x + p.k_vec.y * velocity.y +
                      p.k_vec.z * velocity.z;
    const double delta_eff = p.delta + kv;
    const double denom = 1.0 + sat +
                         4.0 * delta_eff * delta_eff / (p.gamma * p.gamma);
    return 0.5 * p.gamma * sat / denom;
}

Vec3 scattering_force(const TwoLevelParams& p, double intensity,
                      const Vec3& velocity) {
    const double rate = scattering_rate(p, intensity, velocity);
    return p.k_vec * (constants::hbar * rate);
}

Atom propagate_atom_dynamic(const Atom& atom, const DynamicRun& run,
                            const TwoLevelParams& p) {
    Atom a = atom;
    ballistic(a, run.tau1, run.gravity);
    illuminate(a, run, p, 0.0, run.tau_ill);
    ballistic(a, run.tau2, run.gravity);
    return a;
}

std::vector<Atom> simulate_dynamic(const std::vector<Atom>& ensemble,
                                   const DynamicRun& run,
                                   const TwoLevelParams& p) {
    std::vector<Atom> atoms = ensemble;
    parallel_for(atoms.size(), run.threads,
                 [&](std::size_t lo, std::size_t hi) {
                     for (std::size_t i = lo; i < hi; ++i) {
                         atoms[i] = propagate_atom_dynamic(atoms[i], run, p);
                         atoms[i].weight *=
                             doppler_visibility(atoms[i].v, 0.6108652381980153,
                                                p.gamma);
                     }
                 });
    return atoms;
}

std::vector<TrajectorySample> trace_atom_dynamic(const Atom& atom,
                                                 const DynamicRun& run,
                                                 const TwoLevelParams& p,
                                                 int n_samples) {
    if (n_samples < 2) {
        throw ConfigError("trace_atom_dynamic: need at least two samples");
    }
    const double total = run.tau1 + run.tau_ill + run.tau2;
    std::vector<TrajectorySample> out;
    out.reserve(n_samples);

    Atom state = atom;
    double t_done = 0.0;  // sequence time already applied to `state`
    const double b1 = run.tau1;
    const double b2 = run.tau1 + run.tau_ill;

    auto advance_to = [&](double t) {
        while (t_done < t) {
            if (t_done < b1) {
                const double step = std::min(t, b1) - t_done;
                ballistic(state, step, run.gravity);
                t_done += step;
            } else if (t_done < b2) {
                const double stop = std::min(t, b2);
                illuminate(state, run, p, t_done - b1, stop - b1);
                t_done = stop;
            } else {
                ballistic(state, t - t_done, run.gravity);
                t_done = t;
            }
        }
    };

    for (int i = 0; i < n_samples; ++i) {
        const double t = total * i / (n_samples - 1);
        advance_to(t);
        out.push_back({t, state.r, state.v});
    }
    return out;
}

double doppler_visibility(const Vec3& velocity, double imaging_angle,
                          double gamma) {
    const double v_axis = velocity.x * std::sin(imaging_angle) +
                          velocity.z * std::cos(imaging_angle);
    const double shift = rb87::k_d2 * v_axis;
    return 1.0 / (1.0 + 4.0 * shift * shift / (gamma * gamma));
}

double weighted_slab_fraction(const std::vector<Atom>& atoms,
                              double half_width) {
    if (atoms.empty()) {
        throw InsufficientData("weighted_slab_fraction: empty ensemble");
    }
    double sum = 0.0;
    for (const Atom& a : atoms) {
        if (std::abs(a.r.y) < half_width) sum += a.weight;
    }
    return sum / static_cast<double>(atoms.size());
}

void configure_beam_from_model(DynamicRun& run, const VortexBeamModel& model,
                               double alpha0, double i_sat) {
    run.beta0 = alpha0 / i_sat;
    if (model.polarizer_axis) {
        run.axis = *model.polarizer_axis;
    } else {
        run.axis.reset();
    }
    const double z_match = matching_plane(model, alpha0);
    VortexBeamModel unit = model;
    unit.beam = GaussianBeam::from_power(model.beam.w0, model.beam.lambda, 1.0);
    const double peak_per_watt = peak_intensity(unit, z_match);
    run.smax_per_watt = peak_per_watt / i_sat;
}

}  // namespace cloudshape
