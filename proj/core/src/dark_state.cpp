/// \file dark_state.cpp
/// Dark-state pumping dynamics and the resulting cloud shapes.

#include "cloudshape/dark_state.hpp"

#include <cmath>

#include "cloudshape/errors.hpp"
#include "cloudshape/ode.hpp"

namespace cloudshape {

double effective_saturation(const ThreeLevelParams& p, double intensity) {
    if (intensity < 0.0) {
        throw ConfigError("effective_saturation: negative intensity");
    }
    const double g = p.gamma();
    const double lorentz = 1.0 + 4.0 * p.delta * p.delta / (g * g);
    return intensity / p.i_sat / lorentz;
}

double relative_population(const ThreeLevelParams& p, double intensity) {
    const double s_eff = effective_saturation(p, intensity);
    return 0.5 * s_eff / (1.0 + s_eff);
}

double gamma_eff(const ThreeLevelParams& p, double intensity) {
    return p.gamma1 * relative_population(p, intensity);
}

Populations populations_analytic(const ThreeLevelParams& p, double intensity,
                                 double t) {
    const double rho_tilde = relative_population(p, intensity);
    const double decay = std::exp(-gamma_eff(p, intensity) * t);
    return {1.0 - decay, (1.0 - rho_tilde) * decay, rho_tilde * decay};
}

Populations full_rate_equations(const ThreeLevelParams& p, double intensity,
                                double t) {
    const double pump = 0.5 * p.gamma() * effective_saturation(p, intensity);
    std::array<double, 3> y{0.0, 1.0, 0.0};  // (rho11, rho22, rho_ee)
    if (t == 0.0 || pump == 0.0) return {y[0], y[1], y[2]};

    auto rhs = [&](double, const std::array<double, 3>& s,
                   std::array<double, 3>& ds) {
        const double net_pump = pump * (s[1] - s[2]);
        ds[2] = net_pump - p.gamma() * s[2];
        ds[1] = -net_pump + p.gamma2 * s[2];
        ds[0] = p.gamma1 * s[2];
    };
    OdeOptions opt;
    opt.rtol = 1e-10;
    opt.atol = 1e-12;
    integrate_rk45<3>(rhs, 0.0, t, y, opt);
    return {y[0], y[1], y[2]};
}

double pulse_intensity(const DarkPulse& pulse, double x, double y) {
    return 0.5 * pulse.alpha0 * pulse.power * (x * x + y * y);
}

double beta0_tilde(const DarkPulse& pulse, const ThreeLevelParams& p) {
    const double g = p.gamma();
    const double lorentz = 1.0 + 4.0 * p.delta * p.delta / (g * g);
    return pulse.alpha0 / (p.i_sat * lorentz);
}

double shaped_density(const CloudParams& spec, const DarkPulse& pulse,
                      const ThreeLevelParams& p, const Vec3& r, bool exact) {
    const double base = gaussian_density(spec, r);
    if (exact) {
        const double rate = gamma_eff(p, pulse_intensity(pulse, r.x, r.y));
        return base * std::exp(-rate * pulse.tau_ill);
    }
    const double b0 = beta0_tilde(pulse, p);
    const double rho_sq = r.x * r.x + r.y * r.y;
    const double exponent =
        0.5 * p.gamma1 * b0 * pulse.energy() * 0.5 * rho_sq;
    return base * std::exp(-exponent);
}

double sigma_s(double gamma1, double beta0_tilde_value, double e_ill) {
    if (gamma1 <= 0.0 || beta0_tilde_value <= 0.0 || e_ill <= 0.0) {
        throw ConfigError("sigma_s: parameters must be positive");
    }
    return 1.0 / std::sqrt(0.5 * gamma1 * beta0_tilde_value * e_ill);
}

double shaped_width(double sigma0, double gamma1, double beta0_tilde_value,
                    double e_ill) {
    if (sigma0 <= 0.0) {
        throw ConfigError("shaped_width: sigma0 must be positive");
    }
    if (e_ill <= 0.0) return sigma0;
    const double ss = sigma_s(gamma1, beta0_tilde_value, e_ill);
    return sigma0 / std::sqrt(1.0 + sigma0 * sigma0 / (ss * ss));
}

double shaped_width(double sigma0, const DarkPulse& pulse,
                    const ThreeLevelParams& p) {
    return shaped_width(sigma0, p.gamma1, beta0_tilde(pulse, p),
                        pulse.energy());
}

double width_vs_detuning(double delta, double sigma0, double e_ill,
                         double beta0, double gamma1, double gamma, double c,
                         double delta0) {
    if (sigma0 <= 0.0 || gamma <= 0.0) {
        throw ConfigError("width_vs_detuning: invalid parameters");
    }
    const double arg = 2.0 * c * (delta - delta0) / gamma;
    const double suppressed = beta0 / (1.0 + arg * arg);
    const double exponent =
        sigma0 * sigma0 * 0.5 * gamma1 * suppressed * e_ill;
    return sigma0 / std::sqrt(1.0 + exponent);
}

void pump_ensemble(std::vector<Atom>& atoms, const DarkPulse& pulse,
                   const ThreeLevelParams& p) {
    for (Atom& a : atoms) {
        const double intensity = pulse_intensity(pulse, a.r.x, a.r.y);
        const Populations pops =
            populations_analytic(p, intensity, pulse.tau_ill);
        a.p11 = pops[0];
        a.p22 = pops[1];
        a.pee = pops[2];
        a.weight *= pops[1] + pops[2];
    }
}

}  // namespace cloudshape
