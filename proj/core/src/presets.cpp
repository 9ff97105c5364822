/// \file
/// Definitions of the built-in experiment presets. All values are plain SI
/// after construction; comments give the laboratory units they came from.

#include "cloudshape/presets.hpp"

#include <algorithm>
#include <cmath>

#include "cloudshape/errors.hpp"

namespace cloudshape {

namespace {

constexpr double kPi = 3.14159265358979323846;

/// Dynamic-removal interaction constants: curvature 1.55e5 cm^-4 per mW and
/// saturation curvature 2.2e4 mW^-1 cm^-2, i.e. I_sat = alpha0 / beta0.
constexpr double kDynAlpha0 = 1.55e13;            // [m^-4 W^-1]
constexpr double kDynIsat = kDynAlpha0 / 2.2e11;  // [W/m^2]

/// Dark-state pumping constants: curvature 1.2e5 cm^-4 per mW and
/// saturation curvature 7.1e3 mW^-1 cm^-2 at resonance.
constexpr double kDarkAlpha0 = 1.2e13;              // [m^-4 W^-1]
constexpr double kDarkIsat = kDarkAlpha0 / 7.1e10;  // [W/m^2]

/// Initial size and temperature of the dark-state clouds, chosen so that
/// free expansion over tau1 = 4.5 ms lands the pump-time rms width on the
/// fitted unperturbed size of 209 um.
constexpr double kDarkSigma0 = 100e-6;  // [m]
constexpr double kDarkTemperature = 17.387e-6;  // [K]

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        v[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
    }
    return v;
}

ExperimentConfig base_config() {
    ExperimentConfig c;
    c.beam.w0 = 1.0e-3;
    c.beam.m = 1;
    c.beam.z_plate = 0.0;
    c.imaging.noise_seed = 7;
    c.output.formats = {"csv", "pgm", "json"};
    return c;
}

/// Removal sequence: polarized two-lobe beam, curvature-matched clamp,
/// gravity on, MOT temperature.
ExperimentConfig dynamic_base() {
    ExperimentConfig c = base_config();
    c.beam.polarizer = true;
    c.beam.polarizer_axis = kPi / 2.0;
    c.beam.alpha0 = kDynAlpha0;
    c.beam.i_sat = kDynIsat;
    c.cloud.n_atoms = 100000;
    c.cloud.temperature = 45e-6;
    c.cloud.sigma0 = Vec3{100e-6, 100e-6, 100e-6};
    c.sequence.scheme = SequenceConfig::Scheme::dynamic_push;
    c.sequence.gravity = true;
    return c;
}

/// Pumping sequence: full funnel (no polarizer), pre-expansion to the
/// 209 um unperturbed size, free fall disabled because the camera and beam
/// track the rigidly falling cloud.
ExperimentConfig dark_base() {
    ExperimentConfig c = base_config();
    c.beam.polarizer = false;
    c.beam.alpha0 = kDarkAlpha0;
    c.beam.i_sat = kDarkIsat;
    c.cloud.n_atoms = 500000;
    c.cloud.temperature = kDarkTemperature;
    c.cloud.sigma0 = Vec3{kDarkSigma0, kDarkSigma0, kDarkSigma0};
    c.sequence.scheme = SequenceConfig::Scheme::dark_pump;
    c.sequence.tau1 = 4.5e-3;
    c.sequence.tau_ill = 30e-6;
    c.sequence.tau2 = 0.0;
    c.sequence.gamma1 = 2.0 * kPi * 3.0e6;
    c.sequence.gravity = false;
    return c;
}

ExperimentConfig fig1_config() {
    ExperimentConfig c = base_config();
    c.name = "fig1";
    c.beam.power = 1.45e-3;
    c.beam.polarizer_axis = kPi / 2.0;
    c.sweep.parameter = "power_mW";
    c.sweep.values = {1.45};
    c.output.directory = "out/fig1";
    return c;
}

ExperimentConfig fig3a_config() {
    ExperimentConfig c = dynamic_base();
    c.name = "fig3a";
    c.sequence.tau1 = 1.2e-3;
    c.sequence.tau_ill = 35e-6;
    c.sequence.tau2 = 565e-6;
    c.sweep.parameter = "power_mW";
    c.sweep.values = linspace(0.0, 0.8, 9);
    c.output.directory = "out/fig3a";
    return c;
}

ExperimentConfig fig3b_config() {
    ExperimentConfig c = dynamic_base();
    c.name = "fig3b";
    c.beam.power = 1.45e-3;
    c.sequence.tau1 = 1.2e-3;
    c.sequence.tau2 = 565e-6;
    c.sweep.parameter = "tau_ill_us";
    c.sweep.values = {1, 5, 10, 15, 20, 25, 30, 35, 40};
    c.output.directory = "out/fig3b";
    return c;
}

ExperimentConfig fig3c_config() {
    ExperimentConfig c = dynamic_base();
    c.name = "fig3c";
    c.beam.power = 1.45e-3;
    c.sequence.tau1 = 200e-6;
    c.sequence.tau_ill = 300e-6;
    c.sweep.parameter = "tau2_us";
    c.sweep.values = {0, 50, 100, 150, 200, 250, 300, 350, 400, 450, 500, 565};
    c.output.directory = "out/fig3c";
    return c;
}

ExperimentConfig fig4_config() {
    ExperimentConfig c = dark_base();
    c.name = "fig4";
    c.sweep.parameter = "energy_nJ";
    c.sweep.values = {0.0, 0.3, 0.6, 1.2, 2.4};
    c.output.directory = "out/fig4";
    return c;
}

/// One pump-series run at fixed illumination time, sweeping power so the
/// pulse energy stays within the measured range (<= 2.4 nJ, <= 140 uW).
ExperimentConfig fig5_run(double tau_ill_us) {
    ExperimentConfig c = dark_base();
    const int tau_label = static_cast<int>(std::lround(tau_ill_us));
    c.name = "fig5_tau" + std::to_string(tau_label) + "us";
    c.sequence.tau_ill = tau_ill_us * 1e-6;
    const double p_max_uw =
        std::min(140.0, 2.4e-9 / c.sequence.tau_ill * 1e6);
    c.sweep.parameter = "power_uW";
    c.sweep.values = linspace(0.0, p_max_uw, 8);
    c.output.directory = "out/fig5/tau" + std::to_string(tau_label) + "us";
    return c;
}

ExperimentConfig fig6_config() {
    ExperimentConfig c = dark_base();
    c.name = "fig6";
    c.cloud.sigma0 = Vec3{209e-6, 209e-6, 209e-6};
    c.sequence.tau1 = 0.0;
    c.sweep.parameter = "energy_nJ";
    std::vector<double> values;
    for (int i = 0; i <= 40; ++i) {
        values.push_back(std::pow(10.0, -2.0 + 3.0 * i / 40.0));
    }
    c.sweep.values = values;
    c.output.directory = "out/fig6";
    return c;
}

ExperimentConfig fig7_config() {
    ExperimentConfig c = dark_base();
    c.name = "fig7";
    c.beam.power = 1.3e-9 / 30e-6;  // 1.3 nJ in 30 us
    c.sweep.parameter = "delta_MHz";
    c.sweep.values = linspace(-20.0, 20.0, 21);
    c.output.directory = "out/fig7";
    return c;
}

}  // namespace

std::vector<std::string> preset_ids() {
    return {"fig1", "fig3a", "fig3b", "fig3c", "fig4", "fig5", "fig6", "fig7"};
}

bool optics_preset(const std::string& id) { return id == "fig1"; }

bool curve_preset(const std::string& id) { return id == "fig6"; }

std::vector<ExperimentConfig> preset_configs(const std::string& id) {
    if (id == "fig1") return {fig1_config()};
    if (id == "fig3a") return {fig3a_config()};
    if (id == "fig3b") return {fig3b_config()};
    if (id == "fig3c") return {fig3c_config()};
    if (id == "fig4") return {fig4_config()};
    if (id == "fig5") {
        std::vector<ExperimentConfig> runs;
        for (double tau : {10.0, 20.0, 30.0, 40.0, 50.0}) {
            runs.push_back(fig5_run(tau));
        }
        return runs;
    }
    if (id == "fig6") return {fig6_config()};
    if (id == "fig7") return {fig7_config()};
    throw UnknownFigure("unknown preset '" + id + "'");
}

}  // namespace cloudshape
