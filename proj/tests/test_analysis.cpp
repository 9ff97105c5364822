/// \file test_analysis.cpp
/// Tests for the analysis stack: nonlinear least squares and the width-law
/// fitters, synthetic absorption imaging, artifact writers, config parsing,
/// and the experiment runner end to end on small inputs.

#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "cloudshape/config.hpp"
#include "cloudshape/dark_state.hpp"
#include "cloudshape/errors.hpp"
#include "cloudshape/fit.hpp"
#include "cloudshape/imaging.hpp"
#include "cloudshape/io.hpp"
#include "cloudshape/presets.hpp"
#include "cloudshape/rng.hpp"
#include "cloudshape/runner.hpp"
#include "cloudshape/vortex_field.hpp"
#include "test_util.hpp"

using namespace cloudshape;
using testutil::mean;
using testutil::rel_err;
using testutil::sample_std;

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::filesystem::path fresh_dir(const std::string& tag) {
    const std::filesystem::path dir =
        std::filesystem::temp_directory_path() / ("cloudshape_test_" + tag);
    std::filesystem::remove_all(dir);
    return dir;
}

/// Row-profile Gaussian test image: constant across x, Gaussian in y.
Image planted_gaussian(const ImagingConfig& cfg, double sigma_y,
                       double amplitude) {
    Image img;
    img.width = cfg.width;
    img.height = cfg.height;
    img.v.assign(static_cast<std::size_t>(cfg.width) * cfg.height, 0.0);
    for (int iy = 0; iy < cfg.height; ++iy) {
        const double y = (iy - 0.5 * cfg.height + 0.5) * cfg.pixel;
        const double value =
            amplitude * std::exp(-0.5 * y * y / (sigma_y * sigma_y));
        for (int ix = 0; ix < cfg.width; ++ix) img.at(ix, iy) = value;
    }
    return img;
}

}  // namespace

TEST_CASE("least squares on a linear model matches the normal equations") {
    const std::vector<double> xs{0.0, 1.0, 2.0, 3.0, 4.0};
    const std::vector<double> ys{1.1, 2.9, 5.2, 6.8, 9.1};
    const ModelFn model = [](const std::vector<double>& p, double x) {
        return p[0] + p[1] * x;
    };
    const FitResult fit = least_squares(model, xs, ys, {0.0, 0.0});
    REQUIRE(fit.converged);
    CHECK(!fit.ill_conditioned);

    const double n = 5.0;
    const double sx = mean(xs);
    double sxx = 0.0, sxy = 0.0, sy = mean(ys);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - sx) * (xs[i] - sx);
        sxy += (xs[i] - sx) * (ys[i] - sy);
    }
    const double slope = sxy / sxx;
    const double intercept = sy - slope * sx;
    CHECK(rel_err(fit.params[0], intercept) < 1e-9);
    CHECK(rel_err(fit.params[1], slope) < 1e-9);

    double ssr = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = intercept + slope * xs[i] - ys[i];
        ssr += r * r;
    }
    CHECK(rel_err(fit.residual_norm, std::sqrt(ssr)) < 1e-9);
    const double variance = ssr / (n - 2.0);
    CHECK(rel_err(fit.stderr_of(1), std::sqrt(variance / sxx)) < 1e-7);
    CHECK(rel_err(fit.stderr_of(0),
                  std::sqrt(variance * (1.0 / n + sx * sx / sxx))) < 1e-7);
}

TEST_CASE("least squares crosses the curved valley to the minimum") {
    const std::vector<double> xs{0.0, 1.0};
    const std::vector<double> ys{0.0, 0.0};
    const ModelFn model = [](const std::vector<double>& p, double x) {
        return x < 0.5 ? 10.0 * (p[1] - p[0] * p[0]) : 1.0 - p[0];
    };
    const FitResult fit = least_squares(model, xs, ys, {-1.2, 1.0});
    REQUIRE(fit.converged);
    CHECK(std::abs(fit.params[0] - 1.0) < 1e-6);
    CHECK(std::abs(fit.params[1] - 1.0) < 1e-6);
    CHECK(fit.residual_norm < 1e-8);

    CHECK_THROWS_AS(least_squares(model, xs, ys, {-1.2, 1.0}, 0), FitDiverged);
    CHECK_THROWS_AS(least_squares(model, xs, ys, {-1.2, 1.0}, 1), FitDiverged);
}

TEST_CASE("forward-difference Jacobian matches the analytic derivative") {
    const ModelFn model = [](const std::vector<double>& p, double x) {
        return p[0] * std::exp(p[1] * x);
    };
    const std::vector<double> params{2.0, 0.5};
    const std::vector<double> xs{0.0, 0.3, 1.0};
    const std::vector<double> jac = fd_jacobian(model, params, xs);
    REQUIRE(jac.size() == 6);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double e = std::exp(params[1] * xs[i]);
        CHECK(rel_err(jac[2 * i], e) < 1e-6);
        CHECK(std::abs(jac[2 * i + 1] - params[0] * xs[i] * e) <
              1e-6 * params[0] * e + 1e-9);
    }
}

TEST_CASE("redundant parameters are flagged as ill conditioned") {
    const std::vector<double> xs{1.0, 2.0, 3.0};
    const std::vector<double> ys{2.0, 4.0, 6.0};
    const ModelFn model = [](const std::vector<double>& p, double x) {
        return (p[0] + p[1]) * x;
    };
    const FitResult fit = least_squares(model, xs, ys, {1.0, 1.0});
    CHECK(fit.converged);
    CHECK(fit.ill_conditioned);
    CHECK(fit.residual_norm < 1e-10);
}

TEST_CASE("least squares rejects mismatched sample arrays") {
    const ModelFn model = [](const std::vector<double>& p, double x) {
        return p[0] * x;
    };
    CHECK_THROWS_AS(least_squares(model, {1.0, 2.0}, {1.0}, {1.0}),
                    InsufficientData);
    CHECK_THROWS_AS(least_squares(model, {}, {}, {1.0}), InsufficientData);
}

TEST_CASE("parabola fit recovers an exact quadratic core") {
    const double alpha = 7.0e11;
    std::vector<double> y, intensity;
    for (int i = 0; i <= 20; ++i) {
        const double yi = -5e-5 + 5e-6 * i;
        y.push_back(yi);
        intensity.push_back(3.0 + 0.5 * alpha * yi * yi);
    }
    CHECK(rel_err(fit_parabola_curvature(y, intensity, 5e-5), alpha) < 1e-9);
    CHECK(rel_err(fit_parabola_curvature(y, intensity, 5e-5, 2.0),
                  alpha / 2.0) < 1e-9);

    // A minimum away from zero is still found: samples re-center on it.
    std::vector<double> shifted;
    for (double yi : y) {
        shifted.push_back(1.0 + 0.5 * alpha * (yi - 1e-5) * (yi - 1e-5));
    }
    CHECK(rel_err(fit_parabola_curvature(y, shifted, 3e-5), alpha) < 1e-9);

    CHECK_THROWS_AS(fit_parabola_curvature(y, intensity, 8e-6),
                    InsufficientData);
    CHECK_THROWS_AS(fit_parabola_curvature(y, intensity, 0.0), ConfigError);
    CHECK_THROWS_AS(fit_parabola_curvature(y, intensity, 5e-5, 0.0),
                    ConfigError);
    CHECK_THROWS_AS(fit_parabola_curvature({0.0}, intensity, 5e-5),
                    InsufficientData);
}

TEST_CASE("parabola fit window controls the core curvature estimate") {
    VortexBeamModel model;
    model.beam = GaussianBeam::from_power(1e-3, rb87::lambda_d2, 1.0);
    model.plate.m = 1;
    const double z = 0.5 * model.beam.z0();
    const double w = model.beam.w(z);
    const double alpha = curvature_analytic(model, z);

    // Narrow window around the axis: quadratic approximation valid to 1%.
    std::vector<double> y_fine, i_fine;
    for (int i = 0; i <= 120; ++i) {
        const double yi = (-0.06 + 0.001 * i) * w;
        y_fine.push_back(yi);
        i_fine.push_back(vortex_intensity(model, std::abs(yi), 0.0, z));
    }
    const double alpha_fit = fit_parabola_curvature(y_fine, i_fine, 0.05 * w);
    CHECK(rel_err(alpha_fit, alpha) < 0.01);

    // A window half way up the ring mixes in the rollover and must
    // underestimate the curvature.
    std::vector<double> y_wide, i_wide;
    for (int i = 0; i <= 200; ++i) {
        const double yi = (-0.5 + 0.005 * i) * w;
        y_wide.push_back(yi);
        i_wide.push_back(vortex_intensity(model, std::abs(yi), 0.0, z));
    }
    const double alpha_wide = fit_parabola_curvature(y_wide, i_wide, 0.5 * w);
    CHECK(alpha_wide / alpha < 0.85);
    CHECK(alpha_wide / alpha > 0.6);
}

TEST_CASE("pulse-energy width fit recovers the planted curvature") {
    const double sigma0 = 209e-6;
    const double gamma1 = 2.0 * kPi * 3e6;
    const double gamma = 2.0 * kPi * 6e6;
    const double planted = 7.1e10;

    std::vector<double> e_ill, widths;
    for (int i = 0; i < 10; ++i) {
        const double e = 0.5e-9 * std::pow(2.0, i);
        e_ill.push_back(e);
        widths.push_back(shaped_width(sigma0, gamma1, planted, e));
    }
    CHECK(rel_err(fit_energy_series(e_ill, widths, sigma0, gamma1, 0.0, gamma),
                  planted) < 1e-6);

    // With a detuned pump the fitter reports the on-resonance curvature.
    const double delta = 0.25 * gamma;
    const double lorentz = 1.0 + 4.0 * delta * delta / (gamma * gamma);
    std::vector<double> widths_detuned;
    for (double e : e_ill) {
        widths_detuned.push_back(
            shaped_width(sigma0, gamma1, planted / lorentz, e));
    }
    CHECK(rel_err(fit_energy_series(e_ill, widths_detuned, sigma0, gamma1,
                                    delta, gamma),
                  planted) < 1e-6);

    RandomStream noise(7, 0);
    std::vector<double> noisy;
    for (double w : widths) noisy.push_back(w * (1.0 + 0.02 * noise.normal()));
    const double recovered =
        fit_energy_series(e_ill, noisy, sigma0, gamma1, 0.0, gamma);
    CHECK(rel_err(recovered, planted) < 0.05);

    CHECK_THROWS_AS(fit_energy_series({1e-9, 2e-9}, {1e-4, 9e-5}, sigma0,
                                      gamma1, 0.0, gamma),
                    InsufficientData);
    CHECK_THROWS_AS(fit_energy_series(e_ill, {1e-4}, sigma0, gamma1, 0.0,
                                      gamma),
                    InsufficientData);
}

TEST_CASE("detuning response fit recovers the planted triple") {
    const double sigma0 = 209e-6;
    const double gamma1 = 2.0 * kPi * 3e6;
    const double gamma = 2.0 * kPi * 6e6;
    const double e_ill = 1.3e-9;
    const double c_true = 1.36;
    const double delta0_true = -2.0 * kPi * 0.13e6;
    const double beta0_true = 8.6e10;

    std::vector<double> deltas, widths;
    for (int i = 0; i <= 16; ++i) {
        const double d = 2.0 * kPi * (-8e6 + 1e6 * i);
        deltas.push_back(d);
        widths.push_back(width_vs_detuning(d, sigma0, e_ill, beta0_true,
                                           gamma1, gamma, c_true,
                                           delta0_true));
    }
    const DetuningFit clean = fit_detuning_series(deltas, widths, sigma0,
                                                  gamma1, gamma, e_ill);
    CHECK(clean.detail.converged);
    CHECK(rel_err(clean.c, c_true) < 1e-5);
    CHECK(rel_err(clean.delta0, delta0_true) < 1e-5);
    CHECK(rel_err(clean.beta0, beta0_true) < 1e-5);

    // The resonance offset is small against the response width, so pinning
    // it through 2% noise takes a dense flank-sampling scan.
    std::vector<double> dense, dense_w;
    RandomStream noise(3, 0);
    for (int i = 0; i <= 500; ++i) {
        const double d = 2.0 * kPi * (-4e6 + 8e6 * i / 500.0);
        dense.push_back(d);
        dense_w.push_back(width_vs_detuning(d, sigma0, e_ill, beta0_true,
                                            gamma1, gamma, c_true,
                                            delta0_true) *
                          (1.0 + 0.02 * noise.normal()));
    }
    const DetuningFit noisy = fit_detuning_series(dense, dense_w, sigma0,
                                                  gamma1, gamma, e_ill);
    CHECK(rel_err(noisy.c, c_true) < 0.10);
    CHECK(std::abs(noisy.delta0 - delta0_true) < 0.10 * std::abs(delta0_true));
    CHECK(rel_err(noisy.beta0, beta0_true) < 0.10);

    CHECK_THROWS_AS(fit_detuning_series({0.0, 1.0, 2.0, 3.0},
                                        {1e-4, 1e-4, 1e-4, 1e-4}, sigma0,
                                        gamma1, gamma, e_ill),
                    InsufficientData);
}

TEST_CASE("ensemble projection lands weights in the right pixels") {
    ImagingConfig cfg;
    cfg.angle = 0.0;
    cfg.pixel = 5e-6;
    cfg.width = 64;
    cfg.height = 64;

    std::vector<Atom> atoms(3);
    atoms[0].r = {2.5e-6, 2.5e-6, 0.12};  // pixel center (32, 32)
    atoms[0].weight = 1.0;
    atoms[1].r = {2.6e-6, 2.4e-6, -4.0};  // same pixel
    atoms[1].weight = 0.5;
    atoms[2].r = {-7.5e-6, 12.5e-6, 0.0};  // pixel (30, 34)
    atoms[2].weight = 2.0;

    const Image img = project_ensemble(atoms, cfg);
    const double cell = cfg.pixel * cfg.pixel;
    CHECK(rel_err(img.at(32, 32), 1.5 / cell) < 1e-12);
    CHECK(rel_err(img.at(30, 34), 2.0 / cell) < 1e-12);

    double total = 0.0;
    for (double v : img.v) total += v;
    CHECK(rel_err(total * cell, 3.5) < 1e-12);

    // Atoms outside the frame are dropped, not wrapped.
    std::vector<Atom> outside(1);
    outside[0].r = {1.0, 0.0, 0.0};
    const Image empty = project_ensemble(outside, cfg);
    double leaked = 0.0;
    for (double v : empty.v) leaked += v;
    CHECK(leaked == 0.0);
}

TEST_CASE("tilted camera sees the rotated longitudinal coordinate") {
    ImagingConfig cfg;
    cfg.angle = 0.6108652381980153;
    cfg.pixel = 5e-6;
    cfg.width = 64;
    cfg.height = 64;

    // Pick z so x_cam = x cos a - z sin a hits the center of pixel 35 and
    // y passes through unchanged.
    const double x_cam = 3.5 * cfg.pixel;
    std::vector<Atom> atoms(1);
    atoms[0].r = {0.0, -12.5e-6, -x_cam / std::sin(cfg.angle)};
    atoms[0].weight = 1.0;
    const Image img = project_ensemble(atoms, cfg);
    CHECK(img.at(35, 29) > 0.0);

    std::vector<Atom> same(1);
    same[0].r = {x_cam / std::cos(cfg.angle), -12.5e-6, 0.0};
    same[0].weight = 1.0;
    const Image img2 = project_ensemble(same, cfg);
    CHECK(rel_err(img2.at(35, 29), img.at(35, 29)) < 1e-12);
}

TEST_CASE("absorption synthesis and inversion are inverse maps") {
    ImagingConfig cfg;
    cfg.width = 32;
    cfg.height = 32;
    cfg.counts_per_pixel = 18000.0;
    cfg.dark_level = 150.0;

    Image n2d;
    n2d.width = cfg.width;
    n2d.height = cfg.height;
    n2d.v.assign(32 * 32, 0.0);
    for (int iy = 0; iy < 32; ++iy) {
        for (int ix = 0; ix < 32; ++ix) {
            const double r2 = (ix - 16.0) * (ix - 16.0) +
                              (iy - 16.0) * (iy - 16.0);
            n2d.at(ix, iy) = 1.5 / cfg.sigma_rb * std::exp(-r2 / 60.0);
        }
    }

    const AbsorptionImage frames = synthesize_absorption(n2d, cfg);
    CHECK(rel_err(frames.b.at(3, 4), cfg.dark_level + cfg.counts_per_pixel) <
          1e-12);
    const double od = n2d.at(16, 16) * cfg.sigma_rb;
    CHECK(rel_err(frames.g.at(16, 16),
                  cfg.dark_level + cfg.counts_per_pixel * std::exp(-od)) <
          1e-12);

    const Image back = invert_absorption(frames, cfg);
    for (int iy = 0; iy < 32; ++iy) {
        for (int ix = 0; ix < 32; ++ix) {
            CHECK(std::abs(back.at(ix, iy) - n2d.at(ix, iy)) <
                  1e-12 * n2d.at(16, 16) + 1e-9);
        }
    }
}

TEST_CASE("inversion flags opaque pixels and refuses a dead reference") {
    ImagingConfig cfg;
    cfg.width = 8;
    cfg.height = 8;
    AbsorptionImage frames;
    frames.g.width = frames.b.width = frames.d.width = 8;
    frames.g.height = frames.b.height = frames.d.height = 8;
    frames.g.v.assign(64, 900.0);
    frames.b.v.assign(64, 1100.0);
    frames.d.v.assign(64, 100.0);
    frames.g.at(2, 3) = 100.0;  // zero transmission
    frames.g.at(4, 5) = 50.0;   // below dark

    const Image od = invert_absorption(frames, cfg);
    CHECK(std::isnan(od.at(2, 3)));
    CHECK(std::isnan(od.at(4, 5)));
    CHECK(std::isfinite(od.at(0, 0)));
    const double expected = -std::log(800.0 / 1000.0) / cfg.sigma_rb;
    CHECK(rel_err(od.at(0, 0), expected) < 1e-12);

    // Row integration skips the flagged pixels instead of poisoning sums.
    const std::vector<double> rows = integrate_rows(od, cfg);
    REQUIRE(rows.size() == 8);
    CHECK(rel_err(rows[0], 8.0 * expected * cfg.pixel) < 1e-12);
    CHECK(rel_err(rows[3], 7.0 * expected * cfg.pixel) < 1e-12);

    AbsorptionImage dead = frames;
    dead.b.v.assign(64, 100.0);
    CHECK_THROWS_AS(invert_absorption(dead, cfg), BadReference);
}

TEST_CASE("photon shot noise is unbiased and seed deterministic") {
    ImagingConfig cfg;
    cfg.width = 64;
    cfg.height = 64;
    cfg.counts_per_pixel = 20000.0;
    cfg.noise_seed = 77;

    Image n2d;
    n2d.width = cfg.width;
    n2d.height = cfg.height;
    const double od_true = 0.5;
    n2d.v.assign(64 * 64, od_true / cfg.sigma_rb);

    const AbsorptionImage frames = synthesize_absorption(n2d, cfg);
    const Image od = invert_absorption(frames, cfg);
    double sum = 0.0;
    for (double v : od.v) sum += v * cfg.sigma_rb;
    CHECK(std::abs(sum / (64.0 * 64.0) - od_true) < 0.01 * od_true);

    const AbsorptionImage again = synthesize_absorption(n2d, cfg);
    CHECK(again.g.v == frames.g.v);
    CHECK(again.b.v == frames.b.v);

    ImagingConfig other = cfg;
    other.noise_seed = 78;
    const AbsorptionImage different = synthesize_absorption(n2d, other);
    CHECK(different.g.v != frames.g.v);

    // Frame averaging tightens the shot noise.
    ImagingConfig averaged = cfg;
    averaged.n_frames = 16;
    const Image od16 =
        invert_absorption(synthesize_absorption(n2d, averaged), averaged);
    std::vector<double> spread1, spread16;
    for (double v : od.v) spread1.push_back(v * cfg.sigma_rb);
    for (double v : od16.v) spread16.push_back(v * cfg.sigma_rb);
    CHECK(sample_std(spread16) < 0.5 * sample_std(spread1));
}

TEST_CASE("counter-based random streams have the right distributions") {
    CHECK(std::abs(inverse_normal_cdf(0.975) - 1.959963984540054) < 1e-9);
    CHECK(inverse_normal_cdf(0.5) == 0.0);

    RandomStream u(5, 0);
    double lo = 1.0, hi = 0.0, acc = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const double x = u.uniform();
        lo = std::min(lo, x);
        hi = std::max(hi, x);
        acc += x;
    }
    CHECK(lo > 0.0);
    CHECK(hi < 1.0);
    CHECK(std::abs(acc / n - 0.5) < 0.01);

    RandomStream g(5, 1);
    std::vector<double> zs;
    for (int i = 0; i < n; ++i) zs.push_back(g.normal());
    CHECK(std::abs(mean(zs)) < 0.03);
    CHECK(std::abs(sample_std(zs) - 1.0) < 0.03);

    RandomStream p(5, 2);
    CHECK(p.poisson(0.0) == 0);
    double small_acc = 0.0, large_acc = 0.0;
    for (int i = 0; i < n; ++i) small_acc += static_cast<double>(p.poisson(4.0));
    for (int i = 0; i < 2000; ++i) {
        large_acc += static_cast<double>(p.poisson(18000.0));
    }
    CHECK(std::abs(small_acc / n - 4.0) < 0.05 * 4.0);
    CHECK(std::abs(large_acc / 2000.0 - 18000.0) < 0.01 * 18000.0);

    // Streams with the same (seed, stream) replay the same sequence.
    RandomStream a(9, 4);
    RandomStream b(9, 4);
    a.uniform();
    CHECK(a.uniform() != b.uniform());  // draw 2 of a vs draw 1 of b
    RandomStream c(9, 4);
    c.uniform();
    c.uniform();
    CHECK(a.uniform() == c.uniform());  // both at draw 3
    RandomStream d(9, 5);
    RandomStream e(10, 4);
    const double first_of_a = RandomStream(9, 4).uniform();
    CHECK(d.uniform() != first_of_a);
    CHECK(e.uniform() != first_of_a);
}

TEST_CASE("width extraction recovers a planted Gaussian profile") {
    ImagingConfig cfg;
    cfg.pixel = 5e-6;
    cfg.width = 32;
    cfg.height = 384;
    const double sigma = 209e-6;
    const Image img = planted_gaussian(cfg, sigma, 3.0e13);

    const double width = extract_width(img, cfg);
    CHECK(rel_err(width, sigma) < 0.005);

    // Amplitude rescaling and a constant offset change nothing: the fit
    // carries explicit amplitude and offset terms.
    Image scaled = img;
    for (double& v : scaled.v) v = 7.3 * v + 5e12;
    CHECK(rel_err(extract_width(scaled, cfg), width) < 1e-6);

    Image flat = img;
    flat.v.assign(flat.v.size(), 0.0);
    CHECK_THROWS_AS(extract_width(flat, cfg), NoSignal);

    ImagingConfig tiny = cfg;
    tiny.height = 6;
    Image small;
    small.width = tiny.width;
    small.height = 6;
    small.v.assign(static_cast<std::size_t>(tiny.width) * 6, 1.0);
    CHECK_THROWS_AS(extract_width(small, tiny), InsufficientData);
}

TEST_CASE("separable Gaussian blur conserves flux and shapes a point") {
    Image img;
    img.width = 33;
    img.height = 33;
    img.v.assign(33 * 33, 0.0);
    img.at(16, 16) = 1.0;

    const Image blurred = gaussian_blur(img, 2.0);
    double total = 0.0;
    for (double v : blurred.v) total += v;
    CHECK(rel_err(total, 1.0) < 1e-12);
    CHECK(rel_err(blurred.at(18, 16) / blurred.at(16, 16),
                  std::exp(-4.0 / 8.0)) < 1e-12);
    CHECK(rel_err(blurred.at(16, 20) / blurred.at(16, 16),
                  std::exp(-16.0 / 8.0)) < 1e-12);
    CHECK(rel_err(blurred.at(17, 17) / blurred.at(16, 16),
                  std::exp(-2.0 / 8.0)) < 1e-12);

    const Image same = gaussian_blur(img, 0.0);
    CHECK(same.v == img.v);
}

TEST_CASE("CSV writers emit the documented headers") {
    std::vector<Atom> atoms(1);
    atoms[0].id = 42;
    atoms[0].r = {1e-6, -2e-6, 3e-6};
    atoms[0].v = {0.25, 0.0, -0.125};
    atoms[0].weight = 0.75;
    atoms[0].p11 = 0.5;
    atoms[0].p22 = 0.25;
    atoms[0].pee = 0.25;
    const std::string ens = ensemble_csv(atoms);
    CHECK(ens.rfind("atom_id,x,y,z,vx,vy,vz,weight,p11,p22,pee\n", 0) == 0);
    CHECK(ens.find("\n42,1e-06,-2e-06,3e-06,0.25,0,-0.125,0.75,0.5,0.25,0.25\n") !=
          std::string::npos);

    std::vector<std::pair<std::uint64_t, std::vector<TrajectorySample>>> tracks(
        1);
    tracks[0].first = 7;
    tracks[0].second.push_back({0.0, {1.0, 2.0, 3.0}, {4.0, 5.0, 6.0}});
    const std::string traj = trajectory_csv(tracks);
    CHECK(traj.rfind("atom_id,t,x,y,z,vx,vy,vz\n", 0) == 0);
    CHECK(traj.find("\n7,0,1,2,3,4,5,6\n") != std::string::npos);

    const std::string widths = width_table_csv({{1.3, 180.0, 150.0}});
    CHECK(widths.rfind("E_ill_nJ,sigma_x_um,sigma_y_um\n", 0) == 0);
    CHECK(widths.find("\n1.3,180,150\n") != std::string::npos);

    const std::string table =
        numeric_csv({"a", "b"}, {{1.0, 2.5}, {3.0, 4.0}});
    CHECK(table == "a,b\n1,2.5\n3,4\n");
    CHECK_THROWS_AS(numeric_csv({"a", "b"}, {{1.0}}), Error);
}

TEST_CASE("compact number formatting is deterministic") {
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(-2.0) == "-2");
    CHECK(format_number(1e-7) == "1e-07");
    CHECK(format_number(1234567890.123) == "1234567890");
    CHECK(format_number(0.0) == "0");
}

TEST_CASE("16-bit PGM layout, clamping, and flagged pixels") {
    Image img;
    img.width = 2;
    img.height = 1;
    img.v = {1.0, 0.0};
    const std::string pgm = pgm16(img, 1.0);
    const std::string header = "P5\n2 1\n65535\n";
    REQUIRE(pgm.size() == header.size() + 4);
    CHECK(pgm.rfind(header, 0) == 0);
    CHECK(static_cast<unsigned char>(pgm[header.size()]) == 0xFF);
    CHECK(static_cast<unsigned char>(pgm[header.size() + 1]) == 0xFF);
    CHECK(static_cast<unsigned char>(pgm[header.size() + 2]) == 0x00);
    CHECK(static_cast<unsigned char>(pgm[header.size() + 3]) == 0x00);

    Image odd;
    odd.width = 2;
    odd.height = 1;
    odd.v = {2.0, std::nan("")};
    const std::string clamped = pgm16(odd, 1.0);
    CHECK(static_cast<unsigned char>(clamped[header.size()]) == 0xFF);
    CHECK(static_cast<unsigned char>(clamped[header.size() + 1]) == 0xFF);
    CHECK(static_cast<unsigned char>(clamped[header.size() + 2]) == 0x00);
    CHECK(static_cast<unsigned char>(clamped[header.size() + 3]) == 0x00);

    CHECK_THROWS_AS(pgm16(img, 0.0), Error);
}

TEST_CASE("atomic file writes land complete under the final name") {
    const std::filesystem::path dir = fresh_dir("io");
    std::filesystem::create_directories(dir);
    const std::filesystem::path path = dir / "artifact.txt";
    write_file_atomic(path, "first\n");
    CHECK(read_file(path) == "first\n");
    write_file_atomic(path, "second\n");
    CHECK(read_file(path) == "second\n");
    // No leftover temporaries.
    std::size_t count = 0;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        (void)entry;
        ++count;
    }
    CHECK(count == 1);
    std::filesystem::remove_all(dir);
}

TEST_CASE("fit reports serialize to parseable JSON") {
    FitResult fit;
    fit.params = {1.5, -2.25};
    fit.covariance = {0.04, 0.0, 0.0, 0.01};
    fit.residual_norm = 0.125;
    fit.n_iter = 7;
    fit.converged = true;
    const std::string text = fit_report_json(fit, {"amplitude", "rate"});
    const nlohmann::json j = nlohmann::json::parse(text);
    CHECK(j["params"]["amplitude"].get<double>() == 1.5);
    CHECK(j["params"]["rate"].get<double>() == -2.25);
    CHECK(j["stderr"]["amplitude"].get<double>() == doctest::Approx(0.2));
    CHECK(j["residual_norm"].get<double>() == 0.125);
    CHECK(j["n_iter"].get<int>() == 7);
    CHECK(j["converged"].get<bool>() == true);
}

TEST_CASE("config parsing: defaults, unit suffixes, and field errors") {
    const ExperimentConfig def = parse_config("{}");
    CHECK(def.beam.w0 == 1.0e-3);
    CHECK(def.beam.m == 1);
    CHECK(def.sequence.scheme == SequenceConfig::Scheme::dynamic_push);
    CHECK(def.sweep.parameter == "power_mW");
    validate_config(def);

    const ExperimentConfig cfg = parse_config(R"({
        "beam": {"w0_um": 800, "power_uW": 450, "m": -2,
                 "polarizer": true, "polarizer_axis_deg": 90},
        "cloud": {"n_atoms": 5000, "temperature_uK": 17.387,
                  "sigma0_um": [100, 120, 140], "seed": 9},
        "sequence": {"scheme": "dark", "tau1_ms": 4.5, "tau_ill_us": 40,
                     "tau2_us": 100, "delta_MHz": -0.13, "gamma1_MHz": 3},
        "imaging": {"pixel_um": 4, "width_px": 96, "height_px": 128,
                    "blur_um": 8},
        "sweep": {"parameter": "energy_nJ", "values": [0.5, 1.3, 2.6]},
        "output": {"directory": "outdir", "formats": ["csv", "json"]}
    })");
    CHECK(rel_err(cfg.beam.w0, 800e-6) < 1e-12);
    CHECK(rel_err(cfg.beam.power, 450e-6) < 1e-12);
    CHECK(cfg.beam.m == -2);
    CHECK(cfg.beam.polarizer);
    CHECK(rel_err(cfg.beam.polarizer_axis, kPi / 2.0) < 1e-12);
    CHECK(cfg.cloud.n_atoms == 5000);
    CHECK(rel_err(cfg.cloud.temperature, 17.387e-6) < 1e-12);
    CHECK(rel_err(cfg.cloud.sigma0.y, 120e-6) < 1e-12);
    CHECK(cfg.sequence.scheme == SequenceConfig::Scheme::dark_pump);
    CHECK(rel_err(cfg.sequence.tau1, 4.5e-3) < 1e-12);
    CHECK(rel_err(cfg.sequence.tau_ill, 40e-6) < 1e-12);
    CHECK(rel_err(cfg.sequence.delta, -2.0 * kPi * 0.13e6) < 1e-12);
    CHECK(rel_err(cfg.sequence.gamma1, 2.0 * kPi * 3e6) < 1e-12);
    CHECK(cfg.imaging.width == 96);
    CHECK(rel_err(cfg.imaging.blur_sigma, 8e-6) < 1e-12);
    CHECK(cfg.sweep.parameter == "energy_nJ");
    CHECK(cfg.output.formats.size() == 2);
    validate_config(cfg);

    const ExperimentConfig scalar =
        parse_config(R"({"cloud": {"sigma0_um": 75}})");
    CHECK(scalar.cloud.sigma0.x == scalar.cloud.sigma0.z);
    CHECK(rel_err(scalar.cloud.sigma0.x, 75e-6) < 1e-12);

    CHECK_THROWS_AS(parse_config(R"({"beam": {"w0_mm": 1, "w0_um": 1000}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"beam": {"waist": 1}})"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config(R"({"beam": {"waist": 1}})"),
                         doctest::Contains("waist"), ConfigError);
    CHECK_THROWS_AS(parse_config("{nope"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"beam": {"w0_mm": "one"}})"),
                    ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/path/config.json"), ConfigError);
}

TEST_CASE("config validation rejects inconsistent descriptions") {
    const auto expect_invalid = [](const std::string& text) {
        const ExperimentConfig cfg = parse_config(text);
        CHECK_THROWS_AS(validate_config(cfg), ConfigError);
    };
    expect_invalid(R"({"beam": {"m": 0}})");
    expect_invalid(R"({"imaging": {"width_px": 4}})");
    expect_invalid(R"({"sweep": {"parameter": "power_mW", "values": [-1]}})");
    expect_invalid(R"({"sweep": {"parameter": "frequency_THz"}})");
    expect_invalid(
        R"({"sequence": {"tau_ill_us": 0},
            "sweep": {"parameter": "energy_nJ", "values": [1]}})");
    expect_invalid(R"({"output": {"formats": ["bmp"]}})");
    expect_invalid(R"({"output": {"directory": ""}})");
    expect_invalid(
        R"({"sequence": {"scheme": "dark", "gamma1_MHz": 99}})");
    // An explicitly empty sweep list is malformed at parse time already.
    CHECK_THROWS_AS(
        parse_config(R"({"sweep": {"parameter": "power_mW", "values": []}})"),
        ConfigError);
}

TEST_CASE("sweep values convert to SI and apply to the right field") {
    CHECK(rel_err(sweep_value_si("power_mW", 2.0), 2e-3) < 1e-15);
    CHECK(rel_err(sweep_value_si("power_uW", 450.0), 450e-6) < 1e-15);
    CHECK(rel_err(sweep_value_si("tau_ill_us", 35.0), 35e-6) < 1e-15);
    CHECK(rel_err(sweep_value_si("tau2_us", 565.0), 565e-6) < 1e-15);
    CHECK(rel_err(sweep_value_si("energy_nJ", 1.3), 1.3e-9) < 1e-15);
    CHECK(rel_err(sweep_value_si("delta_MHz", -0.13), -2.0 * kPi * 0.13e6) <
          1e-12);
    CHECK(known_sweep_parameter("power_mW"));
    CHECK(!known_sweep_parameter("frequency_THz"));

    ExperimentConfig cfg = parse_config("{}");
    cfg.sweep.parameter = "power_mW";
    CHECK(rel_err(with_sweep_value(cfg, 0.8).beam.power, 0.8e-3) < 1e-15);
    cfg.sweep.parameter = "tau_ill_us";
    CHECK(rel_err(with_sweep_value(cfg, 40.0).sequence.tau_ill, 40e-6) <
          1e-15);
    cfg.sweep.parameter = "tau2_us";
    CHECK(rel_err(with_sweep_value(cfg, 100.0).sequence.tau2, 100e-6) < 1e-15);
    cfg.sweep.parameter = "delta_MHz";
    CHECK(rel_err(with_sweep_value(cfg, 1.0).sequence.delta, 2.0 * kPi * 1e6) <
          1e-12);
    cfg.sweep.parameter = "energy_nJ";
    cfg.sequence.tau_ill = 100e-6;
    CHECK(rel_err(with_sweep_value(cfg, 2.0).beam.power, 2e-9 / 100e-6) <
          1e-12);
    cfg.sequence.tau_ill = 0.0;
    CHECK_THROWS_AS(with_sweep_value(cfg, 2.0), ConfigError);
}

TEST_CASE("resolved config serialization is deterministic and complete") {
    const ExperimentConfig cfg = parse_config(R"({
        "sequence": {"scheme": "dark"},
        "sweep": {"parameter": "delta_MHz", "values": [-2, 0, 2]}
    })");
    const std::string a = config_json(cfg);
    const std::string b = config_json(cfg);
    CHECK(a == b);
    const nlohmann::json j = nlohmann::json::parse(a);
    CHECK(j["beam"]["w0_m"].get<double>() == 1.0e-3);
    CHECK(j["sequence"]["scheme"] == "dark");
    CHECK(j["sweep"]["values_si"].size() == 3);
    CHECK(rel_err(j["sweep"]["values_si"][2].get<double>(),
                  2.0 * kPi * 2e6) < 1e-12);
    CHECK(j["imaging"]["noise_seed"].is_null());
}

TEST_CASE("built-in presets are consistent and validate") {
    const std::vector<std::string> ids = preset_ids();
    REQUIRE(ids.size() == 8);
    CHECK(optics_preset("fig1"));
    CHECK(!optics_preset("fig3a"));
    CHECK(curve_preset("fig6"));
    CHECK(!curve_preset("fig5"));
    for (const std::string& id : ids) {
        const std::vector<ExperimentConfig> configs = preset_configs(id);
        CHECK(!configs.empty());
        for (const ExperimentConfig& cfg : configs) validate_config(cfg);
    }
    CHECK(preset_configs("fig5").size() == 5);
    CHECK_THROWS_AS(preset_configs("fig99"), UnknownFigure);
    CHECK_THROWS_AS(reproduce("fig99"), UnknownFigure);
}

TEST_CASE("experiment runs are reproducible byte for byte") {
    ExperimentConfig cfg = parse_config(R"({
        "name": "tiny",
        "beam": {"polarizer": true},
        "cloud": {"n_atoms": 800, "seed": 5, "temperature_uK": 45,
                  "sigma0_um": 100},
        "sequence": {"tau1_ms": 1.2, "tau_ill_us": 35, "tau2_us": 565},
        "imaging": {"width_px": 64, "height_px": 64, "pixel_um": 12},
        "sweep": {"parameter": "power_mW", "values": [0, 0.4]},
        "output": {"formats": ["csv", "pgm", "json"]}
    })");
    validate_config(cfg);

    RunOptions opts;
    opts.threads = 2;
    opts.out_dir = fresh_dir("runA").string();
    const RunSummary first = run_experiment(cfg, opts);
    CHECK(std::filesystem::exists(first.directory / "manifest.json"));
    CHECK(std::filesystem::exists(first.directory / "summary.csv"));
    CHECK(std::filesystem::exists(first.directory / "image_00.pgm"));
    CHECK(std::filesystem::exists(first.directory / "image_01.pgm"));
    CHECK(std::filesystem::exists(first.directory / "ensemble_00.csv"));
    CHECK(std::filesystem::exists(first.directory / "ensemble_01.csv"));

    RunOptions opts2 = opts;
    opts2.out_dir = fresh_dir("runB").string();
    opts2.threads = 4;
    const RunSummary second = run_experiment(cfg, opts2);
    for (const std::filesystem::path& artifact : first.artifacts) {
        const std::filesystem::path other =
            second.directory / artifact.filename();
        CAPTURE(artifact.filename().string());
        CHECK(read_file(artifact) == read_file(other));
    }

    const nlohmann::json manifest =
        nlohmann::json::parse(read_file(first.directory / "manifest.json"));
    CHECK(manifest["version"].is_string());
    CHECK(manifest["config_hash"].is_string());
    // The manifest lists everything written before itself.
    CHECK(manifest["artifacts"].size() + 1 == first.artifacts.size());

    // Image normalization mode changes the later frames, not the first.
    RunOptions norm_opts = opts;
    norm_opts.out_dir = fresh_dir("runC").string();
    norm_opts.norm_each = true;
    const RunSummary per_image = run_experiment(cfg, norm_opts);
    CHECK(read_file(first.directory / "image_00.pgm") ==
          read_file(per_image.directory / "image_00.pgm"));
    CHECK(read_file(first.directory / "image_01.pgm") !=
          read_file(per_image.directory / "image_01.pgm"));

    std::filesystem::remove_all(first.directory);
    std::filesystem::remove_all(second.directory);
    std::filesystem::remove_all(per_image.directory);
}

TEST_CASE("dark-scheme run writes the width table and curvature fit") {
    ExperimentConfig cfg = parse_config(R"({
        "name": "tinydark",
        "beam": {"alpha0_cm4": 1.2e5, "isat_mW_cm2": 16.3},
        "cloud": {"n_atoms": 6000, "seed": 3, "temperature_uK": 17.387,
                  "sigma0_um": 100},
        "sequence": {"scheme": "dark", "tau1_ms": 4.5, "tau_ill_us": 40,
                     "tau2_us": 50},
        "imaging": {"width_px": 128, "height_px": 128, "pixel_um": 10},
        "sweep": {"parameter": "energy_nJ", "values": [0.5, 1.3, 2.6, 5.2]},
        "output": {"formats": ["csv", "json"]}
    })");
    validate_config(cfg);

    RunOptions opts;
    opts.threads = 2;
    opts.out_dir = fresh_dir("dark").string();
    const RunSummary run = run_experiment(cfg, opts);
    CHECK(std::filesystem::exists(run.directory / "widths.csv"));
    CHECK(std::filesystem::exists(run.directory / "manifest.json"));
    REQUIRE(std::filesystem::exists(run.directory / "fit_beta0.json"));

    const nlohmann::json fit =
        nlohmann::json::parse(read_file(run.directory / "fit_beta0.json"));
    CHECK(fit["n_points"].get<int>() >= 3);
    CHECK(fit["beta0_si"].get<double>() > 0.0);
    CHECK(fit["sigma0_um"].get<double>() > 100.0);

    const std::string widths = read_file(run.directory / "widths.csv");
    CHECK(widths.rfind("E_ill_nJ,sigma_x_um,sigma_y_um\n", 0) == 0);

    std::filesystem::remove_all(run.directory);
}

TEST_CASE("analytic width-curve preset reports the scaling exponent") {
    RunOptions opts;
    opts.out_dir = fresh_dir("curve").string();
    const RunSummary run = reproduce("fig6", opts);
    CHECK(std::filesystem::exists(run.directory / "curve.csv"));
    REQUIRE(std::filesystem::exists(run.directory / "asymptote.json"));
    const nlohmann::json j =
        nlohmann::json::parse(read_file(run.directory / "asymptote.json"));
    const double slope = j["slope_loglog"].get<double>();
    CHECK(slope < -0.48);
    CHECK(slope > -0.52);
    CHECK(j["sigma0_um"].get<double>() > 0.0);
    CHECK(j["beta0_tilde_si"].get<double>() > 0.0);
    std::filesystem::remove_all(run.directory);
}
