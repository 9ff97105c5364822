/// \file
/// Experiment orchestration: the per-sweep-point pipelines for both shaping
/// schemes, the optics-map and analytic-curve presets, artifact writing, and
/// manifest generation. Sweep points are independent and run in parallel;
/// when several points run at once each one integrates its atoms on a
/// single thread, so results never depend on the schedule.

#include "cloudshape/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <thread>
#include <utility>

#include <nlohmann/json.hpp>

#include "cloudshape/cloud.hpp"
#include "cloudshape/constants.hpp"
#include "cloudshape/dark_state.hpp"
#include "cloudshape/dynamic_shaping.hpp"
#include "cloudshape/errors.hpp"
#include "cloudshape/fit.hpp"
#include "cloudshape/fresnel.hpp"
#include "cloudshape/imaging.hpp"
#include "cloudshape/io.hpp"
#include "cloudshape/presets.hpp"
#include "cloudshape/vortex_field.hpp"

namespace cloudshape {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr char kVersion[] = "1.0.0";
constexpr double kTwoPi = 6.283185307179586;
/// Ensembles larger than this are not dumped per point.
constexpr std::size_t kMaxEnsembleDump = 50000;
/// Central slab |y| < 25 um used for the removal-fraction observable.
constexpr double kSlabHalfWidth = 25e-6;

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(h));
    return buf;
}

std::string point_tag(std::size_t i) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "%02zu", i);
    return buf;
}

/// One run's resolved config, destination, and collected artifacts.
struct Context {
    ExperimentConfig cfg;
    fs::path dir;
    bool want_csv = false;
    bool want_pgm = false;
    bool want_json = false;
    bool norm_each = false;
    int threads = 0;
    std::vector<std::string> artifacts;  ///< paths relative to dir
    std::mutex mutex;

    void write(const std::string& rel, const std::string& content) {
        write_file_atomic(dir / rel, content);
        std::lock_guard<std::mutex> lock(mutex);
        artifacts.push_back(rel);
    }

    std::vector<std::string> sorted_artifacts() const {
        std::vector<std::string> rels = artifacts;
        std::sort(rels.begin(), rels.end());
        return rels;
    }
};

void init_context(Context& ctx, const ExperimentConfig& config,
                  const RunOptions& options, bool default_norm_each) {
    ctx.cfg = config;
    if (options.seed) ctx.cfg.cloud.seed = *options.seed;
    if (options.formats) ctx.cfg.output.formats = *options.formats;
    if (options.out_dir) ctx.cfg.output.directory = *options.out_dir;
    validate_config(ctx.cfg);
    ctx.dir = fs::path(ctx.cfg.output.directory);
    for (const std::string& f : ctx.cfg.output.formats) {
        ctx.want_csv = ctx.want_csv || f == "csv";
        ctx.want_pgm = ctx.want_pgm || f == "pgm";
        ctx.want_json = ctx.want_json || f == "json";
    }
    ctx.norm_each = options.norm_each.value_or(default_norm_each);
    ctx.threads = options.threads;
}

RunSummary summarize(const Context& ctx) {
    RunSummary s;
    s.directory = ctx.dir;
    for (const std::string& rel : ctx.sorted_artifacts()) {
        s.artifacts.push_back(ctx.dir / rel);
    }
    return s;
}

void write_manifest(Context& ctx, const json& extra = json::object()) {
    const std::string resolved = config_json(ctx.cfg);
    json j = json::parse(resolved);
    j["version"] = kVersion;
    j["config_hash"] = fnv1a_hex(resolved);
    j["norm"] = ctx.norm_each ? "each" : "first";
    for (const auto& [key, value] : extra.items()) j[key] = value;
    j["artifacts"] = ctx.sorted_artifacts();
    ctx.write("manifest.json", j.dump(2) + "\n");
}

/// Runs `body(i, inner_threads)` for every sweep point. Points execute in
/// parallel; the inner thread budget collapses to one whenever more than one
/// point runs at a time.
void run_points(const Context& ctx, std::size_t n,
                const std::function<void(std::size_t, int)>& body) {
    unsigned workers = ctx.threads > 0
                           ? static_cast<unsigned>(ctx.threads)
                           : std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    workers = static_cast<unsigned>(
        std::min<std::size_t>(workers, n ? n : std::size_t{1}));
    if (workers <= 1) {
        const int inner = ctx.threads > 0 ? ctx.threads : 0;
        for (std::size_t i = 0; i < n; ++i) body(i, inner);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i; (i = next.fetch_add(1)) < n;) body(i, 1);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (std::thread& t : pool) t.join();
    for (const std::exception_ptr& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

void drift(std::vector<Atom>& atoms, double t, double gravity) {
    if (t <= 0.0) return;
    for (Atom& a : atoms) {
        a.r += a.v * t;
        a.r.y -= 0.5 * gravity * t * t;
        a.v.y -= gravity * t;
    }
}

Image transpose(const Image& img) {
    Image t;
    t.width = img.height;
    t.height = img.width;
    t.v.assign(img.v.size(), 0.0);
    for (int iy = 0; iy < img.height; ++iy) {
        for (int ix = 0; ix < img.width; ++ix) {
            t.at(iy, ix) = img.at(ix, iy);
        }
    }
    return t;
}

double positive_max(const Image& img) {
    double m = 0.0;
    for (double v : img.v) {
        if (std::isfinite(v) && v > m) m = v;
    }
    return m;
}

/// Mean of the central 5x5 finite pixels. [1/m^2]
double center_density(const Image& img) {
    const int cx = img.width / 2;
    const int cy = img.height / 2;
    double sum = 0.0;
    int count = 0;
    for (int iy = cy - 2; iy <= cy + 2; ++iy) {
        for (int ix = cx - 2; ix <= cx + 2; ++ix) {
            if (ix < 0 || iy < 0 || ix >= img.width || iy >= img.height) {
                continue;
            }
            const double v = img.at(ix, iy);
            if (std::isfinite(v)) {
                sum += v;
                ++count;
            }
        }
    }
    return count > 0 ? sum / count : 0.0;
}

/// Projects, synthesizes the camera frames, and inverts them back to a
/// measured column density. The noise stream is offset per point so sweep
/// points see independent noise.
Image image_point(const std::vector<Atom>& atoms, const ImagingConfig& base,
                  std::size_t point_index) {
    ImagingConfig ic = base;
    if (ic.noise_seed) *ic.noise_seed += point_index;
    const Image n2d = project_ensemble(atoms, ic);
    const AbsorptionImage frames = synthesize_absorption(n2d, ic);
    return invert_absorption(frames, ic);
}

void write_images(Context& ctx, const std::vector<Image>& images) {
    if (!ctx.want_pgm || images.empty()) return;
    const double norm_first = positive_max(images[0]);
    for (std::size_t i = 0; i < images.size(); ++i) {
        double norm = ctx.norm_each ? positive_max(images[i]) : norm_first;
        if (norm <= 0.0) norm = 1.0;
        ctx.write("image_" + point_tag(i) + ".pgm", pgm16(images[i], norm));
    }
}

VortexBeamModel model_from_beam(const BeamConfig& b, double power) {
    VortexBeamModel model;
    model.beam = GaussianBeam::from_power(b.w0, b.lambda, power);
    model.plate.m = b.m;
    model.plate.z_plate = b.z_plate;
    if (b.polarizer) model.polarizer_axis = b.polarizer_axis;
    return model;
}

void run_dynamic(Context& ctx) {
    const ExperimentConfig& cfg = ctx.cfg;
    const VortexBeamModel model = model_from_beam(cfg.beam, 1.0);

    DynamicRun proto;
    configure_beam_from_model(proto, model, cfg.beam.alpha0, cfg.beam.i_sat);
    proto.gravity = cfg.sequence.gravity ? constants::g_earth : 0.0;

    const std::size_t n = cfg.sweep.values.size();
    std::vector<std::vector<double>> rows(n);
    std::vector<Image> images(n);

    run_points(ctx, n, [&](std::size_t i, int inner_threads) {
        const ExperimentConfig point = with_sweep_value(cfg, cfg.sweep.values[i]);
        DynamicRun run = proto;
        run.power = point.beam.power;
        run.tau1 = point.sequence.tau1;
        run.tau_ill = point.sequence.tau_ill;
        run.tau2 = point.sequence.tau2;
        run.threads = inner_threads;

        TwoLevelParams p;
        p.delta = point.sequence.delta;
        p.i_sat = point.beam.i_sat;

        const std::vector<Atom> atoms = sample_cloud(point.cloud);
        const std::vector<Atom> shaped = simulate_dynamic(atoms, run, p);

        images[i] = image_point(shaped, point.imaging, i);

        double max_vz = 0.0;
        for (const Atom& a : shaped) max_vz = std::max(max_vz, a.v.z);
        rows[i] = {cfg.sweep.values[i],
                   weighted_slab_fraction(shaped, kSlabHalfWidth),
                   center_density(images[i]), max_vz};

        if (ctx.want_csv && shaped.size() <= kMaxEnsembleDump) {
            ctx.write("ensemble_" + point_tag(i) + ".csv", ensemble_csv(shaped));
        }
    });

    write_images(ctx, images);
    if (ctx.want_csv) {
        ctx.write("summary.csv",
                  numeric_csv({cfg.sweep.parameter, "slab_fraction",
                               "center_density_m2", "max_vz_m_s"},
                              rows));
    }
    write_manifest(ctx);
}

/// Width table and the sigma0 value the fits keep fixed.
struct DarkOutput {
    std::vector<WidthRow> widths;
    double sigma0 = 0.0;
};

DarkOutput run_dark(Context& ctx) {
    const ExperimentConfig& cfg = ctx.cfg;
    const bool delta_sweep = cfg.sweep.parameter == "delta_MHz";
    const double gravity = cfg.sequence.gravity ? constants::g_earth : 0.0;

    const std::size_t n = cfg.sweep.values.size();
    std::vector<WidthRow> widths(n);
    std::vector<double> sigma_y_si(n, 0.0);
    std::vector<Image> images(n);

    run_points(ctx, n, [&](std::size_t i, int) {
        const ExperimentConfig point = with_sweep_value(cfg, cfg.sweep.values[i]);

        ThreeLevelParams p;
        p.gamma1 = point.sequence.gamma1;
        p.gamma2 = rb87::gamma_d2 - p.gamma1;
        p.delta = point.sequence.delta;
        p.i_sat = point.beam.i_sat;

        const DarkPulse pulse{point.beam.power, point.sequence.tau_ill,
                              point.beam.alpha0};

        std::vector<Atom> atoms = sample_cloud(point.cloud);
        drift(atoms, point.sequence.tau1, gravity);
        pump_ensemble(atoms, pulse, p);
        drift(atoms, point.sequence.tau2, gravity);

        images[i] = image_point(atoms, point.imaging, i);
        const double sy = extract_width(images[i], point.imaging);
        const double sx = extract_width(transpose(images[i]), point.imaging);
        sigma_y_si[i] = sy;
        widths[i] = {pulse.energy() * 1e9, sx * 1e6, sy * 1e6};

        if (ctx.want_csv && atoms.size() <= kMaxEnsembleDump) {
            ctx.write("ensemble_" + point_tag(i) + ".csv", ensemble_csv(atoms));
        }
    });

    write_images(ctx, images);

    DarkOutput out;
    out.widths = widths;
    out.sigma0 = expansion_width(cfg.cloud.sigma0.y, cfg.cloud.temperature,
                                 cfg.sequence.tau1);

    if (ctx.want_csv) {
        if (delta_sweep) {
            std::vector<std::vector<double>> rows(n);
            for (std::size_t i = 0; i < n; ++i) {
                rows[i] = {cfg.sweep.values[i], widths[i].sigma_x_um,
                           widths[i].sigma_y_um};
            }
            ctx.write("summary.csv",
                      numeric_csv({"delta_MHz", "sigma_x_um", "sigma_y_um"},
                                  rows));
        } else {
            ctx.write("widths.csv", width_table_csv(widths));
        }
    }

    if (ctx.want_json && delta_sweep && n >= 5) {
        std::vector<double> deltas(n);
        for (std::size_t i = 0; i < n; ++i) {
            deltas[i] = sweep_value_si("delta_MHz", cfg.sweep.values[i]);
        }
        const double e_ill = cfg.beam.power * cfg.sequence.tau_ill;
        const DetuningFit df =
            fit_detuning_series(deltas, sigma_y_si, out.sigma0,
                                cfg.sequence.gamma1, rb87::gamma_d2, e_ill);
        json j = json::parse(fit_report_json(
            df.detail, {"c", "delta0_over_gamma", "log10_beta0"}));
        j["c"] = df.c;
        j["delta0_MHz"] = df.delta0 / (kTwoPi * 1e6);
        j["beta0_si"] = df.beta0;
        j["beta0_per_mW_cm2"] = df.beta0 / 1e7;
        j["sigma0_um"] = out.sigma0 * 1e6;
        j["e_ill_nJ"] = e_ill * 1e9;
        ctx.write("fit_detuning.json", j.dump(2) + "\n");
    }

    if (ctx.want_json && !delta_sweep) {
        std::vector<double> e_pos;
        std::vector<double> s_pos;
        for (std::size_t i = 0; i < n; ++i) {
            if (widths[i].e_ill_nj > 0.0) {
                e_pos.push_back(widths[i].e_ill_nj * 1e-9);
                s_pos.push_back(sigma_y_si[i]);
            }
        }
        if (e_pos.size() >= 3) {
            const double beta0 =
                fit_energy_series(e_pos, s_pos, out.sigma0, cfg.sequence.gamma1,
                                  cfg.sequence.delta, rb87::gamma_d2);
            json j;
            j["beta0_si"] = beta0;
            j["beta0_per_mW_cm2"] = beta0 / 1e7;
            j["sigma0_um"] = out.sigma0 * 1e6;
            j["n_points"] = e_pos.size();
            ctx.write("fit_beta0.json", j.dump(2) + "\n");
        }
    }

    write_manifest(ctx);
    return out;
}

void run_optics(Context& ctx) {
    const ExperimentConfig& cfg = ctx.cfg;
    const double power = cfg.beam.power > 0.0 ? cfg.beam.power : 1e-3;
    BeamConfig plain_beam = cfg.beam;
    plain_beam.polarizer = false;
    const VortexBeamModel plain = model_from_beam(plain_beam, power);
    VortexBeamModel polarized = plain;
    polarized.polarizer_axis = cfg.beam.polarizer_axis;

    const double z0 = plain.beam.z0();
    const double z_plate = cfg.beam.z_plate;
    struct MapSpec {
        const char* name;
        double z;
        const VortexBeamModel* model;
        bool scan;
    };
    const MapSpec maps[] = {
        {"a", z_plate, &plain, false},
        {"b", z_plate + 0.05 * z0, &plain, true},
        {"c", z_plate + 0.5 * z0, &plain, true},
        {"d", z_plate + 0.5 * z0, &polarized, true},
    };

    const int n = cfg.imaging.width;
    json meta = json::object();
    std::vector<Image> images;
    for (const MapSpec& spec : maps) {
        const double half = default_half_width(plain.beam, spec.z);
        const FieldGrid grid = sample_vortex(*spec.model, spec.z, n, half);
        Image img;
        img.width = n;
        img.height = n;
        img.v.resize(static_cast<std::size_t>(n) * n);
        for (int iy = 0; iy < n; ++iy) {
            for (int ix = 0; ix < n; ++ix) {
                const std::size_t idx = grid.index(ix, iy);
                img.at(ix, iy) =
                    std::norm(grid.ex[idx]) + std::norm(grid.ey[idx]);
            }
        }
        images.push_back(std::move(img));
        meta[std::string("map_") + spec.name] = {
            {"z_m", spec.z}, {"half_width_m", half}, {"n", n}};

        if (spec.scan && ctx.want_csv) {
            const double alpha = curvature_analytic(*spec.model, spec.z);
            const int n_scan = 801;
            std::vector<std::vector<double>> rows;
            rows.reserve(n_scan);
            for (int i = 0; i < n_scan; ++i) {
                const double y = -half + 2.0 * half * i / (n_scan - 1);
                const double phi = y >= 0.0 ? kTwoPi / 4.0 : -kTwoPi / 4.0;
                const double intensity =
                    vortex_intensity(*spec.model, std::abs(y), phi, spec.z);
                rows.push_back(
                    {y * 1e6, intensity, 0.5 * alpha * y * y});
            }
            ctx.write(std::string("scan_") + spec.name + ".csv",
                      numeric_csv({"y_um", "intensity_W_m2", "core_W_m2"},
                                  rows));
        }
    }

    if (ctx.want_pgm) {
        const double norm_first = positive_max(images[0]);
        for (std::size_t i = 0; i < images.size(); ++i) {
            double norm = ctx.norm_each ? positive_max(images[i]) : norm_first;
            if (norm <= 0.0) norm = 1.0;
            ctx.write(std::string("map_") + maps[i].name + ".pgm",
                      pgm16(images[i], norm));
        }
    }

    write_manifest(ctx, json{{"maps", meta}});
}

void run_curve(Context& ctx) {
    const ExperimentConfig& cfg = ctx.cfg;

    ThreeLevelParams p;
    p.gamma1 = cfg.sequence.gamma1;
    p.gamma2 = rb87::gamma_d2 - p.gamma1;
    p.delta = cfg.sequence.delta;
    p.i_sat = cfg.beam.i_sat;

    const DarkPulse proto{0.0, cfg.sequence.tau_ill, cfg.beam.alpha0};
    const double bt = beta0_tilde(proto, p);
    const double sigma0 = expansion_width(
        cfg.cloud.sigma0.y, cfg.cloud.temperature, cfg.sequence.tau1);

    std::vector<std::vector<double>> rows;
    std::vector<double> log_e;
    std::vector<double> log_s;
    for (double e_nj : cfg.sweep.values) {
        const double e = e_nj * 1e-9;
        const double sigma = shaped_width(sigma0, p.gamma1, bt, e);
        const double asym = e > 0.0
                                ? sigma_s(p.gamma1, bt, e)
                                : std::numeric_limits<double>::quiet_NaN();
        rows.push_back({e_nj, sigma * 1e6, asym * 1e6});
        if (e_nj >= 1.0 - 1e-12) {
            log_e.push_back(std::log10(e_nj));
            log_s.push_back(std::log10(sigma * 1e6));
        }
    }

    if (ctx.want_csv) {
        ctx.write("curve.csv",
                  numeric_csv({"E_ill_nJ", "sigma_y_um", "asymptote_um"},
                              rows));
    }

    json extra = json::object();
    if (log_e.size() >= 2) {
        double mx = 0.0, my = 0.0;
        for (std::size_t i = 0; i < log_e.size(); ++i) {
            mx += log_e[i];
            my += log_s[i];
        }
        mx /= static_cast<double>(log_e.size());
        my /= static_cast<double>(log_e.size());
        double sxy = 0.0, sxx = 0.0;
        for (std::size_t i = 0; i < log_e.size(); ++i) {
            sxy += (log_e[i] - mx) * (log_s[i] - my);
            sxx += (log_e[i] - mx) * (log_e[i] - mx);
        }
        const double slope = sxy / sxx;
        if (ctx.want_json) {
            json j;
            j["slope_loglog"] = slope;
            j["sigma0_um"] = sigma0 * 1e6;
            j["beta0_tilde_si"] = bt;
            j["sigma_s_1nJ_um"] = sigma_s(p.gamma1, bt, 1e-9) * 1e6;
            ctx.write("asymptote.json", j.dump(2) + "\n");
        }
        extra["slope_loglog"] = slope;
    }

    write_manifest(ctx, extra);
}

RunSummary run_single(const ExperimentConfig& config, const RunOptions& options,
                      bool default_norm_each, bool optics, bool curve,
                      DarkOutput* dark_out) {
    Context ctx;
    init_context(ctx, config, options, default_norm_each);
    if (optics) {
        run_optics(ctx);
    } else if (curve) {
        run_curve(ctx);
    } else if (ctx.cfg.sequence.scheme == SequenceConfig::Scheme::dark_pump) {
        DarkOutput out = run_dark(ctx);
        if (dark_out != nullptr) *dark_out = std::move(out);
    } else {
        run_dynamic(ctx);
    }
    return summarize(ctx);
}

}  // namespace

RunSummary run_experiment(const ExperimentConfig& config,
                          const RunOptions& options) {
    return run_single(config, options, false, false, false, nullptr);
}

RunSummary reproduce(const std::string& figure_id, const RunOptions& options) {
    const std::vector<ExperimentConfig> configs = preset_configs(figure_id);
    if (optics_preset(figure_id)) {
        return run_single(configs[0], options, true, true, false, nullptr);
    }
    if (curve_preset(figure_id)) {
        return run_single(configs[0], options, false, false, true, nullptr);
    }
    if (configs.size() == 1) {
        return run_experiment(configs[0], options);
    }

    // Multi-run preset: execute the sub-runs into subdirectories, then merge
    // the width tables and fit the width law across all of them.
    const fs::path base = options.out_dir
                              ? fs::path(*options.out_dir)
                              : fs::path(configs[0].output.directory)
                                    .parent_path();
    RunSummary total;
    total.directory = base;

    std::vector<WidthRow> merged;
    std::vector<std::string> sub_dirs;
    double sigma0 = 0.0;
    bool any_csv = false;
    bool any_json = false;
    for (const ExperimentConfig& sub : configs) {
        RunOptions sub_options = options;
        const std::string leaf =
            fs::path(sub.output.directory).filename().string();
        sub_options.out_dir = (base / leaf).string();

        DarkOutput out;
        RunSummary s = run_single(sub, sub_options, false, false, false, &out);
        total.artifacts.insert(total.artifacts.end(), s.artifacts.begin(),
                               s.artifacts.end());
        merged.insert(merged.end(), out.widths.begin(), out.widths.end());
        sigma0 = out.sigma0;
        sub_dirs.push_back(leaf);

        const std::vector<std::string>& formats =
            options.formats ? *options.formats : sub.output.formats;
        for (const std::string& f : formats) {
            any_csv = any_csv || f == "csv";
            any_json = any_json || f == "json";
        }
    }

    std::sort(merged.begin(), merged.end(),
              [](const WidthRow& a, const WidthRow& b) {
                  return a.e_ill_nj < b.e_ill_nj;
              });

    std::vector<std::string> top_artifacts;
    auto write_top = [&](const std::string& rel, const std::string& content) {
        write_file_atomic(base / rel, content);
        top_artifacts.push_back(rel);
        total.artifacts.push_back(base / rel);
    };

    if (any_csv) write_top("width_table.csv", width_table_csv(merged));

    if (any_json) {
        std::vector<double> e_pos;
        std::vector<double> s_pos;
        for (const WidthRow& row : merged) {
            if (row.e_ill_nj > 0.0) {
                e_pos.push_back(row.e_ill_nj * 1e-9);
                s_pos.push_back(row.sigma_y_um * 1e-6);
            }
        }
        if (e_pos.size() >= 3) {
            const double beta0 = fit_energy_series(
                e_pos, s_pos, sigma0, configs[0].sequence.gamma1,
                configs[0].sequence.delta, rb87::gamma_d2);
            json j;
            j["beta0_si"] = beta0;
            j["beta0_per_mW_cm2"] = beta0 / 1e7;
            j["sigma0_um"] = sigma0 * 1e6;
            j["n_points"] = e_pos.size();
            write_top("fit_beta0.json", j.dump(2) + "\n");
        }
    }

    json manifest;
    manifest["preset"] = figure_id;
    manifest["version"] = kVersion;
    manifest["sub_runs"] = sub_dirs;
    manifest["sigma0_um"] = sigma0 * 1e6;
    std::sort(top_artifacts.begin(), top_artifacts.end());
    manifest["artifacts"] = top_artifacts;
    write_top("manifest.json", manifest.dump(2) + "\n");

    std::sort(total.artifacts.begin(), total.artifacts.end());
    return total;
}

}  // namespace cloudshape
