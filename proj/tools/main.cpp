/// \file
/// Command-line runner: executes experiments from a JSON config or a
/// built-in preset, and prints the hyperfine transition-strength table via
/// the `sat` subcommand.
///
/// Exit codes: 0 success, 2 configuration error, 3 numerical failure,
/// 4 unknown preset.

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cloudshape/atomic_structure.hpp"
#include "cloudshape/config.hpp"
#include "cloudshape/constants.hpp"
#include "cloudshape/errors.hpp"
#include "cloudshape/presets.hpp"
#include "cloudshape/runner.hpp"

namespace {

using nlohmann::json;
using namespace cloudshape;

struct SatRow {
    int F;
    int Fp;
    const char* scheme_name;
    PumpScheme scheme;
    PopulationsMode mode;
    const char* mode_name;
};

const char* mode_label(PopulationsMode mode) {
    switch (mode) {
        case PopulationsMode::uniform: return "uniform";
        case PopulationsMode::stretched: return "stretched";
        case PopulationsMode::steady_state: return "steady-state";
    }
    return "?";
}

int run_sat(bool as_json) {
    const PumpScheme sigma_plus{{1.0, 0.0, 0.0}};
    const PumpScheme sigma_mix{{0.5, 0.0, 0.5}};
    const std::vector<SatRow> rows = {
        {2, 3, "sigma+", sigma_plus, PopulationsMode::stretched, nullptr},
        {2, 3, "sigma+/-", sigma_mix, PopulationsMode::steady_state, nullptr},
        {2, 2, "sigma+/-", sigma_mix, PopulationsMode::uniform, nullptr},
        {2, 2, "sigma+/-", sigma_mix, PopulationsMode::steady_state, nullptr},
        {2, 2, "sigma+/-", sigma_mix, PopulationsMode::stretched, nullptr},
    };

    json out;
    out["reference_isat_mW_cm2"] = units::W_m2_to_mW_cm2(rb87::isat_cycling);
    json table = json::array();

    if (!as_json) {
        std::printf("%-8s %-9s %-13s %10s %16s\n", "F -> F'", "light",
                    "populations", "dbar^2", "I_sat [mW/cm^2]");
    }
    for (const SatRow& row : rows) {
        const double isat = effective_isat(row.F, row.Fp, row.scheme, row.mode);
        const double dbar_sq = rb87::isat_cycling * 0.5 / isat;
        if (as_json) {
            json r;
            r["F"] = row.F;
            r["Fp"] = row.Fp;
            r["light"] = row.scheme_name;
            r["populations"] = mode_label(row.mode);
            r["dbar_sq"] = dbar_sq;
            r["isat_W_m2"] = isat;
            r["isat_mW_cm2"] = units::W_m2_to_mW_cm2(isat);
            table.push_back(r);
        } else {
            std::printf("%d -> %-3d %-9s %-13s %10.6f %16.3f\n", row.F, row.Fp,
                        row.scheme_name, mode_label(row.mode), dbar_sq,
                        units::W_m2_to_mW_cm2(isat));
        }
    }

    json pops = json::object();
    for (const int fp : {3, 2}) {
        const SublevelPopulations p =
            steady_state_populations(2, fp, PumpScheme{{0.5, 0.0, 0.5}});
        if (as_json) {
            pops["F2_to_Fp" + std::to_string(fp)] = p.p;
        } else {
            std::printf("\nsteady state, F=2 -> F'=%d (m = -2..2):", fp);
            for (const double v : p.p) std::printf(" %.6f", v);
            std::printf("\n");
        }
    }

    if (as_json) {
        out["transitions"] = table;
        out["steady_state_populations"] = pops;
        std::printf("%s\n", out.dump(2).c_str());
    }
    return 0;
}

int dispatch(int argc, char** argv) {
    CLI::App app{"Vortex-beam cold-atom cloud shaping toolkit"};
    app.require_subcommand(0, 1);

    std::string config_path;
    std::string preset_id;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    int threads = 0;
    std::vector<std::string> formats;
    std::string norm;

    app.add_option("--config", config_path, "JSON experiment description");
    app.add_option("--preset", preset_id,
                   "Built-in experiment id (fig1, fig3a, fig3b, fig3c, fig4, "
                   "fig5, fig6, fig7)");
    app.add_option("--out", out_dir, "Output directory override");
    app.add_option("--seed", seed, "Cloud sampling seed override");
    app.add_option("--threads", threads,
                   "Worker threads; 1 = bit-deterministic reference mode, "
                   "0 = all cores");
    app.add_option("--format", formats, "Artifact formats (repeatable)")
        ->check(CLI::IsMember({"csv", "pgm", "json"}));
    app.add_option("--norm", norm, "Image grayscale scaling")
        ->check(CLI::IsMember({"first", "each"}));

    bool sat_json = false;
    CLI::App* sat =
        app.add_subcommand("sat", "Print the transition-strength table");
    sat->add_flag("--json", sat_json, "Emit JSON instead of text");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (sat->parsed()) return run_sat(sat_json);

    if (config_path.empty() == preset_id.empty()) {
        std::fprintf(stderr,
                     "error: exactly one of --config or --preset is "
                     "required\n");
        return 2;
    }

    RunOptions options;
    if (!out_dir.empty()) options.out_dir = out_dir;
    if (seed) options.seed = *seed;
    if (!formats.empty()) options.formats = formats;
    if (!norm.empty()) options.norm_each = (norm == "each");
    options.threads = threads;

    const RunSummary summary =
        preset_id.empty() ? run_experiment(load_config(config_path), options)
                          : reproduce(preset_id, options);

    std::printf("wrote %zu artifacts under %s\n", summary.artifacts.size(),
                summary.directory.string().c_str());
    for (const auto& path : summary.artifacts) {
        std::printf("  %s\n", path.string().c_str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const UnknownFigure& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
