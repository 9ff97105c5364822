/// \file
/// Executes configured experiments end to end: sample the cloud, run the
/// selected shaping scheme per sweep value, image the result, extract the
/// observables, and write the artifacts (images, tables, fit reports, and a
/// manifest with the fully resolved config).

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cloudshape/config.hpp"

namespace cloudshape {

/// Command-line overrides; unset fields fall back to the config or to the
/// preset's own default.
struct RunOptions {
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<std::vector<std::string>> formats;
    /// Image grayscale scaling: false = relative to the first sweep point's
    /// maximum, true = each image to its own maximum.
    std::optional<bool> norm_each;
    int threads = 0;  ///< worker threads; 0 = hardware concurrency
};

/// Where one run wrote its results.
struct RunSummary {
    std::filesystem::path directory;
    std::vector<std::filesystem::path> artifacts;
};

/// Runs one experiment config. Sweep points execute independently (in
/// parallel across points) and write their artifacts atomically; a
/// summary table, scheme-specific fit reports, and manifest.json complete
/// the set. Per-point ensemble CSVs are written only for ensembles of at
/// most 50000 atoms to keep artifact sizes sane.
RunSummary run_experiment(const ExperimentConfig& config,
                          const RunOptions& options = {});

/// Runs a built-in preset by id (see preset_ids()). Most ids map to one
/// run_experiment call; the optics id renders analytic intensity maps with
/// line scans, the curve id evaluates the analytic width law, and the
/// pump-series id executes its sub-runs and adds a merged width table plus
/// the width-law fit. Throws UnknownFigure for unknown ids.
RunSummary reproduce(const std::string& figure_id,
                     const RunOptions& options = {});

}  // namespace cloudshape
