/// \file io.hpp
/// Artifact writers: CSV tables, 16-bit binary PGM images, and JSON
/// documents. All writers go through an atomic temp-file-and-rename path so
/// partially written artifacts never appear under their final name.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "cloudshape/cloud.hpp"
#include "cloudshape/dynamic_shaping.hpp"
#include "cloudshape/fit.hpp"
#include "cloudshape/imaging.hpp"

namespace cloudshape {

/// Writes content to path atomically (temp file in the same directory,
/// then rename).
void write_file_atomic(const std::filesystem::path& path,
                       const std::string& content);

/// Compact decimal formatting used by every CSV writer; deterministic
/// across runs.
std::string format_number(double v);

/// CSV with header atom_id,x,y,z,vx,vy,vz,weight,p11,p22,pee (SI units).
std::string ensemble_csv(const std::vector<Atom>& atoms);

/// CSV with header atom_id,t,x,y,z,vx,vy,vz (SI units) for one or more
/// atom trajectories.
std::string trajectory_csv(
    const std::vector<std::pair<std::uint64_t,
                                std::vector<TrajectorySample>>>& tracks);

/// One row of the width-law sweep table.
struct WidthRow {
    double e_ill_nj = 0.0;
    double sigma_x_um = 0.0;
    double sigma_y_um = 0.0;
};

/// CSV with header E_ill_nJ,sigma_x_um,sigma_y_um.
std::string width_table_csv(const std::vector<WidthRow>& rows);

/// Generic numeric table: header names joined by commas, then rows.
std::string numeric_csv(const std::vector<std::string>& columns,
                        const std::vector<std::vector<double>>& rows);

/// Binary 16-bit PGM (P5, big-endian, maxval 65535). Values are scaled by
/// 1/norm and clamped to [0, 1]; NaN pixels map to 0.
std::string pgm16(const Image& img, double norm);

/// JSON report for a fit: params, stderr, residual_norm, n_iter, converged.
std::string fit_report_json(const FitResult& fit,
                            const std::vector<std::string>& names);

}  // namespace cloudshape
