/// \file io.cpp
/// Artifact serialization.

#include "cloudshape/io.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cloudshape/errors.hpp"

namespace cloudshape {

void write_file_atomic(const std::filesystem::path& path,
                       const std::string& content) {
    const std::filesystem::path dir = path.parent_path();
    if (!dir.empty()) std::filesystem::create_directories(dir);
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error("write_file_atomic: cannot open " + tmp.string());
        }
        out.write(content.data(),
                  static_cast<std::streamsize>(content.size()));
        if (!out) {
            throw Error("write_file_atomic: short write to " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

std::string ensemble_csv(const std::vector<Atom>& atoms) {
    std::string out = "atom_id,x,y,z,vx,vy,vz,weight,p11,p22,pee\n";
    for (const Atom& a : atoms) {
        out += std::to_string(a.id);
        for (const double v : {a.r.x, a.r.y, a.r.z, a.v.x, a.v.y, a.v.z,
                               a.weight, a.p11, a.p22, a.pee}) {
            out += ',';
            out += format_number(v);
        }
        out += '\n';
    }
    return out;
}

std::string trajectory_csv(
    const std::vector<std::pair<std::uint64_t,
                                std::vector<TrajectorySample>>>& tracks) {
    std::string out = "atom_id,t,x,y,z,vx,vy,vz\n";
    for (const auto& [id, samples] : tracks) {
        for (const TrajectorySample& s : samples) {
            out += std::to_string(id);
            for (const double v :
                 {s.t, s.r.x, s.r.y, s.r.z, s.v.x, s.v.y, s.v.z}) {
                out += ',';
                out += format_number(v);
            }
            out += '\n';
        }
    }
    return out;
}

std::string width_table_csv(const std::vector<WidthRow>& rows) {
    std::string out = "E_ill_nJ,sigma_x_um,sigma_y_um\n";
    for (const WidthRow& r : rows) {
        out += format_number(r.e_ill_nj);
        out += ',';
        out += format_number(r.sigma_x_um);
        out += ',';
        out += format_number(r.sigma_y_um);
        out += '\n';
    }
    return out;
}

std::string numeric_csv(const std::vector<std::string>& columns,
                        const std::vector<std::vector<double>>& rows) {
    std::string out;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) out += ',';
        out += columns[i];
    }
    out += '\n';
    for (const auto& row : rows) {
        if (row.size() != columns.size()) {
            throw Error("numeric_csv: row width differs from header");
        }
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += format_number(row[i]);
        }
        out += '\n';
    }
    return out;
}

std::string pgm16(const Image& img, double norm) {
    if (norm <= 0.0) throw Error("pgm16: normalization must be positive");
    std::ostringstream head;
    head << "P5\n" << img.width << " " << img.height << "\n65535\n";
    std::string out = head.str();
    out.reserve(out.size() + img.v.size() * 2);
    for (const double raw : img.v) {
        double scaled = std::isfinite(raw) ? raw / norm : 0.0;
        scaled = std::min(1.0, std::max(0.0, scaled));
        const auto value = static_cast<unsigned>(std::lround(scaled * 65535.0));
        out += static_cast<char>((value >> 8) & 0xff);
        out += static_cast<char>(value & 0xff);
    }
    return out;
}

std::string fit_report_json(const FitResult& fit,
                            const std::vector<std::string>& names) {
    nlohmann::json doc;
    doc["params"] = nlohmann::json::object();
    for (std::size_t i = 0; i < fit.params.size(); ++i) {
        const std::string key =
            i < names.size() ? names[i] : "p" + std::to_string(i);
        doc["params"][key] = fit.params[i];
        doc["stderr"][key] = fit.stderr_of(i);
    }
    doc["residual_norm"] = fit.residual_norm;
    doc["n_iter"] = fit.n_iter;
    doc["converged"] = fit.converged;
    doc["ill_conditioned"] = fit.ill_conditioned;
    return doc.dump(2) + "\n";
}

}  // namespace cloudshape
