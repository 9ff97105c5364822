/// \file
/// JSON config parsing with unit-suffixed field names, validation, and
/// deterministic SI serialization for manifests.

#include "cloudshape/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include <nlohmann/json.hpp>

#include "cloudshape/errors.hpp"

namespace cloudshape {

namespace {

using nlohmann::json;
using Converter = double (*)(double);

constexpr double kPi = 3.14159265358979323846;

double deg_to_rad(double v) { return v * kPi / 180.0; }
double identity(double v) { return v; }
double nm_to_m(double v) { return v * 1e-9; }

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError("config field '" + path + "': " + what);
}

/// One JSON object with typed, unit-aware accessors. Tracks which keys were
/// consumed so leftovers (typos, unknown units) can be reported.
class Section {
  public:
    Section(const json& j, std::string path) : j_(&j), path_(std::move(path)) {
        if (!j_->is_object()) fail(path_, "expected an object");
    }

    /// Empty section: every accessor returns its fallback.
    explicit Section(std::string path) : j_(nullptr), path_(std::move(path)) {}

    std::string key_path(const std::string& key) const {
        return path_.empty() ? key : path_ + "." + key;
    }

    bool has(const std::string& key) const {
        return j_ != nullptr && j_->contains(key);
    }

    const json& raw(const std::string& key) {
        seen_.insert(key);
        return j_->at(key);
    }

    double number(const std::string& key, double fallback) {
        if (!has(key)) return fallback;
        const json& v = raw(key);
        if (!v.is_number()) fail(key_path(key), "expected a number");
        return v.get<double>();
    }

    /// Reads a quantity that may be written with any of the given unit
    /// suffixes, e.g. base "w0" with {"_mm", "_um"}. At most one spelling
    /// may appear.
    double quantity(const std::string& base,
                    std::initializer_list<std::pair<const char*, Converter>> units,
                    double fallback_si) {
        std::string found;
        double si = fallback_si;
        for (const auto& [suffix, convert] : units) {
            std::string key = base + suffix;
            if (!has(key)) continue;
            if (!found.empty()) {
                fail(key_path(key), "duplicates '" + found + "'");
            }
            si = convert(number(key, 0.0));
            found = std::move(key);
        }
        return si;
    }

    std::int64_t integer(const std::string& key, std::int64_t fallback) {
        if (!has(key)) return fallback;
        const json& v = raw(key);
        if (!v.is_number_integer()) fail(key_path(key), "expected an integer");
        return v.get<std::int64_t>();
    }

    bool boolean(const std::string& key, bool fallback) {
        if (!has(key)) return fallback;
        const json& v = raw(key);
        if (!v.is_boolean()) fail(key_path(key), "expected true or false");
        return v.get<bool>();
    }

    std::string text(const std::string& key, const std::string& fallback) {
        if (!has(key)) return fallback;
        const json& v = raw(key);
        if (!v.is_string()) fail(key_path(key), "expected a string");
        return v.get<std::string>();
    }

    /// Rejects keys that no accessor consumed.
    void finish() {
        if (j_ == nullptr) return;
        for (const auto& [key, value] : j_->items()) {
            if (seen_.count(key) == 0) {
                fail(key_path(key), "unknown field");
            }
        }
    }

    const json* object() const { return j_; }

  private:
    const json* j_;
    std::string path_;
    std::set<std::string> seen_;
};

Section subsection(Section& parent, const std::string& key) {
    if (!parent.has(key)) return Section(parent.key_path(key));
    return Section(parent.raw(key), parent.key_path(key));
}

const std::map<std::string, Converter>& sweep_units() {
    static const std::map<std::string, Converter> table{
        {"power_mW", units::mW_to_W},   {"power_uW", units::uW_to_W},
        {"tau_ill_us", units::us_to_s}, {"tau2_us", units::us_to_s},
        {"energy_nJ", units::nJ_to_J},  {"delta_MHz", units::MHz_to_rad_s},
    };
    return table;
}

void parse_beam(Section& s, BeamConfig& beam) {
    beam.w0 = s.quantity("w0", {{"_mm", units::mm_to_m}, {"_um", units::um_to_m}},
                         beam.w0);
    beam.lambda = s.quantity("lambda", {{"_nm", nm_to_m}}, beam.lambda);
    beam.m = static_cast<int>(s.integer("m", beam.m));
    beam.z_plate = s.quantity("z_plate", {{"_m", identity}}, beam.z_plate);
    beam.polarizer = s.boolean("polarizer", beam.polarizer);
    beam.polarizer_axis =
        s.quantity("polarizer_axis", {{"_deg", deg_to_rad}}, beam.polarizer_axis);
    beam.power = s.quantity(
        "power", {{"_mW", units::mW_to_W}, {"_uW", units::uW_to_W}}, beam.power);
    beam.alpha0 =
        s.quantity("alpha0", {{"_cm4", units::cm4_curvature_to_si}}, beam.alpha0);
    beam.i_sat =
        s.quantity("isat", {{"_mW_cm2", units::mW_cm2_to_W_m2}}, beam.i_sat);
    s.finish();
}

void parse_cloud(Section& s, CloudParams& cloud) {
    cloud.n_atoms = static_cast<std::uint64_t>(
        s.integer("n_atoms", static_cast<std::int64_t>(cloud.n_atoms)));
    cloud.temperature =
        s.quantity("temperature", {{"_uK", units::uK_to_K}}, cloud.temperature);
    if (s.has("sigma0_um")) {
        const json& v = s.raw("sigma0_um");
        if (v.is_number()) {
            double r = units::um_to_m(v.get<double>());
            cloud.sigma0 = Vec3{r, r, r};
        } else if (v.is_array() && v.size() == 3 && v[0].is_number() &&
                   v[1].is_number() && v[2].is_number()) {
            cloud.sigma0 = Vec3{units::um_to_m(v[0].get<double>()),
                                units::um_to_m(v[1].get<double>()),
                                units::um_to_m(v[2].get<double>())};
        } else {
            fail(s.key_path("sigma0_um"), "expected a number or [x, y, z]");
        }
    }
    cloud.seed = static_cast<std::uint64_t>(
        s.integer("seed", static_cast<std::int64_t>(cloud.seed)));
    s.finish();
}

void parse_sequence(Section& s, SequenceConfig& seq) {
    std::string scheme = s.text(
        "scheme",
        seq.scheme == SequenceConfig::Scheme::dynamic_push ? "dynamic" : "dark");
    if (scheme == "dynamic") {
        seq.scheme = SequenceConfig::Scheme::dynamic_push;
    } else if (scheme == "dark") {
        seq.scheme = SequenceConfig::Scheme::dark_pump;
    } else {
        fail(s.key_path("scheme"), "expected \"dynamic\" or \"dark\"");
    }
    seq.tau1 = s.quantity(
        "tau1", {{"_ms", units::ms_to_s}, {"_us", units::us_to_s}}, seq.tau1);
    seq.tau_ill = s.quantity(
        "tau_ill", {{"_us", units::us_to_s}, {"_ms", units::ms_to_s}}, seq.tau_ill);
    seq.tau2 = s.quantity(
        "tau2", {{"_us", units::us_to_s}, {"_ms", units::ms_to_s}}, seq.tau2);
    seq.delta = s.quantity("delta", {{"_MHz", units::MHz_to_rad_s}}, seq.delta);
    seq.gamma1 = s.quantity("gamma1", {{"_MHz", units::MHz_to_rad_s}}, seq.gamma1);
    seq.gravity = s.boolean("gravity", seq.gravity);
    s.finish();
}

void parse_imaging(Section& s, ImagingConfig& img) {
    img.angle = s.quantity("angle", {{"_deg", deg_to_rad}}, img.angle);
    img.pixel = s.quantity("pixel", {{"_um", units::um_to_m}}, img.pixel);
    img.width = static_cast<int>(s.integer("width_px", img.width));
    img.height = static_cast<int>(s.integer("height_px", img.height));
    img.counts_per_pixel = s.number("counts_per_pixel", img.counts_per_pixel);
    img.dark_level = s.number("dark_level", img.dark_level);
    img.n_frames = static_cast<int>(s.integer("n_frames", img.n_frames));
    if (s.has("noise_seed")) {
        img.noise_seed =
            static_cast<std::uint64_t>(s.integer("noise_seed", 0));
    }
    img.blur_sigma = s.quantity("blur", {{"_um", units::um_to_m}}, img.blur_sigma);
    s.finish();
}

void parse_sweep(Section& s, SweepConfig& sweep) {
    sweep.parameter = s.text("parameter", sweep.parameter);
    if (s.has("values")) {
        const json& v = s.raw("values");
        if (!v.is_array() || v.empty()) {
            fail(s.key_path("values"), "expected a non-empty array of numbers");
        }
        sweep.values.clear();
        for (const auto& e : v) {
            if (!e.is_number()) {
                fail(s.key_path("values"), "expected a non-empty array of numbers");
            }
            sweep.values.push_back(e.get<double>());
        }
    }
    s.finish();
}

void parse_output(Section& s, OutputConfig& out) {
    out.directory = s.text("directory", out.directory);
    if (s.has("formats")) {
        const json& v = s.raw("formats");
        if (!v.is_array()) {
            fail(s.key_path("formats"), "expected an array of strings");
        }
        out.formats.clear();
        for (const auto& e : v) {
            if (!e.is_string()) {
                fail(s.key_path("formats"), "expected an array of strings");
            }
            out.formats.push_back(e.get<std::string>());
        }
    }
    s.finish();
}

void check(bool ok, const std::string& field, const std::string& what) {
    if (!ok) fail(field, what);
}

}  // namespace

bool known_sweep_parameter(const std::string& name) {
    return sweep_units().count(name) != 0;
}

double sweep_value_si(const std::string& name, double value) {
    auto it = sweep_units().find(name);
    if (it == sweep_units().end()) {
        throw ConfigError("unknown sweep parameter '" + name + "'");
    }
    return it->second(value);
}

ExperimentConfig parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }

    ExperimentConfig config;
    Section top(root, "");
    config.name = top.text("name", config.name);

    Section beam = subsection(top, "beam");
    parse_beam(beam, config.beam);
    Section cloud = subsection(top, "cloud");
    parse_cloud(cloud, config.cloud);
    Section sequence = subsection(top, "sequence");
    parse_sequence(sequence, config.sequence);
    Section imaging = subsection(top, "imaging");
    parse_imaging(imaging, config.imaging);
    Section sweep = subsection(top, "sweep");
    parse_sweep(sweep, config.sweep);
    Section output = subsection(top, "output");
    parse_output(output, config.output);

    top.finish();
    return config;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    ExperimentConfig config = parse_config(buf.str());
    validate_config(config);
    return config;
}

void validate_config(const ExperimentConfig& config) {
    const BeamConfig& b = config.beam;
    check(b.w0 > 0, "beam.w0", "must be positive");
    check(b.lambda > 0, "beam.lambda", "must be positive");
    check(b.m != 0, "beam.m", "must be a non-zero integer");
    check(b.power >= 0, "beam.power", "must be non-negative");
    check(b.alpha0 > 0, "beam.alpha0", "must be positive");
    check(b.i_sat > 0, "beam.isat", "must be positive");

    const CloudParams& c = config.cloud;
    check(c.n_atoms >= 1, "cloud.n_atoms", "must be at least 1");
    check(c.temperature >= 0, "cloud.temperature", "must be non-negative");
    check(c.sigma0.x > 0 && c.sigma0.y > 0 && c.sigma0.z > 0, "cloud.sigma0_um",
          "all components must be positive");

    const SequenceConfig& q = config.sequence;
    check(q.tau1 >= 0, "sequence.tau1", "must be non-negative");
    check(q.tau_ill >= 0, "sequence.tau_ill", "must be non-negative");
    check(q.tau2 >= 0, "sequence.tau2", "must be non-negative");
    if (q.scheme == SequenceConfig::Scheme::dark_pump) {
        check(q.gamma1 > 0 && q.gamma1 < rb87::gamma_d2, "sequence.gamma1",
              "must lie strictly between 0 and the natural linewidth");
    }

    const ImagingConfig& i = config.imaging;
    check(i.pixel > 0, "imaging.pixel", "must be positive");
    check(i.width >= 8 && i.width <= 8192, "imaging.width_px",
          "must lie in [8, 8192]");
    check(i.height >= 8 && i.height <= 8192, "imaging.height_px",
          "must lie in [8, 8192]");
    check(i.counts_per_pixel > 0, "imaging.counts_per_pixel", "must be positive");
    check(i.dark_level >= 0, "imaging.dark_level", "must be non-negative");
    check(i.n_frames >= 1, "imaging.n_frames", "must be at least 1");
    check(i.blur_sigma >= 0, "imaging.blur", "must be non-negative");

    const SweepConfig& s = config.sweep;
    check(known_sweep_parameter(s.parameter), "sweep.parameter",
          "unknown parameter '" + s.parameter + "'");
    check(!s.values.empty(), "sweep.values", "must not be empty");
    if (s.parameter == "energy_nJ") {
        check(q.tau_ill > 0, "sequence.tau_ill",
              "must be positive when sweeping pulse energy");
    }
    if (s.parameter != "delta_MHz") {
        for (double v : s.values) {
            check(v >= 0, "sweep.values", "must be non-negative");
        }
    }

    check(!config.output.directory.empty(), "output.directory",
          "must not be empty");
    for (const std::string& f : config.output.formats) {
        check(f == "csv" || f == "pgm" || f == "json", "output.formats",
              "unknown format '" + f + "'");
    }
}

std::string config_json(const ExperimentConfig& config) {
    json j;
    j["name"] = config.name;

    json& b = j["beam"];
    b["w0_m"] = config.beam.w0;
    b["lambda_m"] = config.beam.lambda;
    b["m"] = config.beam.m;
    b["z_plate_m"] = config.beam.z_plate;
    b["polarizer"] = config.beam.polarizer;
    b["polarizer_axis_rad"] = config.beam.polarizer_axis;
    b["power_W"] = config.beam.power;
    b["alpha0_m4"] = config.beam.alpha0;
    b["i_sat_W_m2"] = config.beam.i_sat;

    json& c = j["cloud"];
    c["n_atoms"] = config.cloud.n_atoms;
    c["temperature_K"] = config.cloud.temperature;
    c["sigma0_m"] = {config.cloud.sigma0.x, config.cloud.sigma0.y,
                     config.cloud.sigma0.z};
    c["seed"] = config.cloud.seed;

    json& q = j["sequence"];
    q["scheme"] = config.sequence.scheme == SequenceConfig::Scheme::dynamic_push
                      ? "dynamic"
                      : "dark";
    q["tau1_s"] = config.sequence.tau1;
    q["tau_ill_s"] = config.sequence.tau_ill;
    q["tau2_s"] = config.sequence.tau2;
    q["delta_rad_s"] = config.sequence.delta;
    q["gamma1_rad_s"] = config.sequence.gamma1;
    q["gravity"] = config.sequence.gravity;

    json& i = j["imaging"];
    i["angle_rad"] = config.imaging.angle;
    i["pixel_m"] = config.imaging.pixel;
    i["width_px"] = config.imaging.width;
    i["height_px"] = config.imaging.height;
    i["counts_per_pixel"] = config.imaging.counts_per_pixel;
    i["dark_level"] = config.imaging.dark_level;
    i["n_frames"] = config.imaging.n_frames;
    if (config.imaging.noise_seed) {
        i["noise_seed"] = *config.imaging.noise_seed;
    } else {
        i["noise_seed"] = nullptr;
    }
    i["blur_m"] = config.imaging.blur_sigma;

    json& s = j["sweep"];
    s["parameter"] = config.sweep.parameter;
    s["values"] = config.sweep.values;
    json values_si = json::array();
    for (double v : config.sweep.values) {
        values_si.push_back(sweep_value_si(config.sweep.parameter, v));
    }
    s["values_si"] = values_si;

    json& o = j["output"];
    o["directory"] = config.output.directory;
    o["formats"] = config.output.formats;

    return j.dump(2) + "\n";
}

ExperimentConfig with_sweep_value(const ExperimentConfig& config, double value) {
    ExperimentConfig out = config;
    double si = sweep_value_si(config.sweep.parameter, value);
    const std::string& p = config.sweep.parameter;
    if (p == "power_mW" || p == "power_uW") {
        out.beam.power = si;
    } else if (p == "tau_ill_us") {
        out.sequence.tau_ill = si;
    } else if (p == "tau2_us") {
        out.sequence.tau2 = si;
    } else if (p == "energy_nJ") {
        if (out.sequence.tau_ill <= 0) {
            throw ConfigError(
                "config field 'sequence.tau_ill': must be positive when "
                "sweeping pulse energy");
        }
        out.beam.power = si / out.sequence.tau_ill;
    } else if (p == "delta_MHz") {
        out.sequence.delta = si;
    } else {
        throw ConfigError("unknown sweep parameter '" + p + "'");
    }
    return out;
}

}  // namespace cloudshape
