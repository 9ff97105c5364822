/// \file
/// Experiment description loaded from JSON: beam, cloud, pulse sequence,
/// imaging, one swept parameter, and output selection. Field names in the
/// JSON carry their unit as a suffix (w0_mm, tau_ill_us, power_mW, ...);
/// the parsed struct is plain SI.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cloudshape/cloud.hpp"
#include "cloudshape/constants.hpp"
#include "cloudshape/imaging.hpp"

namespace cloudshape {

/// Vortex beam and its interaction constants.
struct BeamConfig {
    double w0 = 1.0e-3;              ///< collimated waist [m]
    double lambda = rb87::lambda_d2; ///< wavelength [m]
    int m = 1;                       ///< retarder order
    double z_plate = 0.0;            ///< retarder position along z [m]
    bool polarizer = false;          ///< project onto a linear axis
    double polarizer_axis = 1.5707963267948966;  ///< axis from x [rad]
    double power = 0.0;              ///< beam power [W]
    double alpha0 = 1.55e13;         ///< core intensity curvature per power [m^-4]
    double i_sat = 70.45454545454545;  ///< saturation intensity [W/m^2]
};

/// Pulse sequence. Times are absolute durations of the three phases.
struct SequenceConfig {
    enum class Scheme { dynamic_push, dark_pump };

    Scheme scheme = Scheme::dynamic_push;
    double tau1 = 1.2e-3;    ///< free flight before the light [s]
    double tau_ill = 35e-6;  ///< illumination window [s]
    double tau2 = 565e-6;    ///< free flight after the light [s]
    double delta = 0.0;      ///< laser detuning [rad/s]
    /// Pump rate out of the driven ground level (dark_pump only). [rad/s]
    double gamma1 = 2.0 * 3.14159265358979323846 * 3.0e6;
    bool gravity = true;     ///< apply free fall along -y
};

/// One swept scalar. `parameter` is the unit-suffixed field name; `values`
/// are in that unit and converted on use.
struct SweepConfig {
    std::string parameter = "power_mW";
    std::vector<double> values{0.0};
};

/// Artifact selection.
struct OutputConfig {
    std::string directory = "out";
    std::vector<std::string> formats{"csv"};  ///< subset of csv, pgm, json
};

struct ExperimentConfig {
    std::string name = "run";
    BeamConfig beam;
    CloudParams cloud;
    SequenceConfig sequence;
    ImagingConfig imaging;
    SweepConfig sweep;
    OutputConfig output;
};

/// Sweep parameters accepted by parse/validate, with their unit scale.
/// power_mW, tau_ill_us, tau2_us, energy_nJ (power = E / tau_ill), delta_MHz
/// (cyclic MHz, stored as rad/s).
bool known_sweep_parameter(const std::string& name);

/// Converts one value of the named sweep parameter to SI.
double sweep_value_si(const std::string& name, double value);

/// Parses a config from JSON text. Unknown keys and malformed values raise
/// ConfigError naming the offending field.
ExperimentConfig parse_config(const std::string& json_text);

/// Reads and parses a JSON config file.
ExperimentConfig load_config(const std::string& path);

/// Checks ranges and cross-field consistency (exactly one sweep parameter,
/// positive sizes, energy sweeps need tau_ill > 0, ...). Throws ConfigError.
void validate_config(const ExperimentConfig& config);

/// Serializes the fully resolved config, SI values and defaults included,
/// as deterministic JSON. Used for manifests.
std::string config_json(const ExperimentConfig& config);

/// Applies one sweep value to a copy of the config and returns it.
ExperimentConfig with_sweep_value(const ExperimentConfig& config, double value);

}  // namespace cloudshape
