/// \file
/// Built-in experiment descriptions covering the study's main
/// configurations: optics intensity maps, the scattering-force removal
/// sweeps, dark-state pumping sweeps with the width-law fit, the analytic
/// width curve, and the detuning response.

#pragma once

#include <string>
#include <vector>

#include "cloudshape/config.hpp"

namespace cloudshape {

/// Identifiers accepted by preset_configs and reproduce.
std::vector<std::string> preset_ids();

/// True for the pure-optics preset that renders field maps instead of
/// running an atom-cloud sequence.
bool optics_preset(const std::string& id);

/// True for the preset that evaluates the analytic width law instead of
/// sampling atoms.
bool curve_preset(const std::string& id);

/// Configs for one preset id, in execution order. Most presets are a single
/// run; the pump-series preset expands to one run per illumination time so
/// each run still sweeps exactly one parameter. Throws UnknownFigure.
std::vector<ExperimentConfig> preset_configs(const std::string& id);

}  // namespace cloudshape
