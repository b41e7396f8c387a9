#pragma once

#include <map>
#include <string>
#include <vector>

#include "udnmf/montecarlo.hpp"

namespace udnmf {

inline constexpr const char* kVersion = "0.1.0";

enum class Preset { fig1, fig2, fig3, validate, custom };

struct ExperimentSpec {
    Preset preset = Preset::custom;
    NetworkConfig network;
    FadingParams fading;
    SimConfig sim;
    std::vector<double> ratio_sweep;     // BS/user density ratios (rate validation)
    std::vector<int> antenna_sweep;      // stationary EE sweep axis
    std::vector<double> density_sweep;   // stationary EE sweep axis
    std::string output_path;             // empty: no file written
    bool operator==(const ExperimentSpec&) const = default;
};

Preset preset_from_name(const std::string& name);
std::string preset_name(Preset p);

// Preset parameter sets reproducing the published experiments.
ExperimentSpec preset_spec(Preset p);

ExperimentSpec parse_config_json(const std::string& text);
ExperimentSpec load_config(const std::string& path);
std::string dump_config(const ExperimentSpec& spec);  // round-trips through parse_config_json

struct ExperimentResult {
    std::string csv;
    std::string summary;
    std::map<std::string, double> metrics;
};

// Runs the experiment the spec describes and, when output_path is set, writes
// the CSV atomically (temp file + rename).
ExperimentResult run_experiment(const ExperimentSpec& spec);

}  // namespace udnmf
