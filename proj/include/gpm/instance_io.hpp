#pragma once

#include "gpm/inference.hpp"
#include "gpm/instance.hpp"
#include "gpm/synth.hpp"

#include <string>

namespace gpm {

/// All files are self-describing JSON documents with a "format" tag; numbers
/// round-trip at full precision. docs/instance.schema.json documents the
/// instance layout.

std::string instance_to_json(const Instance& inst);
Instance instance_from_json(const std::string& text);

/// Truth sidecar: label space + segment sizes + the planted labeling, enough
/// to evaluate a solution on its own.
std::string truth_to_json(const Instance& inst, const Labeling& truth);
struct TruthFile {
    LabelSpace labels;
    std::vector<VoxelCount> sizes;
    Labeling truth;
};
TruthFile truth_from_json(const std::string& text);

std::string solution_to_json(const Solution& sol);
Solution solution_from_json(const std::string& text);

std::string trace_to_json(const InferenceTrace& trace);

std::string synth_config_to_json(const SynthConfig& config, double flip_fraction);
/// Returns the config plus the optional flip_fraction key (default 0).
std::pair<SynthConfig, double> synth_config_from_json(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

Instance load_instance(const std::string& path);
void save_instance(const std::string& path, const Instance& inst);

} // namespace gpm
