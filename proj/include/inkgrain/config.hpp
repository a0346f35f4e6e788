#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "inkgrain/graininess.hpp"
#include "inkgrain/metrics.hpp"
#include "inkgrain/reflectance_model.hpp"
#include "inkgrain/segmentation.hpp"
#include "inkgrain/synthesis.hpp"

namespace inkgrain {

using json = nlohmann::json;

/// Everything that shapes an analysis run. Every JSON field is optional.
struct AnalysisConfig {
    SegmentationParams segmentation;
    BandPassSpec bandpass;
    double white_percentile = 0.99;
};

/// Reads {"segmentation": {...}, "bandpass": {...}, "white_percentile": p}.
/// Unknown keys are rejected so typos do not silently fall back to defaults.
AnalysisConfig analysis_config_from_json(const json& j);
AnalysisConfig load_analysis_config(const std::filesystem::path& path);

json to_json(const SegmentationParams& p);
json to_json(const BandPassSpec& s);
json to_json(const AnalysisConfig& c);
json to_json(const SimConfig& c);
json to_json(const MetricReport& r);
json to_json(const ReflectanceModel& m);
json to_json(const GrainReport& r);
json to_json(const CoverageRatios& c);

ReflectanceModel model_from_json(const json& j);

struct ManifestEntry {
    std::string id;
    double cyan_level = 0.0;     ///< percent
    double magenta_level = 0.0;  ///< percent
    std::filesystem::path image_path;
    std::optional<std::filesystem::path> truth_path;
};

/// JSON array of {id, cyan_level, magenta_level, image_path[, truth_path]}.
/// Relative paths resolve against the manifest's directory.
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);
json manifest_to_json(const std::vector<ManifestEntry>& entries,
                      const std::filesystem::path& relative_to);

/// Pretty JSON text terminated by a newline.
std::string dump(const json& j);

}  // namespace inkgrain
