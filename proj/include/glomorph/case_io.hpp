#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "glomorph/provider.hpp"
#include "glomorph/types.hpp"

namespace glomorph {

/// Parsed case manifest; file paths are resolved against the manifest's
/// directory.
struct CaseManifest {
    std::string case_id;
    std::optional<std::string> pathology;
    std::vector<ImageSource> images;
    std::optional<ManualReference> manual_reference;
    std::filesystem::path base_dir;
};

CaseManifest parse_manifest(const std::filesystem::path& manifest_path);

/// Loads and validates a whole case (manifest plus all referenced rasters).
CaseRecord load_case(const std::filesystem::path& manifest_path);

/// Writes a case to `dir` in the manifest/PNG/JSON layout that load_case
/// reads: <image_id>.mask.png, .p_mea.png, .p_fpe.png, .detections.json and
/// manifest.json. Returns the manifest path.
std::filesystem::path save_case(const CaseRecord& record, const std::filesystem::path& dir);

std::vector<DetectionBox> read_detections_json(const std::filesystem::path& file,
                                               const std::string& image_id);

}  // namespace glomorph
