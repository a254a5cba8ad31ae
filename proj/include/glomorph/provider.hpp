#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "glomorph/types.hpp"

namespace glomorph {

/// Manifest row: where one image's model outputs live on disk.
struct ImageSource {
    ImageMeta meta;
    std::filesystem::path mask_file;
    std::filesystem::path p_mea_file;
    std::filesystem::path p_fpe_file;
    std::filesystem::path detections_file;
    std::optional<std::filesystem::path> image_file;  // raw micrograph, if kept
};

/// All model outputs for one image.
struct ModelOutputs {
    LabelImage mask;
    ProbabilityMap p_mea;
    ProbabilityMap p_fpe;
    std::vector<DetectionBox> detections;
};

/// Seam through which segmentation/classification/detection outputs enter the
/// pipeline. Implementations must be safe to call from concurrent workers.
class ModelOutputProvider {
  public:
    virtual ~ModelOutputProvider() = default;

    /// Returns validated outputs: dims match the meta, labels in range,
    /// boxes well-formed. Downstream code never revalidates.
    virtual ModelOutputs fetch(const ImageSource& source) = 0;
};

/// Reads the manifest-referenced PNG/JSON files. Stateless per call.
class FileBackedProvider final : public ModelOutputProvider {
  public:
    ModelOutputs fetch(const ImageSource& source) override;
};

/// Checks one image's outputs against its meta. Throws DimensionMismatchError,
/// IllegalLabelError or Error (box invariants); messages name the image_id.
void validate_outputs(const ImageMeta& meta, const ModelOutputs& outputs);

}  // namespace glomorph
