#pragma once

#include <optional>
#include <string>
#include <vector>

#include "glomorph/config.hpp"
#include "glomorph/types.hpp"

namespace glomorph {

enum class EddLocation {
    kSubepithelial = 0,   // podocyte side
    kIntramembranous = 1, // within the GBM
    kSubendothelial = 2,  // endothelium side
    kMesangial = 3,
};

const char* to_string(EddLocation loc);

/// Maps a detection box onto an ultrastructural location by the plurality
/// non-background label under the box; ties break GBM > podocyte >
/// endothelium > mesangium. Returns nothing (unassigned) when background
/// covers 80% or more of the box pixels.
std::optional<EddLocation> assign_box_location(const DetectionBox& box,
                                               const LabelImage& mask);

struct EddAreas {
    double subepithelial = 0;
    double intramembranous = 0;
    double subendothelial = 0;
    double mesangial = 0;

    double& by(EddLocation loc);
    double by(EddLocation loc) const;
    double total() const {
        return subepithelial + intramembranous + subendothelial + mesangial;
    }
};

struct EddPresence {
    bool subepithelial = false;
    bool intramembranous = false;
    bool subendothelial = false;
    bool mesangial = false;
};

struct EddBoxRecord {
    std::string image_id;
    DetectionBox box;
    std::optional<EddLocation> location;
    double area_um2 = 0;
};

struct EddResult {
    EddAreas areas;          // um^2, summed over all images
    EddPresence presence;    // area > t_edd_um2, strictly
    std::vector<EddBoxRecord> boxes;
};

/// Per-image assignment: boxes below the confidence threshold are skipped
/// entirely; the rest get a location (or stay unassigned) and their full
/// physical box area.
std::vector<EddBoxRecord> assign_image_boxes(const ImageMeta& meta, const LabelImage& mask,
                                             const std::vector<DetectionBox>& detections,
                                             const PipelineConfig& config);

/// Accumulates per-location areas over box records and applies the presence
/// threshold.
EddResult reduce_edd(std::vector<EddBoxRecord> boxes, const PipelineConfig& config);

/// Whole-case accumulation (Eq. over all N images).
EddResult accumulate_edd(const CaseRecord& record, const PipelineConfig& config);

}  // namespace glomorph
