#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "glomorph/image.hpp"

namespace glomorph {

struct ImageMeta {
    std::string image_id;
    int width_px = 0;
    int height_px = 0;
    double nm_per_pixel = 0.0;
    std::optional<double> magnification_k;
};

struct DetectionBox {
    double x_min = 0.0;
    double y_min = 0.0;
    double x_max = 0.0;
    double y_max = 0.0;
    double confidence = 0.0;

    double area_px2() const { return (x_max - x_min) * (y_max - y_min); }
};

/// Reference values transcribed from the pathology report, when available.
struct ManualReference {
    std::optional<double> gbm_thickness_nm;
    std::optional<std::string> fpe_grade;  // "mild" | "moderate" | "severe"
    // Presence flags in subepithelial/intramembranous/subendothelial/mesangial order.
    std::optional<std::array<bool, 4>> edd_presence;
};

/// One TEM image with all model outputs attached.
struct ImageRecord {
    ImageMeta meta;
    LabelImage mask;
    ProbabilityMap p_mea;
    ProbabilityMap p_fpe;
    std::vector<DetectionBox> detections;
};

struct CaseRecord {
    std::string case_id;
    std::optional<std::string> pathology;
    std::vector<ImageRecord> images;
    std::optional<ManualReference> manual_reference;
};

}  // namespace glomorph
