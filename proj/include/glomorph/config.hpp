#pragma once

#include <filesystem>

#include <nlohmann/json_fwd.hpp>

namespace glomorph {

/// All tunable pipeline parameters. Physical units so that sampling behaves
/// the same across magnifications; every report echoes the config it ran with.
struct PipelineConfig {
    double stride_nm = 750.0;                    // S: centerline sampling stride
    double window_nm = 1500.0;                   // W: patch window side
    double suitability_threshold = 0.5;          // gate for thickness measurement
    double detection_confidence_threshold = 0.5; // minimum box confidence
    double t_edd_um2 = 3.0;                      // per-location presence threshold

    // Grading bounds (normal band is inclusive on both ends).
    double gbm_thin_nm = 250.0;
    double gbm_thick_nm = 450.0;
    double fpe_mild = 0.4;
    double fpe_severe = 0.7;

    double min_branch_nm = 300.0;   // skeleton spurs below this are pruned
    double max_ray_factor = 3.0;    // measurement ray cap, in multiples of W
    double sample_offset_nm = 0.0;  // arc offset of the first sample point

    double max_ray_nm() const { return max_ray_factor * window_nm; }

    /// Throws ConfigError when invariants are violated (S in (0, W],
    /// ordered grading thresholds, positive scales).
    void validate() const;

    nlohmann::json to_json() const;
    /// Partial JSON accepted: unspecified fields keep their defaults.
    static PipelineConfig from_json(const nlohmann::json& j);
    static PipelineConfig load(const std::filesystem::path& file);
};

}  // namespace glomorph
