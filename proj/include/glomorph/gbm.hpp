#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "glomorph/config.hpp"
#include "glomorph/patches.hpp"

namespace glomorph {

/// True iff the suitability map at the patch center is strictly above the
/// threshold.
bool gate_suitability(const GfbPatch& patch, const ProbabilityMap& p_mea,
                      double threshold);

/// One accepted cross-section measurement.
struct Measurement {
    Vec2 site;        // sample position on the centerline
    Vec2 entry;       // boundary crossing on one side of the GBM
    Vec2 exit;        // boundary crossing on the other side
    double d_nm = 0;  // Euclidean distance between entry and exit
};

enum class DiscardReason { kRayEscaped, kNotOnGbm };

using MeasureOutcome = std::variant<Measurement, DiscardReason>;

/// Marches the normal of `sample` in 0.5-px steps on both sides until the
/// mask leaves the GBM label; each boundary is the midpoint between the last
/// GBM sample and the first non-GBM sample. Discards the site when a ray
/// exits the image or runs past `max_ray_nm` while still inside GBM.
MeasureOutcome measure_cross_section(const LabelImage& mask, const SamplePoint& sample,
                                     double nm_per_pixel, double max_ray_nm);

enum class GbmGrade { kThinning, kNormal, kThickening };

const char* to_string(GbmGrade g);

/// Table-driven grading: thinning below gbm_thin_nm, thickening above
/// gbm_thick_nm, normal inclusive in between.
GbmGrade grade_thickness(double d_a_nm, const PipelineConfig& config);

struct ThicknessSummary {
    double d_a_nm = 0;  // (pi/4) * arithmetic mean of the inputs
    GbmGrade grade = GbmGrade::kNormal;
};

/// Stereologically corrected case thickness. Throws NoMeasurementsError on an
/// empty input.
ThicknessSummary aggregate_thickness(std::span<const double> d_nm,
                                     const PipelineConfig& config);

/// Case-level GBM outcome for reporting.
struct GbmMeasurementRecord {
    std::string image_id;
    Measurement measurement;
};

struct GbmResult {
    std::optional<double> d_a_nm;
    std::optional<GbmGrade> grade;
    int n_measurements = 0;
    int n_candidates = 0;  // patches that passed the suitability gate
    std::vector<GbmMeasurementRecord> measurements;
};

}  // namespace glomorph
