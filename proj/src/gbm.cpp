#include "glomorph/gbm.hpp"

#include <cmath>
#include <numbers>

#include "glomorph/errors.hpp"

namespace glomorph {

bool gate_suitability(const GfbPatch& patch, const ProbabilityMap& p_mea,
                      double threshold) {
    return p_mea.at(patch.center_x(), patch.center_y()) > threshold;
}

namespace {

bool is_gbm_at(const LabelImage& mask, Vec2 pos) {
    const int x = round_to_px(pos.x);
    const int y = round_to_px(pos.y);
    return mask.contains(x, y) && mask.at(x, y) == kGbm;
}

// Walks from `origin` along `dir` in 0.5-px steps; returns the sub-pixel
// boundary point, or nothing when the ray leaves the image / exceeds the cap
// while still on GBM.
std::optional<Vec2> march_to_boundary(const LabelImage& mask, Vec2 origin, Vec2 dir,
                                      double max_ray_px) {
    constexpr double kStep = 0.5;
    for (double s = kStep;; s += kStep) {
        const Vec2 pos = origin + dir * s;
        const int x = round_to_px(pos.x);
        const int y = round_to_px(pos.y);
        if (!mask.contains(x, y)) return std::nullopt;
        if (mask.at(x, y) != kGbm)
            return origin + dir * (s - kStep / 2);  // midpoint of the crossing pair
        if (s > max_ray_px) return std::nullopt;
    }
}

}  // namespace

MeasureOutcome measure_cross_section(const LabelImage& mask, const SamplePoint& sample,
                                     double nm_per_pixel, double max_ray_nm) {
    if (!is_gbm_at(mask, sample.position)) return DiscardReason::kNotOnGbm;

    const Vec2 normal = sample.tangent.perp();
    const double max_ray_px = max_ray_nm / nm_per_pixel;

    const auto fwd = march_to_boundary(mask, sample.position, normal, max_ray_px);
    if (!fwd) return DiscardReason::kRayEscaped;
    const auto bwd = march_to_boundary(mask, sample.position, normal * -1.0, max_ray_px);
    if (!bwd) return DiscardReason::kRayEscaped;

    Measurement m;
    m.site = sample.position;
    m.entry = *bwd;
    m.exit = *fwd;
    m.d_nm = distance(m.entry, m.exit) * nm_per_pixel;
    return m;
}

const char* to_string(GbmGrade g) {
    switch (g) {
        case GbmGrade::kThinning: return "thinning";
        case GbmGrade::kNormal: return "normal";
        case GbmGrade::kThickening: return "thickening";
    }
    return "?";
}

GbmGrade grade_thickness(double d_a_nm, const PipelineConfig& config) {
    if (d_a_nm < config.gbm_thin_nm) return GbmGrade::kThinning;
    if (d_a_nm > config.gbm_thick_nm) return GbmGrade::kThickening;
    return GbmGrade::kNormal;
}

ThicknessSummary aggregate_thickness(std::span<const double> d_nm,
                                     const PipelineConfig& config) {
    if (d_nm.empty())
        throw NoMeasurementsError("no retained cross-section measurements");
    double sum = 0.0;
    for (double d : d_nm) sum += d;
    const double d_a = (std::numbers::pi / 4.0) * (sum / double(d_nm.size()));
    return {d_a, grade_thickness(d_a, config)};
}

}  // namespace glomorph
