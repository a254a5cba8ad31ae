#include "glomorph/fpe.hpp"

#include "glomorph/errors.hpp"

namespace glomorph {

double patch_fpe_probability(const GfbPatch& patch, const ProbabilityMap& p_fpe) {
    return p_fpe.at(patch.center_x(), patch.center_y());
}

const char* to_string(FpeGrade g) {
    switch (g) {
        case FpeGrade::kMild: return "mild";
        case FpeGrade::kModerate: return "moderate";
        case FpeGrade::kSevere: return "severe";
    }
    return "?";
}

FpeGrade grade_fpe(double r_fpe, const PipelineConfig& config) {
    if (r_fpe < config.fpe_mild) return FpeGrade::kMild;
    if (r_fpe > config.fpe_severe) return FpeGrade::kSevere;
    return FpeGrade::kModerate;
}

FpeSummary aggregate_fpe(std::span<const double> probs, const PipelineConfig& config) {
    if (probs.empty()) throw NoPatchesError("no GFB patches to average");
    double sum = 0.0;
    for (double p : probs) sum += p;
    const double r = sum / double(probs.size());
    return {r, grade_fpe(r, config)};
}

}  // namespace glomorph
