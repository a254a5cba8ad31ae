#pragma once

#include <optional>
#include <span>
#include <vector>

#include "glomorph/config.hpp"
#include "glomorph/patches.hpp"

namespace glomorph {

/// FPE probability of one GFB patch: the map value at the patch center.
double patch_fpe_probability(const GfbPatch& patch, const ProbabilityMap& p_fpe);

enum class FpeGrade { kMild, kModerate, kSevere };

const char* to_string(FpeGrade g);

/// mild below fpe_mild, severe above fpe_severe, moderate inclusive between.
FpeGrade grade_fpe(double r_fpe, const PipelineConfig& config);

struct FpeSummary {
    double r_fpe = 0;
    FpeGrade grade = FpeGrade::kMild;
};

/// Mean FPE probability over all patches (no suitability gating). Throws
/// NoPatchesError on an empty input.
FpeSummary aggregate_fpe(std::span<const double> probs, const PipelineConfig& config);

struct FpeResult {
    std::optional<double> r_fpe;
    std::optional<FpeGrade> grade;
    int n_patches = 0;
    std::vector<double> per_patch;
};

}  // namespace glomorph
