#pragma once

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "glomorph/edd.hpp"
#include "glomorph/types.hpp"

namespace glomorph {

/// Deposit boxes to plant inside one compartment.
struct PlantedEdd {
    EddLocation location = EddLocation::kMesangial;
    int box_w_px = 10;
    int box_h_px = 10;
    int count = 0;
};

/// Parameters of a synthetic capillary-loop case with analytically known
/// thickness, effacement fraction and deposit areas. The GBM is an annulus at
/// `radius_nm` of width `width_nm`, a podocyte band outside, an endothelium
/// band inside, and a mesangial disc at the center.
struct PhantomSpec {
    std::string case_id = "phantom";
    int n_images = 1;
    int width_px = 2048;
    int height_px = 2048;
    double nm_per_pixel = 10.0;

    double radius_nm = 5000.0;
    double width_nm = 300.0;
    double width_modulation_amplitude = 0.0;  // fraction of width_nm, <= 0.2
    int width_modulation_periods = 0;
    double band_nm = 600.0;            // podocyte / endothelium band thickness
    double mesangium_radius_nm = 1600.0;

    double fused_fraction = 0.0;       // f: arc fraction carrying p_fused
    double p_fused = 0.95;
    double p_intact = 0.05;

    double p_suitable = 0.9;
    double p_unsuitable = 0.1;
    double unsuitable_fraction = 0.0;  // arc fraction gated out of measurement

    std::vector<PlantedEdd> planted_edd;
    double detection_confidence = 0.9;
    std::uint64_t seed = 0;

    nlohmann::json to_json() const;
    static PhantomSpec from_json(const nlohmann::json& j);
};

struct PhantomGroundTruth {
    double true_width_nm = 0;          // arc-mean GBM width
    double width_modulation_amplitude = 0;
    int width_modulation_periods = 0;
    double fused_fraction = 0;
    double expected_r_fpe = 0;         // p_fused * f + p_intact * (1 - f)
    EddAreas planted_areas_um2;
    double radius_nm = 0;
    double nm_per_pixel = 0;
    int n_images = 0;
    std::uint64_t seed = 0;

    nlohmann::json to_json() const;
    static PhantomGroundTruth from_json(const nlohmann::json& j);
};

/// Builds the case in memory. Deterministic for a given spec (the seed is
/// part of the spec). Throws SpecInfeasibleError when boxes cannot be placed.
std::pair<CaseRecord, PhantomGroundTruth> generate_phantom(const PhantomSpec& spec);

/// Writes the case to `out_dir` in the standard manifest layout plus a
/// ground_truth.json sidecar; returns the ground truth.
PhantomGroundTruth generate_phantom_case(const PhantomSpec& spec,
                                         const std::filesystem::path& out_dir);

}  // namespace glomorph
