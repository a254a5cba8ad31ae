#include "glomorph/config.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "glomorph/errors.hpp"

namespace glomorph {

void PipelineConfig::validate() const {
    if (stride_nm <= 0.0) throw ConfigError("stride_nm must be positive");
    if (window_nm <= 0.0) throw ConfigError("window_nm must be positive");
    if (stride_nm > window_nm)
        throw ConfigError("stride_nm must not exceed window_nm");
    if (gbm_thin_nm >= gbm_thick_nm)
        throw ConfigError("gbm_thin_nm must be below gbm_thick_nm");
    if (fpe_mild >= fpe_severe)
        throw ConfigError("fpe_mild must be below fpe_severe");
    if (t_edd_um2 <= 0.0) throw ConfigError("t_edd_um2 must be positive");
    if (min_branch_nm < 0.0) throw ConfigError("min_branch_nm must be >= 0");
    if (max_ray_factor <= 0.0) throw ConfigError("max_ray_factor must be positive");
}

nlohmann::json PipelineConfig::to_json() const {
    return {
        {"stride_nm", stride_nm},
        {"window_nm", window_nm},
        {"suitability_threshold", suitability_threshold},
        {"detection_confidence_threshold", detection_confidence_threshold},
        {"t_edd_um2", t_edd_um2},
        {"gbm_thin_nm", gbm_thin_nm},
        {"gbm_thick_nm", gbm_thick_nm},
        {"fpe_mild", fpe_mild},
        {"fpe_severe", fpe_severe},
        {"min_branch_nm", min_branch_nm},
        {"max_ray_factor", max_ray_factor},
        {"sample_offset_nm", sample_offset_nm},
    };
}

PipelineConfig PipelineConfig::from_json(const nlohmann::json& j) {
    PipelineConfig c;
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    auto read = [&](const char* key, double& field) {
        if (auto it = j.find(key); it != j.end()) {
            if (!it->is_number()) throw ConfigError(std::string("config field '") + key + "' must be a number");
            field = it->get<double>();
        }
    };
    read("stride_nm", c.stride_nm);
    read("window_nm", c.window_nm);
    read("suitability_threshold", c.suitability_threshold);
    read("detection_confidence_threshold", c.detection_confidence_threshold);
    read("t_edd_um2", c.t_edd_um2);
    read("gbm_thin_nm", c.gbm_thin_nm);
    read("gbm_thick_nm", c.gbm_thick_nm);
    read("fpe_mild", c.fpe_mild);
    read("fpe_severe", c.fpe_severe);
    read("min_branch_nm", c.min_branch_nm);
    read("max_ray_factor", c.max_ray_factor);
    read("sample_offset_nm", c.sample_offset_nm);
    for (const auto& [key, _] : j.items()) {
        static const char* known[] = {
            "stride_nm", "window_nm", "suitability_threshold",
            "detection_confidence_threshold", "t_edd_um2", "gbm_thin_nm",
            "gbm_thick_nm", "fpe_mild", "fpe_severe", "min_branch_nm",
            "max_ray_factor", "sample_offset_nm"};
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok) throw ConfigError("unknown config field '" + key + "'");
    }
    c.validate();
    return c;
}

PipelineConfig PipelineConfig::load(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw MissingFileError("cannot open config file: " + file.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("malformed config JSON in " + file.string() + ": " + e.what());
    }
    return from_json(j);
}

}  // namespace glomorph
