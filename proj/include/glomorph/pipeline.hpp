#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "glomorph/case_io.hpp"
#include "glomorph/config.hpp"
#include "glomorph/edd.hpp"
#include "glomorph/fpe.hpp"
#include "glomorph/gbm.hpp"
#include "glomorph/render.hpp"

namespace glomorph {

/// Wall-clock statistics of one pipeline stage across images.
struct RuntimeBucket {
    double total_s = 0;
    double mean_s = 0;
    double sd_s = 0;
};

struct RuntimeReport {
    RuntimeBucket load_process;  // output loading, skeleton, sampling, cropping
    RuntimeBucket gbm;
    RuntimeBucket fpe;
    RuntimeBucket edd;
    double total_s = 0;  // case wall clock
    int n_images = 0;
};

struct ProcessOptions {
    int workers = 0;  // 0: one per hardware thread
    bool render = true;
    std::optional<std::filesystem::path> out_dir;  // overlays + report.json
    OverlayStyle style;
};

/// Per-patch bookkeeping kept for rendering and diagnostics.
struct PatchRecord {
    std::string image_id;
    GfbPatch patch;
    double fpe_prob = 0;
    bool gated_in = false;  // passed the measurement-suitability gate
};

struct CaseQuantification {
    std::string case_id;
    GbmResult gbm;
    FpeResult fpe;
    EddResult edd;
    RuntimeReport runtime;
    int n_images = 0;
    int n_discarded = 0;  // gated-in patches whose measurement was discarded
    std::vector<PatchRecord> patches;
    std::vector<std::string> empty_structure_images;  // no GBM pixels at all

    bool all_images_empty() const {
        return n_images > 0 &&
               static_cast<int>(empty_structure_images.size()) == n_images;
    }
};

/// Runs the full quantification over a manifest on disk (file loading counts
/// toward the load_process bucket). Writes report.json and overlays when
/// `options.out_dir` is set.
CaseQuantification process_case(const std::filesystem::path& manifest_path,
                                const PipelineConfig& config,
                                const ProcessOptions& options = {});

/// Same pipeline over an in-memory case (no file I/O in the timing buckets).
CaseQuantification process_case(const CaseRecord& record, const PipelineConfig& config,
                                const ProcessOptions& options = {});

/// Report serialization; `config` is echoed verbatim for provenance.
nlohmann::json case_report_json(const CaseQuantification& result,
                                const PipelineConfig& config);

/// Strips the volatile timing section, for determinism comparisons.
nlohmann::json strip_runtime(nlohmann::json report);

}  // namespace glomorph
