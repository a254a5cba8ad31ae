#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "glomorph/pipeline.hpp"

namespace glomorph {

/// One case's automated results paired with its manual reference (when any).
struct CohortRow {
    std::string case_id;
    std::optional<std::string> pathology;
    std::optional<double> auto_d_a_nm;
    std::optional<GbmGrade> auto_gbm_grade;
    std::optional<double> auto_r_fpe;
    std::optional<FpeGrade> auto_fpe_grade;
    EddAreas auto_areas;
    EddPresence auto_presence;
    std::optional<ManualReference> manual;
};

CohortRow make_cohort_row(const CaseQuantification& result,
                          const std::optional<ManualReference>& manual,
                          const std::optional<std::string>& pathology);

/// Cohort-level statistics: per-pathology-group K-S on thickness, pooled
/// Pearson and Bland-Altman, and one-vs-rest ROC/AUC for the three gradings
/// plus EDD presence per location. Tasks that lack data (pairs, or one of the
/// two classes) are reported with a reason instead of numbers.
nlohmann::json cohort_stats_json(const std::vector<CohortRow>& rows,
                                 const PipelineConfig& config);

/// Flat per-case export of the paired values behind the statistics.
void write_cohort_csv(const std::filesystem::path& file,
                      const std::vector<CohortRow>& rows);

}  // namespace glomorph
