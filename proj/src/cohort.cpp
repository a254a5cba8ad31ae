#include "glomorph/cohort.hpp"

#include <fstream>
#include <map>

#include <nlohmann/json.hpp>

#include "glomorph/errors.hpp"
#include "glomorph/stats.hpp"

namespace glomorph {

using nlohmann::json;

CohortRow make_cohort_row(const CaseQuantification& result,
                          const std::optional<ManualReference>& manual,
                          const std::optional<std::string>& pathology) {
    CohortRow row;
    row.case_id = result.case_id;
    row.pathology = pathology;
    row.auto_d_a_nm = result.gbm.d_a_nm;
    row.auto_gbm_grade = result.gbm.grade;
    row.auto_r_fpe = result.fpe.r_fpe;
    row.auto_fpe_grade = result.fpe.grade;
    row.auto_areas = result.edd.areas;
    row.auto_presence = result.edd.presence;
    row.manual = manual;
    return row;
}

namespace {

struct ThicknessPairs {
    std::vector<double> automated;
    std::vector<double> manual;
};

ThicknessPairs thickness_pairs(const std::vector<CohortRow>& rows) {
    ThicknessPairs p;
    for (const CohortRow& r : rows) {
        if (r.auto_d_a_nm && r.manual && r.manual->gbm_thickness_nm) {
            p.automated.push_back(*r.auto_d_a_nm);
            p.manual.push_back(*r.manual->gbm_thickness_nm);
        }
    }
    return p;
}

json ks_json(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() || b.empty()) return {{"error", "empty_sample"}};
    const auto ks = stats::ks_two_sample(a, b);
    return {{"d", ks.d}, {"p", ks.p}, {"n", a.size()}};
}

json roc_json(const std::vector<double>& scores, const std::vector<bool>& labels) {
    if (scores.size() < 2) return {{"error", "empty_sample"}};
    try {
        const stats::RocCurve curve = stats::roc_auc(scores, labels);
        json pts = json::array();
        for (const auto& [fpr, tpr] : curve.points) pts.push_back({fpr, tpr});
        return {{"auc", curve.auc}, {"points", std::move(pts)}, {"n", scores.size()}};
    } catch (const SingleClassError&) {
        return {{"error", "single_class"}};
    }
}

std::optional<bool> manual_presence(const CohortRow& r, int location_index) {
    if (!r.manual || !r.manual->edd_presence) return std::nullopt;
    return (*r.manual->edd_presence)[location_index];
}

}  // namespace

json cohort_stats_json(const std::vector<CohortRow>& rows, const PipelineConfig& config) {
    json out;
    out["n_cases"] = rows.size();

    // --- GBM thickness agreement ---------------------------------------
    json gbm;
    const ThicknessPairs all_pairs = thickness_pairs(rows);
    gbm["all"] = ks_json(all_pairs.automated, all_pairs.manual);
    if (all_pairs.automated.size() >= 2) {
        try {
            gbm["all"]["pearson_r"] = stats::pearson(all_pairs.automated, all_pairs.manual);
        } catch (const DegenerateVarianceError&) {
            gbm["all"]["pearson_r"] = nullptr;
        }
        const auto ba = stats::bland_altman(all_pairs.automated, all_pairs.manual);
        gbm["all"]["bland_altman"] = {{"mean_diff", ba.mean_diff},
                                      {"loa_low", ba.loa_low},
                                      {"loa_high", ba.loa_high},
                                      {"pct_within", ba.pct_within},
                                      {"degenerate", ba.degenerate}};
    }

    std::map<std::string, std::vector<const CohortRow*>> groups;
    for (const CohortRow& r : rows)
        if (r.pathology) groups[*r.pathology].push_back(&r);
    json group_json = json::object();
    for (const auto& [name, members] : groups) {
        std::vector<double> a, m;
        for (const CohortRow* r : members) {
            if (r->auto_d_a_nm && r->manual && r->manual->gbm_thickness_nm) {
                a.push_back(*r->auto_d_a_nm);
                m.push_back(*r->manual->gbm_thickness_nm);
            }
        }
        group_json[name] = ks_json(a, m);
    }
    gbm["groups"] = std::move(group_json);
    out["gbm_thickness"] = std::move(gbm);

    // --- One-vs-rest ROC tasks ------------------------------------------
    // Gradings enter as binary classifier outputs (indicator scores); EDD
    // presence uses the accumulated area as a continuous score.
    json roc;
    {
        const GbmGrade grades[] = {GbmGrade::kThinning, GbmGrade::kNormal,
                                   GbmGrade::kThickening};
        for (GbmGrade task : grades) {
            std::vector<double> scores;
            std::vector<bool> labels;
            for (const CohortRow& r : rows) {
                if (!r.auto_gbm_grade || !r.manual || !r.manual->gbm_thickness_nm)
                    continue;
                const GbmGrade manual_grade =
                    grade_thickness(*r.manual->gbm_thickness_nm, config);
                scores.push_back(*r.auto_gbm_grade == task ? 1.0 : 0.0);
                labels.push_back(manual_grade == task);
            }
            roc[std::string("gbm_") + to_string(task)] = roc_json(scores, labels);
        }
    }
    {
        const FpeGrade grades[] = {FpeGrade::kMild, FpeGrade::kModerate,
                                   FpeGrade::kSevere};
        for (FpeGrade task : grades) {
            std::vector<double> scores;
            std::vector<bool> labels;
            for (const CohortRow& r : rows) {
                if (!r.auto_fpe_grade || !r.manual || !r.manual->fpe_grade) continue;
                scores.push_back(*r.auto_fpe_grade == task ? 1.0 : 0.0);
                labels.push_back(*r.manual->fpe_grade == to_string(task));
            }
            roc[std::string("fpe_") + to_string(task)] = roc_json(scores, labels);
        }
    }
    {
        const EddLocation locations[] = {
            EddLocation::kSubepithelial, EddLocation::kIntramembranous,
            EddLocation::kSubendothelial, EddLocation::kMesangial};
        for (EddLocation loc : locations) {
            std::vector<double> scores;
            std::vector<bool> labels;
            for (const CohortRow& r : rows) {
                const auto label = manual_presence(r, static_cast<int>(loc));
                if (!label) continue;
                scores.push_back(r.auto_areas.by(loc));
                labels.push_back(*label);
            }
            roc[std::string("edd_") + to_string(loc)] = roc_json(scores, labels);
        }
    }
    out["roc"] = std::move(roc);
    return out;
}

void write_cohort_csv(const std::filesystem::path& file,
                      const std::vector<CohortRow>& rows) {
    std::ofstream out(file);
    if (!out) throw Error("cannot write " + file.string());
    out << "case_id,pathology,auto_d_a_nm,manual_d_nm,auto_gbm_grade,"
           "auto_r_fpe,auto_fpe_grade,manual_fpe_grade,"
           "t_p_um2,t_g_um2,t_e_um2,t_m_um2,"
           "manual_edd_p,manual_edd_g,manual_edd_e,manual_edd_m\n";
    auto opt_num = [](const std::optional<double>& v) {
        return v ? std::to_string(*v) : std::string();
    };
    for (const CohortRow& r : rows) {
        out << r.case_id << ',' << r.pathology.value_or("") << ','
            << opt_num(r.auto_d_a_nm) << ','
            << (r.manual ? opt_num(r.manual->gbm_thickness_nm) : "") << ','
            << (r.auto_gbm_grade ? to_string(*r.auto_gbm_grade) : "") << ','
            << opt_num(r.auto_r_fpe) << ','
            << (r.auto_fpe_grade ? to_string(*r.auto_fpe_grade) : "") << ','
            << (r.manual && r.manual->fpe_grade ? *r.manual->fpe_grade : "") << ','
            << r.auto_areas.subepithelial << ',' << r.auto_areas.intramembranous << ','
            << r.auto_areas.subendothelial << ',' << r.auto_areas.mesangial;
        for (int i = 0; i < 4; ++i) {
            const auto p = manual_presence(r, i);
            out << ',' << (p ? (*p ? "1" : "0") : "");
        }
        out << '\n';
    }
}

}  // namespace glomorph
