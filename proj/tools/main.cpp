#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "glomorph/cohort.hpp"
#include "glomorph/errors.hpp"
#include "glomorph/phantom.hpp"
#include "glomorph/pipeline.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace glomorph;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 2;
constexpr int kExitEmptyStructure = 3;
constexpr int kExitValidationFailure = 4;

PipelineConfig load_config_opt(const std::string& config_file) {
    return config_file.empty() ? PipelineConfig{} : PipelineConfig::load(config_file);
}

int run_process(const std::string& manifest, const std::string& config_file,
                const std::string& out_dir, int workers, bool no_render) {
    const PipelineConfig config = load_config_opt(config_file);
    ProcessOptions options;
    options.workers = workers;
    options.render = !no_render;
    if (!out_dir.empty()) options.out_dir = fs::path(out_dir);

    const CaseQuantification result = process_case(fs::path(manifest), config, options);

    if (result.all_images_empty()) {
        std::cerr << "no GBM found in any image of case " << result.case_id << ":\n";
        for (const std::string& id : result.empty_structure_images)
            std::cerr << "  " << id << ": no GBM pixels\n";
        return kExitEmptyStructure;
    }

    const json report = case_report_json(result, config);
    std::cout << "case " << result.case_id << ": ";
    if (result.gbm.d_a_nm)
        std::cout << "D_a=" << *result.gbm.d_a_nm << " nm (" << to_string(*result.gbm.grade)
                  << ", n=" << result.gbm.n_measurements << ")";
    else
        std::cout << "D_a=n/a";
    if (result.fpe.r_fpe)
        std::cout << ", R_FPE=" << *result.fpe.r_fpe << " (" << to_string(*result.fpe.grade)
                  << ")";
    std::cout << ", EDD total=" << result.edd.areas.total() << " um^2"
              << ", time=" << result.runtime.total_s << " s\n";
    if (out_dir.empty()) std::cout << report.dump(2) << '\n';
    return kExitOk;
}

int run_cohort(const std::string& dir, const std::string& config_file,
               const std::string& out_dir, int workers, bool no_render, bool csv) {
    const PipelineConfig config = load_config_opt(config_file);
    const fs::path root(dir);
    if (!fs::is_directory(root)) {
        std::cerr << "not a directory: " << dir << '\n';
        return kExitInputError;
    }

    // Manifests either sit directly in the directory or one level down as
    // <case>/manifest.json.
    std::vector<fs::path> manifests;
    for (const auto& entry : fs::directory_iterator(root)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json")
            manifests.push_back(entry.path());
        else if (entry.is_directory() && fs::exists(entry.path() / "manifest.json"))
            manifests.push_back(entry.path() / "manifest.json");
    }
    std::sort(manifests.begin(), manifests.end());

    std::vector<CohortRow> rows;
    const fs::path out_root(out_dir);
    fs::create_directories(out_root);
    for (const fs::path& manifest_path : manifests) {
        CaseManifest manifest;
        try {
            manifest = parse_manifest(manifest_path);
        } catch (const Error&) {
            continue;  // not a case manifest (e.g. a ground_truth.json sidecar)
        }
        ProcessOptions options;
        options.workers = workers;
        options.render = !no_render;
        options.out_dir = out_root / manifest.case_id;
        const CaseQuantification result = process_case(manifest_path, config, options);
        rows.push_back(make_cohort_row(result, manifest.manual_reference,
                                       manifest.pathology));
        std::cout << "processed " << manifest.case_id << " (" << result.n_images
                  << " images)\n";
    }
    if (rows.empty()) {
        std::cerr << "no case manifests found under " << dir << '\n';
        return kExitInputError;
    }

    std::ofstream stats_out(out_root / "cohort_stats.json");
    stats_out << cohort_stats_json(rows, config).dump(2) << '\n';
    if (csv) write_cohort_csv(out_root / "cohort_points.csv", rows);
    std::cout << "cohort: " << rows.size() << " cases -> "
              << (out_root / "cohort_stats.json").string() << '\n';
    return kExitOk;
}

int run_phantom(const std::string& spec_file, const std::string& out_dir,
                std::uint64_t seed, bool seed_set) {
    std::ifstream in(spec_file);
    if (!in) {
        std::cerr << "cannot open spec: " << spec_file << '\n';
        return kExitInputError;
    }
    json j;
    in >> j;
    PhantomSpec spec = PhantomSpec::from_json(j);
    if (seed_set) spec.seed = seed;

    const PhantomGroundTruth gt = generate_phantom_case(spec, out_dir);
    std::cout << "phantom case '" << spec.case_id << "' written to " << out_dir
              << " (width " << gt.true_width_nm << " nm, R_FPE "
              << gt.expected_r_fpe << ")\n";
    return kExitOk;
}

int run_validate(const std::string& report_file, const std::string& gt_file,
                 double tol_thickness_pct, double tol_fpe, double tol_area_um2) {
    std::ifstream rin(report_file), gin(gt_file);
    if (!rin || !gin) {
        std::cerr << "cannot open " << (!rin ? report_file : gt_file) << '\n';
        return kExitInputError;
    }
    json report, gt_json;
    rin >> report;
    gin >> gt_json;
    const PhantomGroundTruth gt = PhantomGroundTruth::from_json(gt_json);

    bool all_ok = true;
    auto check = [&](const std::string& name, bool ok, const std::string& detail) {
        std::printf("[%s] %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
        all_ok = all_ok && ok;
    };

    // Thickness: undo the stereological factor and compare to the planted width.
    if (report.at("gbm").at("d_a_nm").is_null()) {
        check("thickness", false, "report has no measurements");
    } else {
        const double d_a = report.at("gbm").at("d_a_nm").get<double>();
        const double mean_d = d_a / (std::numbers::pi / 4.0);
        const double rel_pct = 100.0 * std::abs(mean_d - gt.true_width_nm) / gt.true_width_nm;
        char buf[128];
        std::snprintf(buf, sizeof buf, "mean d %.2f nm vs true %.2f nm (%.2f%%, tol %.2f%%)",
                      mean_d, gt.true_width_nm, rel_pct, tol_thickness_pct);
        check("thickness", rel_pct <= tol_thickness_pct, buf);
    }

    if (report.at("fpe").at("r_fpe").is_null()) {
        check("fpe", false, "report has no patches");
    } else {
        const double r = report.at("fpe").at("r_fpe").get<double>();
        char buf[128];
        std::snprintf(buf, sizeof buf, "R_FPE %.4f vs expected %.4f (tol %.3f)", r,
                      gt.expected_r_fpe, tol_fpe);
        check("fpe", std::abs(r - gt.expected_r_fpe) <= tol_fpe, buf);
    }

    const double t_edd = report.at("config").at("t_edd_um2").get<double>();
    const char* locations[] = {"subepithelial", "intramembranous", "subendothelial",
                               "mesangial"};
    const double planted[] = {gt.planted_areas_um2.subepithelial,
                              gt.planted_areas_um2.intramembranous,
                              gt.planted_areas_um2.subendothelial,
                              gt.planted_areas_um2.mesangial};
    for (int i = 0; i < 4; ++i) {
        const double got = report.at("edd").at("areas_um2").at(locations[i]).get<double>();
        char buf[128];
        std::snprintf(buf, sizeof buf, "%.4f um^2 vs planted %.4f (tol %.3f)", got,
                      planted[i], tol_area_um2);
        check(std::string("edd_area_") + locations[i],
              std::abs(got - planted[i]) <= tol_area_um2, buf);

        const bool expect_present = planted[i] > t_edd;
        const bool got_present = report.at("edd").at("presence").at(locations[i]).get<bool>();
        check(std::string("edd_presence_") + locations[i], got_present == expect_present,
              got_present == expect_present ? (expect_present ? "present" : "absent")
                                            : "presence flag mismatch");
    }

    return all_ok ? kExitOk : kExitValidationFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Glomerular TEM morphometry: GBM thickness, foot-process "
                 "effacement and electron-dense deposit quantification"};
    app.require_subcommand(1);

    // process
    std::string manifest, config_file, out_dir;
    int workers = 0;
    bool no_render = false;
    auto* process = app.add_subcommand("process", "Quantify one case from its manifest");
    process->add_option("manifest", manifest, "case manifest JSON")->required();
    process->add_option("--config", config_file, "pipeline config JSON");
    process->add_option("--out", out_dir, "output directory (report + overlays)");
    process->add_option("--workers", workers, "worker threads (0 = all cores)");
    process->add_flag("--no-render", no_render, "skip overlay rendering");

    // cohort
    std::string cohort_dir, cohort_out;
    bool csv = false;
    auto* cohort = app.add_subcommand("cohort", "Process a directory of cases and "
                                                "compute cohort statistics");
    cohort->add_option("dir", cohort_dir, "directory of case manifests")->required();
    cohort->add_option("--out", cohort_out, "output directory")->required();
    cohort->add_option("--config", config_file, "pipeline config JSON");
    cohort->add_option("--workers", workers, "worker threads (0 = all cores)");
    cohort->add_flag("--no-render", no_render, "skip overlay rendering");
    cohort->add_flag("--csv", csv, "also write cohort_points.csv");

    // phantom
    std::string spec_file, phantom_out;
    std::uint64_t seed = 0;
    auto* phantom = app.add_subcommand("phantom", "Generate a synthetic ground-truth case");
    phantom->add_option("spec", spec_file, "phantom spec JSON")->required();
    phantom->add_option("--out", phantom_out, "output directory")->required();
    auto* seed_opt = phantom->add_option("--seed", seed, "RNG seed override");

    // validate
    std::string report_file, gt_file;
    double tol_thickness_pct = 3.0, tol_fpe = 0.05, tol_area_um2 = 0.02;
    auto* validate = app.add_subcommand("validate", "Check a report against phantom "
                                                    "ground truth");
    validate->add_option("report", report_file, "report.json")->required();
    validate->add_option("ground_truth", gt_file, "ground_truth.json")->required();
    validate->add_option("--tol-thickness-pct", tol_thickness_pct,
                         "relative thickness tolerance, percent");
    validate->add_option("--tol-fpe", tol_fpe, "absolute R_FPE tolerance");
    validate->add_option("--tol-area-um2", tol_area_um2, "absolute area tolerance");

    CLI11_PARSE(app, argc, argv);

    try {
        if (process->parsed())
            return run_process(manifest, config_file, out_dir, workers, no_render);
        if (cohort->parsed())
            return run_cohort(cohort_dir, config_file, cohort_out, workers, no_render, csv);
        if (phantom->parsed())
            return run_phantom(spec_file, phantom_out, seed, !seed_opt->empty());
        if (validate->parsed())
            return run_validate(report_file, gt_file, tol_thickness_pct, tol_fpe,
                                tol_area_um2);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInputError;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInputError;
    }
    return kExitOk;
}
