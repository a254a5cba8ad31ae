#include "glomorph/pipeline.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

#include "glomorph/centerline.hpp"
#include "glomorph/errors.hpp"
#include "glomorph/skeleton.hpp"

namespace glomorph {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct ImageWork {
    double t_load = 0, t_gbm = 0, t_fpe = 0, t_edd = 0;
    std::vector<GbmMeasurementRecord> measurements;
    int n_candidates = 0;
    int n_discarded = 0;
    std::vector<PatchRecord> patches;
    std::vector<EddBoxRecord> boxes;
    bool empty_structure = false;
    std::string image_id;
};

/// One image through cropping, gating/measurement, FPE lookup and EDD
/// assignment. `t_load` starts at whatever the caller spent producing the
/// outputs (file decode for the disk path, zero in memory).
ImageWork quantify_image(const ImageMeta& meta, const LabelImage& mask,
                         const ProbabilityMap& p_mea, const ProbabilityMap& p_fpe,
                         const std::vector<DetectionBox>& detections,
                         const PipelineConfig& config, double load_seconds) {
    ImageWork work;
    work.image_id = meta.image_id;
    work.t_load = load_seconds;

    auto t0 = Clock::now();
    std::vector<GfbPatch> patches;
    try {
        const auto skeleton = skeletonize_gbm(mask);
        const Centerline centerline =
            order_and_prune(skeleton, config.min_branch_nm, meta.nm_per_pixel, meta.image_id);
        const auto samples = sample_centerline(centerline, config.stride_nm,
                                               meta.nm_per_pixel, config.sample_offset_nm);
        patches = crop_patches(meta, samples, config.window_nm);
    } catch (const EmptyStructureError&) {
        work.empty_structure = true;
        work.t_load += seconds_since(t0);
        // EDD does not depend on the centerline; still assign boxes below.
        auto te = Clock::now();
        work.boxes = assign_image_boxes(meta, mask, detections, config);
        work.t_edd = seconds_since(te);
        return work;
    }
    work.t_load += seconds_since(t0);

    // GBM: gate on suitability, then measure across the membrane.
    t0 = Clock::now();
    for (const GfbPatch& patch : patches) {
        PatchRecord rec{meta.image_id, patch, 0.0, false};
        rec.gated_in = gate_suitability(patch, p_mea, config.suitability_threshold);
        if (rec.gated_in) {
            ++work.n_candidates;
            const MeasureOutcome outcome = measure_cross_section(
                mask, patch.sample, meta.nm_per_pixel, config.max_ray_nm());
            if (const auto* m = std::get_if<Measurement>(&outcome)) {
                work.measurements.push_back({meta.image_id, *m});
            } else {
                ++work.n_discarded;
            }
        }
        work.patches.push_back(std::move(rec));
    }
    work.t_gbm = seconds_since(t0);

    // FPE: every patch contributes, gated or not.
    t0 = Clock::now();
    for (PatchRecord& rec : work.patches)
        rec.fpe_prob = patch_fpe_probability(rec.patch, p_fpe);
    work.t_fpe = seconds_since(t0);

    t0 = Clock::now();
    work.boxes = assign_image_boxes(meta, mask, detections, config);
    work.t_edd = seconds_since(t0);
    return work;
}

RuntimeBucket make_bucket(const std::vector<double>& per_image) {
    RuntimeBucket b;
    if (per_image.empty()) return b;
    for (double v : per_image) b.total_s += v;
    b.mean_s = b.total_s / double(per_image.size());
    double ss = 0;
    for (double v : per_image) ss += (v - b.mean_s) * (v - b.mean_s);
    b.sd_s = per_image.size() > 1 ? std::sqrt(ss / double(per_image.size() - 1)) : 0.0;
    return b;
}

/// Runs `task(i)` for i in [0, n) on `workers` threads. Slot-indexed results
/// keep the reduction order independent of scheduling.
template <typename Task>
void parallel_for(int n, int workers, Task&& task) {
    if (workers <= 0) workers = int(std::thread::hardware_concurrency());
    workers = std::max(1, std::min(workers, n));
    if (workers == 1) {
        for (int i = 0; i < n; ++i) task(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
                try {
                    task(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

CaseQuantification reduce_case(std::string case_id, std::vector<ImageWork> works,
                               const PipelineConfig& config) {
    CaseQuantification result;
    result.case_id = std::move(case_id);
    result.n_images = int(works.size());

    std::vector<double> t_load, t_gbm, t_fpe, t_edd;
    std::vector<double> d_values, fpe_probs;
    std::vector<EddBoxRecord> all_boxes;

    for (ImageWork& w : works) {
        t_load.push_back(w.t_load);
        t_gbm.push_back(w.t_gbm);
        t_fpe.push_back(w.t_fpe);
        t_edd.push_back(w.t_edd);
        if (w.empty_structure) result.empty_structure_images.push_back(w.image_id);

        for (auto& m : w.measurements) {
            d_values.push_back(m.measurement.d_nm);
            result.gbm.measurements.push_back(std::move(m));
        }
        result.gbm.n_candidates += w.n_candidates;
        result.n_discarded += w.n_discarded;
        for (auto& p : w.patches) {
            fpe_probs.push_back(p.fpe_prob);
            result.patches.push_back(std::move(p));
        }
        all_boxes.insert(all_boxes.end(), std::make_move_iterator(w.boxes.begin()),
                         std::make_move_iterator(w.boxes.end()));
    }

    result.gbm.n_measurements = int(d_values.size());
    if (!d_values.empty()) {
        const ThicknessSummary summary = aggregate_thickness(d_values, config);
        result.gbm.d_a_nm = summary.d_a_nm;
        result.gbm.grade = summary.grade;
    }

    result.fpe.n_patches = int(fpe_probs.size());
    result.fpe.per_patch = fpe_probs;
    if (!fpe_probs.empty()) {
        const FpeSummary summary = aggregate_fpe(fpe_probs, config);
        result.fpe.r_fpe = summary.r_fpe;
        result.fpe.grade = summary.grade;
    }

    result.edd = reduce_edd(std::move(all_boxes), config);

    result.runtime.load_process = make_bucket(t_load);
    result.runtime.gbm = make_bucket(t_gbm);
    result.runtime.fpe = make_bucket(t_fpe);
    result.runtime.edd = make_bucket(t_edd);
    result.runtime.n_images = result.n_images;
    return result;
}

void write_outputs(const CaseQuantification& result, const PipelineConfig& config,
                   const ProcessOptions& options,
                   const std::function<RgbImage(int)>& backdrop_for) {
    if (!options.out_dir) return;
    std::filesystem::create_directories(*options.out_dir);

    std::ofstream out(*options.out_dir / "report.json");
    if (!out) throw Error("cannot write report.json in " + options.out_dir->string());
    out << case_report_json(result, config).dump(2) << '\n';
    out.close();

    if (!options.render) return;
    // Group primitives per image, preserving order.
    std::vector<std::string> ids;
    auto index_of = [&](const std::string& id) {
        for (std::size_t i = 0; i < ids.size(); ++i)
            if (ids[i] == id) return int(i);
        ids.push_back(id);
        return int(ids.size()) - 1;
    };
    std::vector<ImageOverlayData> data;
    auto at = [&](const std::string& id) -> ImageOverlayData& {
        const int i = index_of(id);
        if (i >= int(data.size())) data.resize(i + 1);
        return data[static_cast<std::size_t>(i)];
    };
    for (const auto& m : result.gbm.measurements)
        at(m.image_id).measurements.push_back(m.measurement);
    for (const auto& p : result.patches) {
        auto& d = at(p.image_id);
        d.patches.push_back(p.patch);
        d.patch_fpe.push_back(p.fpe_prob);
    }
    for (const auto& b : result.edd.boxes) at(b.image_id).boxes.push_back(b);

    for (std::size_t i = 0; i < ids.size(); ++i) {
        const RgbImage base = backdrop_for(int(i));
        const OverlayImages views = render_overlays(base, data[i], options.style);
        write_overlays(*options.out_dir, ids[i], views);
    }
}

}  // namespace

CaseQuantification process_case(const std::filesystem::path& manifest_path,
                                const PipelineConfig& config,
                                const ProcessOptions& options) {
    config.validate();
    const auto case_start = Clock::now();
    const CaseManifest manifest = parse_manifest(manifest_path);
    const int n = int(manifest.images.size());

    std::vector<ImageWork> works(n);
    FileBackedProvider provider;
    parallel_for(n, options.workers, [&](int i) {
        const ImageSource& src = manifest.images[i];
        const auto t0 = Clock::now();
        const ModelOutputs outputs = provider.fetch(src);
        const double load_s = seconds_since(t0);
        works[i] = quantify_image(src.meta, outputs.mask, outputs.p_mea, outputs.p_fpe,
                                  outputs.detections, config, load_s);
    });

    CaseQuantification result = reduce_case(manifest.case_id, std::move(works), config);
    result.runtime.total_s = seconds_since(case_start);

    write_outputs(result, config, options, [&](int i) {
        // Re-read the mask (or micrograph) for the backdrop only when needed.
        const ImageSource& src = manifest.images[i];
        if (src.image_file) return read_rgb8_png(*src.image_file);
        return backdrop_from_mask(read_label_png(src.mask_file));
    });
    return result;
}

CaseQuantification process_case(const CaseRecord& record, const PipelineConfig& config,
                                const ProcessOptions& options) {
    config.validate();
    const auto case_start = Clock::now();
    const int n = int(record.images.size());
    if (n == 0) throw Error("case " + record.case_id + " has no images");

    std::vector<ImageWork> works(n);
    parallel_for(n, options.workers, [&](int i) {
        const ImageRecord& img = record.images[i];
        works[i] = quantify_image(img.meta, img.mask, img.p_mea, img.p_fpe,
                                  img.detections, config, 0.0);
    });

    CaseQuantification result = reduce_case(record.case_id, std::move(works), config);
    result.runtime.total_s = seconds_since(case_start);

    write_outputs(result, config, options, [&](int i) {
        return backdrop_from_mask(record.images[static_cast<std::size_t>(i)].mask);
    });
    return result;
}

nlohmann::json case_report_json(const CaseQuantification& result,
                                const PipelineConfig& config) {
    json gbm = {{"n_measurements", result.gbm.n_measurements},
                {"n_candidates", result.gbm.n_candidates}};
    if (result.gbm.d_a_nm) {
        gbm["d_a_nm"] = *result.gbm.d_a_nm;
        gbm["grade"] = to_string(*result.gbm.grade);
    } else {
        gbm["d_a_nm"] = nullptr;
        gbm["error"] = "no_measurements";
    }
    json measurements = json::array();
    for (const auto& m : result.gbm.measurements)
        measurements.push_back({{"image_id", m.image_id},
                                {"x", m.measurement.site.x},
                                {"y", m.measurement.site.y},
                                {"d_nm", m.measurement.d_nm}});
    gbm["measurements"] = std::move(measurements);

    json fpe = {{"n_patches", result.fpe.n_patches}};
    if (result.fpe.r_fpe) {
        fpe["r_fpe"] = *result.fpe.r_fpe;
        fpe["grade"] = to_string(*result.fpe.grade);
    } else {
        fpe["r_fpe"] = nullptr;
        fpe["error"] = "no_patches";
    }

    json boxes = json::array();
    for (const auto& b : result.edd.boxes)
        boxes.push_back({{"image_id", b.image_id},
                         {"box",
                          {{"x_min", b.box.x_min},
                           {"y_min", b.box.y_min},
                           {"x_max", b.box.x_max},
                           {"y_max", b.box.y_max},
                           {"confidence", b.box.confidence}}},
                         {"location", b.location ? to_string(*b.location) : "unassigned"},
                         {"area_um2", b.area_um2}});
    json edd = {{"areas_um2",
                 {{"subepithelial", result.edd.areas.subepithelial},
                  {"intramembranous", result.edd.areas.intramembranous},
                  {"subendothelial", result.edd.areas.subendothelial},
                  {"mesangial", result.edd.areas.mesangial}}},
                {"presence",
                 {{"subepithelial", result.edd.presence.subepithelial},
                  {"intramembranous", result.edd.presence.intramembranous},
                  {"subendothelial", result.edd.presence.subendothelial},
                  {"mesangial", result.edd.presence.mesangial}}},
                {"boxes", std::move(boxes)}};

    auto bucket = [](const RuntimeBucket& b) {
        return json{{"total_s", b.total_s}, {"mean_s", b.mean_s}, {"sd_s", b.sd_s}};
    };
    json runtime = {{"load_process", bucket(result.runtime.load_process)},
                    {"gbm", bucket(result.runtime.gbm)},
                    {"fpe", bucket(result.runtime.fpe)},
                    {"edd", bucket(result.runtime.edd)},
                    {"total_s", result.runtime.total_s},
                    {"n_images", result.runtime.n_images}};

    json report = {{"case_id", result.case_id},
                   {"config", config.to_json()},
                   {"n_images", result.n_images},
                   {"gbm", std::move(gbm)},
                   {"fpe", std::move(fpe)},
                   {"edd", std::move(edd)},
                   {"runtime", std::move(runtime)}};
    if (!result.empty_structure_images.empty())
        report["empty_structure_images"] = result.empty_structure_images;
    return report;
}

nlohmann::json strip_runtime(nlohmann::json report) {
    report.erase("runtime");
    return report;
}

}  // namespace glomorph
