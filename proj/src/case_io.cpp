#include "glomorph/case_io.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "glomorph/errors.hpp"
#include "glomorph/png_io.hpp"

namespace glomorph {

using nlohmann::json;

namespace {

json load_json_file(const std::filesystem::path& file, const std::string& what) {
    std::ifstream in(file);
    if (!in) throw MissingFileError("cannot open " + what + ": " + file.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw Error("malformed JSON in " + file.string() + ": " + e.what());
    }
    return j;
}

void write_json_file(const std::filesystem::path& file, const json& j) {
    std::ofstream out(file);
    if (!out) throw Error("cannot write " + file.string());
    out << j.dump(2) << '\n';
}

ManualReference parse_manual_reference(const json& j) {
    ManualReference ref;
    if (j.contains("gbm_thickness_nm")) ref.gbm_thickness_nm = j.at("gbm_thickness_nm").get<double>();
    if (j.contains("fpe_grade")) ref.fpe_grade = j.at("fpe_grade").get<std::string>();
    if (j.contains("edd_presence")) {
        const json& p = j.at("edd_presence");
        ref.edd_presence = std::array<bool, 4>{
            p.at("subepithelial").get<bool>(), p.at("intramembranous").get<bool>(),
            p.at("subendothelial").get<bool>(), p.at("mesangial").get<bool>()};
    }
    return ref;
}

json manual_reference_json(const ManualReference& ref) {
    json j = json::object();
    if (ref.gbm_thickness_nm) j["gbm_thickness_nm"] = *ref.gbm_thickness_nm;
    if (ref.fpe_grade) j["fpe_grade"] = *ref.fpe_grade;
    if (ref.edd_presence) {
        const auto& p = *ref.edd_presence;
        j["edd_presence"] = {{"subepithelial", p[0]},
                             {"intramembranous", p[1]},
                             {"subendothelial", p[2]},
                             {"mesangial", p[3]}};
    }
    return j;
}

}  // namespace

CaseManifest parse_manifest(const std::filesystem::path& manifest_path) {
    const json j = load_json_file(manifest_path, "case manifest");
    CaseManifest m;
    m.base_dir = manifest_path.parent_path();
    try {
        m.case_id = j.at("case_id").get<std::string>();
        if (j.contains("pathology")) m.pathology = j.at("pathology").get<std::string>();
        for (const json& ij : j.at("images")) {
            ImageSource src;
            src.meta.image_id = ij.at("image_id").get<std::string>();
            src.meta.width_px = ij.at("width_px").get<int>();
            src.meta.height_px = ij.at("height_px").get<int>();
            src.meta.nm_per_pixel = ij.at("nm_per_pixel").get<double>();
            if (ij.contains("magnification_k"))
                src.meta.magnification_k = ij.at("magnification_k").get<double>();
            src.mask_file = m.base_dir / ij.at("mask_file").get<std::string>();
            src.p_mea_file = m.base_dir / ij.at("p_mea_file").get<std::string>();
            src.p_fpe_file = m.base_dir / ij.at("p_fpe_file").get<std::string>();
            src.detections_file = m.base_dir / ij.at("detections_file").get<std::string>();
            if (ij.contains("image_file"))
                src.image_file = m.base_dir / ij.at("image_file").get<std::string>();
            m.images.push_back(std::move(src));
        }
        if (j.contains("manual_reference"))
            m.manual_reference = parse_manual_reference(j.at("manual_reference"));
    } catch (const json::exception& e) {
        throw Error("manifest " + manifest_path.string() + ": " + e.what());
    }
    if (m.images.empty())
        throw Error("manifest " + manifest_path.string() + " lists no images");
    for (const auto& src : m.images) {
        if (src.meta.nm_per_pixel <= 0.0)
            throw Error("image " + src.meta.image_id + ": nm_per_pixel must be positive");
        if (src.meta.width_px < 32 || src.meta.height_px < 32)
            throw Error("image " + src.meta.image_id + ": dims must be at least 32 px");
    }
    return m;
}

std::vector<DetectionBox> read_detections_json(const std::filesystem::path& file,
                                               const std::string& image_id) {
    const json j = load_json_file(file, "detections for image " + image_id);
    if (!j.is_array())
        throw Error("detections for image " + image_id + " must be a JSON array");
    std::vector<DetectionBox> boxes;
    boxes.reserve(j.size());
    for (const json& bj : j) {
        DetectionBox b;
        try {
            b.x_min = bj.at("x_min").get<double>();
            b.y_min = bj.at("y_min").get<double>();
            b.x_max = bj.at("x_max").get<double>();
            b.y_max = bj.at("y_max").get<double>();
            b.confidence = bj.at("confidence").get<double>();
        } catch (const json::exception& e) {
            throw Error("detections for image " + image_id + ": " + e.what());
        }
        boxes.push_back(b);
    }
    return boxes;
}

CaseRecord load_case(const std::filesystem::path& manifest_path) {
    const CaseManifest manifest = parse_manifest(manifest_path);
    FileBackedProvider provider;

    CaseRecord record;
    record.case_id = manifest.case_id;
    record.pathology = manifest.pathology;
    record.manual_reference = manifest.manual_reference;
    record.images.reserve(manifest.images.size());
    for (const auto& src : manifest.images) {
        ModelOutputs outputs = provider.fetch(src);
        record.images.push_back(ImageRecord{src.meta, std::move(outputs.mask),
                                            std::move(outputs.p_mea),
                                            std::move(outputs.p_fpe),
                                            std::move(outputs.detections)});
    }
    return record;
}

std::filesystem::path save_case(const CaseRecord& record, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);

    json images = json::array();
    for (const ImageRecord& img : record.images) {
        const std::string& id = img.meta.image_id;
        write_label_png(dir / (id + ".mask.png"), img.mask);
        write_gray16_png(dir / (id + ".p_mea.png"), img.p_mea.raw());
        write_gray16_png(dir / (id + ".p_fpe.png"), img.p_fpe.raw());

        json boxes = json::array();
        for (const DetectionBox& b : img.detections)
            boxes.push_back({{"x_min", b.x_min},
                             {"y_min", b.y_min},
                             {"x_max", b.x_max},
                             {"y_max", b.y_max},
                             {"confidence", b.confidence}});
        write_json_file(dir / (id + ".detections.json"), boxes);

        json ij = {{"image_id", id},
                   {"width_px", img.meta.width_px},
                   {"height_px", img.meta.height_px},
                   {"nm_per_pixel", img.meta.nm_per_pixel},
                   {"mask_file", id + ".mask.png"},
                   {"p_mea_file", id + ".p_mea.png"},
                   {"p_fpe_file", id + ".p_fpe.png"},
                   {"detections_file", id + ".detections.json"}};
        if (img.meta.magnification_k) ij["magnification_k"] = *img.meta.magnification_k;
        images.push_back(std::move(ij));
    }

    json manifest = {{"case_id", record.case_id}, {"images", std::move(images)}};
    if (record.pathology) manifest["pathology"] = *record.pathology;
    if (record.manual_reference)
        manifest["manual_reference"] = manual_reference_json(*record.manual_reference);

    const auto manifest_path = dir / "manifest.json";
    write_json_file(manifest_path, manifest);
    return manifest_path;
}

}  // namespace glomorph
