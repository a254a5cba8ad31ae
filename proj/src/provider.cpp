#include "glomorph/provider.hpp"

#include "glomorph/case_io.hpp"
#include "glomorph/errors.hpp"
#include "glomorph/png_io.hpp"

namespace glomorph {

void validate_outputs(const ImageMeta& meta, const ModelOutputs& outputs) {
    const std::string& id = meta.image_id;

    auto check_dims = [&](int w, int h, const char* what) {
        if (w != meta.width_px || h != meta.height_px)
            throw DimensionMismatchError(
                "image " + id + ": " + what + " is " + std::to_string(w) + "x" +
                std::to_string(h) + ", expected " + std::to_string(meta.width_px) +
                "x" + std::to_string(meta.height_px));
    };
    check_dims(outputs.mask.width(), outputs.mask.height(), "mask");
    check_dims(outputs.p_mea.width(), outputs.p_mea.height(), "p_mea map");
    check_dims(outputs.p_fpe.width(), outputs.p_fpe.height(), "p_fpe map");

    for (std::uint8_t v : outputs.mask.pixels())
        if (v >= kLabelCount)
            throw IllegalLabelError("image " + id + ": mask contains label " +
                                    std::to_string(int(v)) + " outside {0..4}");

    for (const DetectionBox& b : outputs.detections) {
        if (!(b.x_min < b.x_max) || !(b.y_min < b.y_max))
            throw Error("image " + id + ": degenerate detection box");
        if (b.x_max <= 0 || b.y_max <= 0 || b.x_min >= meta.width_px ||
            b.y_min >= meta.height_px)
            throw Error("image " + id + ": detection box outside image bounds");
        if (b.confidence < 0.0 || b.confidence > 1.0)
            throw Error("image " + id + ": detection confidence outside [0,1]");
    }
}

ModelOutputs FileBackedProvider::fetch(const ImageSource& source) {
    const std::string& id = source.meta.image_id;
    auto must_exist = [&](const std::filesystem::path& p, const char* what) {
        if (!std::filesystem::exists(p))
            throw MissingFileError("image " + id + ": missing " + what + " " + p.string());
    };
    must_exist(source.mask_file, "mask_file");
    must_exist(source.p_mea_file, "p_mea_file");
    must_exist(source.p_fpe_file, "p_fpe_file");
    must_exist(source.detections_file, "detections_file");

    ModelOutputs out{
        read_label_png(source.mask_file),
        ProbabilityMap(read_gray16_png(source.p_mea_file), ProbKind::kMeasurementSuitability),
        ProbabilityMap(read_gray16_png(source.p_fpe_file), ProbKind::kFpe),
        read_detections_json(source.detections_file, id),
    };
    validate_outputs(source.meta, out);
    return out;
}

}  // namespace glomorph
