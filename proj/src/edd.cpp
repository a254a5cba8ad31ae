#include "glomorph/edd.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "glomorph/units.hpp"

namespace glomorph {

const char* to_string(EddLocation loc) {
    switch (loc) {
        case EddLocation::kSubepithelial: return "subepithelial";
        case EddLocation::kIntramembranous: return "intramembranous";
        case EddLocation::kSubendothelial: return "subendothelial";
        case EddLocation::kMesangial: return "mesangial";
    }
    return "?";
}

double& EddAreas::by(EddLocation loc) {
    switch (loc) {
        case EddLocation::kSubepithelial: return subepithelial;
        case EddLocation::kIntramembranous: return intramembranous;
        case EddLocation::kSubendothelial: return subendothelial;
        case EddLocation::kMesangial: return mesangial;
    }
    return subepithelial;
}

double EddAreas::by(EddLocation loc) const {
    return const_cast<EddAreas*>(this)->by(loc);
}

std::optional<EddLocation> assign_box_location(const DetectionBox& box,
                                               const LabelImage& mask) {
    // Pixels whose centers fall inside the (half-open) box, clipped to the
    // image.
    const int x0 = std::max(0, static_cast<int>(std::ceil(box.x_min)));
    const int y0 = std::max(0, static_cast<int>(std::ceil(box.y_min)));
    const int x1 = std::min(mask.width() - 1, static_cast<int>(std::ceil(box.x_max)) - 1);
    const int y1 = std::min(mask.height() - 1, static_cast<int>(std::ceil(box.y_max)) - 1);
    if (x0 > x1 || y0 > y1) return std::nullopt;

    std::array<long, kLabelCount> counts{};
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x) ++counts[mask.at(x, y)];

    const long total = (long(x1) - x0 + 1) * (long(y1) - y0 + 1);
    if (counts[kBackground] * 5 >= total * 4) return std::nullopt;  // >= 80% background

    // Plurality among non-background labels; the scan order encodes the
    // tie-break priority GBM > podocyte > endothelium > mesangium.
    constexpr std::pair<Label, EddLocation> kPriority[] = {
        {kGbm, EddLocation::kIntramembranous},
        {kPodocyte, EddLocation::kSubepithelial},
        {kEndothelium, EddLocation::kSubendothelial},
        {kMesangium, EddLocation::kMesangial},
    };
    long best = -1;
    EddLocation loc = EddLocation::kIntramembranous;
    for (const auto& [label, candidate] : kPriority) {
        if (counts[label] > best) {
            best = counts[label];
            loc = candidate;
        }
    }
    if (best <= 0) return std::nullopt;
    return loc;
}

std::vector<EddBoxRecord> assign_image_boxes(const ImageMeta& meta, const LabelImage& mask,
                                             const std::vector<DetectionBox>& detections,
                                             const PipelineConfig& config) {
    std::vector<EddBoxRecord> records;
    for (const DetectionBox& box : detections) {
        if (box.confidence < config.detection_confidence_threshold) continue;
        EddBoxRecord rec;
        rec.image_id = meta.image_id;
        rec.box = box;
        rec.location = assign_box_location(box, mask);
        rec.area_um2 = to_physical_area_um2(box.area_px2(), meta.nm_per_pixel);
        records.push_back(std::move(rec));
    }
    return records;
}

EddResult reduce_edd(std::vector<EddBoxRecord> boxes, const PipelineConfig& config) {
    EddResult result;
    for (const EddBoxRecord& rec : boxes)
        if (rec.location) result.areas.by(*rec.location) += rec.area_um2;

    result.presence.subepithelial = result.areas.subepithelial > config.t_edd_um2;
    result.presence.intramembranous = result.areas.intramembranous > config.t_edd_um2;
    result.presence.subendothelial = result.areas.subendothelial > config.t_edd_um2;
    result.presence.mesangial = result.areas.mesangial > config.t_edd_um2;
    result.boxes = std::move(boxes);
    return result;
}

EddResult accumulate_edd(const CaseRecord& record, const PipelineConfig& config) {
    std::vector<EddBoxRecord> all;
    for (const ImageRecord& img : record.images) {
        auto recs = assign_image_boxes(img.meta, img.mask, img.detections, config);
        all.insert(all.end(), std::make_move_iterator(recs.begin()),
                   std::make_move_iterator(recs.end()));
    }
    return reduce_edd(std::move(all), config);
}

}  // namespace glomorph
