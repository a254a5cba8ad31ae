#pragma once

#include <vector>

#include "glomorph/centerline.hpp"
#include "glomorph/types.hpp"

namespace glomorph {

/// One GFB sampling window around a centerline sample. Bounds are half-open
/// pixel ranges, clamped to the image.
struct GfbPatch {
    SamplePoint sample;
    int window_px = 0;  // nominal (unclamped) side length
    int x0 = 0, y0 = 0, x1 = 0, y1 = 0;

    int center_x() const { return round_to_px(sample.position.x); }
    int center_y() const { return round_to_px(sample.position.y); }
};

/// Axis-aligned square windows of side round(window_nm / nm_per_pixel)
/// centered on each sample. Windows near the border are clamped; a patch is
/// dropped when less than half of its nominal area stays inside the image.
std::vector<GfbPatch> crop_patches(const ImageMeta& meta,
                                   const std::vector<SamplePoint>& samples,
                                   double window_nm);

}  // namespace glomorph
