#include "glomorph/patches.hpp"

#include <algorithm>
#include <cmath>

namespace glomorph {

std::vector<GfbPatch> crop_patches(const ImageMeta& meta,
                                   const std::vector<SamplePoint>& samples,
                                   double window_nm) {
    const int side = std::max(1, round_to_px(window_nm / meta.nm_per_pixel));
    std::vector<GfbPatch> patches;
    patches.reserve(samples.size());

    for (const SamplePoint& s : samples) {
        GfbPatch p;
        p.sample = s;
        p.window_px = side;
        const int cx = round_to_px(s.position.x);
        const int cy = round_to_px(s.position.y);
        const int x0 = cx - side / 2;
        const int y0 = cy - side / 2;
        p.x0 = std::max(0, x0);
        p.y0 = std::max(0, y0);
        p.x1 = std::min(meta.width_px, x0 + side);
        p.y1 = std::min(meta.height_px, y0 + side);
        if (p.x1 <= p.x0 || p.y1 <= p.y0) continue;

        const double inside = double(p.x1 - p.x0) * double(p.y1 - p.y0);
        if (inside < 0.5 * double(side) * double(side)) continue;
        patches.push_back(p);
    }
    return patches;
}

}  // namespace glomorph
