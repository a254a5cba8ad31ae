#include "glomorph/skeleton.hpp"

#include <array>
#include <vector>

#include "glomorph/errors.hpp"

namespace glomorph {
namespace {

// Neighborhood bits in clockwise order starting north:
// n[0]=N, n[1]=NE, n[2]=E, n[3]=SE, n[4]=S, n[5]=SW, n[6]=W, n[7]=NW.
std::array<int, 8> neighborhood(const Image<std::uint8_t>& img, int x, int y) {
    return {img.get_or(x, y - 1, 0),     img.get_or(x + 1, y - 1, 0),
            img.get_or(x + 1, y, 0),     img.get_or(x + 1, y + 1, 0),
            img.get_or(x, y + 1, 0),     img.get_or(x - 1, y + 1, 0),
            img.get_or(x - 1, y, 0),     img.get_or(x - 1, y - 1, 0)};
}

// Guo-Hall deletability test for one sub-iteration.
bool guo_hall_delete(const std::array<int, 8>& n, int subiter) {
    const int p2 = n[0], p3 = n[1], p4 = n[2], p5 = n[3];
    const int p6 = n[4], p7 = n[5], p8 = n[6], p9 = n[7];

    const int c = ((!p2) & (p3 | p4)) + ((!p4) & (p5 | p6)) +
                  ((!p6) & (p7 | p8)) + ((!p8) & (p9 | p2));
    const int n1 = (p9 | p2) + (p3 | p4) + (p5 | p6) + (p7 | p8);
    const int n2 = (p2 | p3) + (p4 | p5) + (p6 | p7) + (p8 | p9);
    const int nmin = n1 < n2 ? n1 : n2;
    const int m = subiter == 0 ? ((p6 | p7 | (!p9)) & p8) : ((p2 | p3 | (!p5)) & p4);
    return c == 1 && nmin >= 2 && nmin <= 3 && m == 0;
}

// Yokoi connectivity number for 8-connected foreground. 1 means deleting the
// pixel keeps local topology intact.
int connectivity8(const std::array<int, 8>& n) {
    // x1..x8 counterclockwise from east, with complements.
    const int x[8] = {n[2], n[1], n[0], n[7], n[6], n[5], n[4], n[3]};
    int c = 0;
    for (int k = 0; k < 8; k += 2) {
        const int a = 1 - x[k];
        const int b = 1 - x[(k + 1) % 8];
        const int d = 1 - x[(k + 2) % 8];
        c += a - a * b * d;
    }
    return c;
}

int neighbor_count(const std::array<int, 8>& n) {
    int b = 0;
    for (int v : n) b += v;
    return b;
}

bool in_full_2x2(const Image<std::uint8_t>& img, int x, int y) {
    auto full = [&](int x0, int y0) {
        return img.get_or(x0, y0, 0) && img.get_or(x0 + 1, y0, 0) &&
               img.get_or(x0, y0 + 1, 0) && img.get_or(x0 + 1, y0 + 1, 0);
    };
    return full(x, y) || full(x - 1, y) || full(x, y - 1) || full(x - 1, y - 1);
}

}  // namespace

Image<std::uint8_t> thin_binary(const Image<std::uint8_t>& fg) {
    Image<std::uint8_t> img = fg;
    const int w = img.width(), h = img.height();

    // Active worklist: every surviving foreground pixel (a superset of the
    // deletable boundary), compacted as pixels disappear.
    std::vector<int> active;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (img.at(x, y)) active.push_back(y * w + x);

    std::vector<int> deletions;
    bool changed = true;
    while (changed) {
        changed = false;
        for (int subiter = 0; subiter < 2; ++subiter) {
            deletions.clear();
            for (int idx : active) {
                const int x = idx % w, y = idx / w;
                if (img.at(x, y) && guo_hall_delete(neighborhood(img, x, y), subiter))
                    deletions.push_back(idx);
            }
            for (int idx : deletions) {
                img.pixels()[idx] = 0;
                changed = true;
            }
        }
        std::erase_if(active, [&](int idx) { return img.pixels()[idx] == 0; });
    }

    // Guo-Hall can leave 2x2 blocks at staircase corners; shave simple,
    // non-endpoint pixels until the skeleton is strictly one pixel wide.
    changed = true;
    while (changed) {
        changed = false;
        for (int idx : active) {
            const int x = idx % w, y = idx / w;
            if (!img.at(x, y) || !in_full_2x2(img, x, y)) continue;
            const auto n = neighborhood(img, x, y);
            if (connectivity8(n) == 1 && neighbor_count(n) > 1) {
                img.at(x, y) = 0;
                changed = true;
            }
        }
        std::erase_if(active, [&](int idx) { return img.pixels()[idx] == 0; });
    }
    return img;
}

Image<std::uint8_t> skeletonize_gbm(const LabelImage& mask) {
    Image<std::uint8_t> fg(mask.width(), mask.height(), 0);
    bool any = false;
    const auto& in = mask.pixels();
    auto& out = fg.pixels();
    for (std::size_t i = 0; i < in.size(); ++i) {
        if (in[i] == kGbm) {
            out[i] = 1;
            any = true;
        }
    }
    if (!any) throw EmptyStructureError("mask contains no GBM pixels");
    return thin_binary(fg);
}

}  // namespace glomorph
