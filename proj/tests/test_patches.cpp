#include <doctest.h>

#include "glomorph/patches.hpp"

using namespace glomorph;

namespace {

ImageMeta meta_1024() {
    ImageMeta m;
    m.image_id = "img";
    m.width_px = 1024;
    m.height_px = 1024;
    m.nm_per_pixel = 10.0;
    return m;
}

SamplePoint at(double x, double y) { return {{x, y}, {1, 0}, 0, 0.0}; }

}  // namespace

TEST_SUITE("patches") {
    TEST_CASE("window side comes from the physical width") {
        const auto patches = crop_patches(meta_1024(), {at(512, 512)}, 1500.0);
        REQUIRE(patches.size() == 1);
        CHECK(patches[0].window_px == 150);
        CHECK(patches[0].x1 - patches[0].x0 == 150);
        CHECK(patches[0].y1 - patches[0].y0 == 150);
        // Window covers the sample.
        CHECK(patches[0].x0 <= 512);
        CHECK(patches[0].x1 > 512);
    }

    TEST_CASE("patch close to the border is dropped below 50% coverage") {
        // 150-px window, center 10 px from the left edge: ~85 of 150 columns
        // remain -> 57% kept; center 10 px from the corner: 57%*57% = 32% -> dropped.
        const auto edge = crop_patches(meta_1024(), {at(10, 512)}, 1500.0);
        CHECK(edge.size() == 1);
        const auto corner = crop_patches(meta_1024(), {at(10, 10)}, 1500.0);
        CHECK(corner.empty());
    }

    TEST_CASE("interior samples map one-to-one onto patches") {
        std::vector<SamplePoint> samples;
        for (int i = 0; i < 5; ++i) samples.push_back(at(300 + 80 * i, 500));
        const auto patches = crop_patches(meta_1024(), samples, 1500.0);
        CHECK(patches.size() == 5);
    }

    TEST_CASE("clamped patch keeps its nominal window size") {
        const auto patches = crop_patches(meta_1024(), {at(30, 512)}, 1500.0);
        REQUIRE(patches.size() == 1);
        CHECK(patches[0].window_px == 150);
        CHECK(patches[0].x0 == 0);
        CHECK(patches[0].x1 == 30 - 75 + 150);
    }
}
