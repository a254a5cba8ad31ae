#include <doctest.h>

#include <cmath>

#include "glomorph/edd.hpp"
#include "glomorph/units.hpp"
#include "oracles.hpp"

using namespace glomorph;

namespace {

LabelImage filled(int w, int h, std::uint8_t label) { return LabelImage(w, h, label); }

CaseRecord tiny_case(std::vector<ImageRecord> images) {
    CaseRecord c;
    c.case_id = "t";
    c.images = std::move(images);
    return c;
}

ImageRecord image_with(const std::string& id, LabelImage mask,
                       std::vector<DetectionBox> boxes, double nm_per_pixel = 10.0) {
    ImageRecord img;
    img.meta.image_id = id;
    img.meta.width_px = mask.width();
    img.meta.height_px = mask.height();
    img.meta.nm_per_pixel = nm_per_pixel;
    img.p_mea = ProbabilityMap(Image<std::uint16_t>(mask.width(), mask.height(), 59000),
                               ProbKind::kMeasurementSuitability);
    img.p_fpe = ProbabilityMap(Image<std::uint16_t>(mask.width(), mask.height(), 0),
                               ProbKind::kFpe);
    img.mask = std::move(mask);
    img.detections = std::move(boxes);
    return img;
}

}  // namespace

TEST_SUITE("edd") {
    TEST_CASE("box fully inside GBM is intramembranous") {
        const auto loc = assign_box_location({10, 10, 20, 20, 0.9}, filled(64, 64, kGbm));
        REQUIRE(loc.has_value());
        CHECK(*loc == EddLocation::kIntramembranous);
    }

    TEST_CASE("plurality rule: 60% podocyte / 30% GBM / 10% background") {
        LabelImage mask(64, 64, kBackground);
        // Box rows 0..9 of a 10x10 box at (0,0): 6 rows podocyte, 3 GBM, 1 bg.
        for (int y = 0; y < 6; ++y)
            for (int x = 0; x < 10; ++x) mask.at(x, y) = kPodocyte;
        for (int y = 6; y < 9; ++y)
            for (int x = 0; x < 10; ++x) mask.at(x, y) = kGbm;
        const auto loc = assign_box_location({0, 0, 10, 10, 0.9}, mask);
        REQUIRE(loc.has_value());
        CHECK(*loc == EddLocation::kSubepithelial);
    }

    TEST_CASE("95% background is unassigned") {
        LabelImage mask(64, 64, kBackground);
        for (int x = 0; x < 5; ++x) mask.at(x, 0) = kGbm;  // 5 of 100 pixels
        CHECK(!assign_box_location({0, 0, 10, 10, 0.9}, mask).has_value());
    }

    TEST_CASE("tie between GBM and podocyte goes to GBM") {
        LabelImage mask(64, 64, kBackground);
        for (int y = 0; y < 5; ++y)
            for (int x = 0; x < 10; ++x) mask.at(x, y) = kPodocyte;
        for (int y = 5; y < 10; ++y)
            for (int x = 0; x < 10; ++x) mask.at(x, y) = kGbm;
        const auto loc = assign_box_location({0, 0, 10, 10, 0.9}, mask);
        REQUIRE(loc.has_value());
        CHECK(*loc == EddLocation::kIntramembranous);
    }

    TEST_CASE("no boxes means all-zero areas and all-absent flags") {
        PipelineConfig config;
        const auto result = accumulate_edd(tiny_case({image_with("a", filled(64, 64, kGbm), {})}),
                                           config);
        CHECK(result.areas.total() == 0.0);
        CHECK(!result.presence.subepithelial);
        CHECK(!result.presence.intramembranous);
        CHECK(!result.presence.subendothelial);
        CHECK(!result.presence.mesangial);
    }

    TEST_CASE("presence threshold is strict") {
        PipelineConfig config;  // T_EDD = 3 um^2
        // 11.16 um^2 of podocyte-side boxes: present (cohort anchor value).
        // A box of 1116x100 px at 10 nm/px is 11.16 um^2.
        auto img = image_with("a", filled(1200, 128, kPodocyte),
                              {{0, 0, 1116, 100, 0.99}});
        const auto present = accumulate_edd(tiny_case({std::move(img)}), config);
        CHECK(present.areas.subepithelial == doctest::Approx(11.16));
        CHECK(present.presence.subepithelial);

        // 0.00 um^2 subendothelial: absent.
        CHECK(!present.presence.subendothelial);

        // Exactly at the threshold: absent (strict inequality).
        auto at_threshold = image_with("b", filled(640, 640, kMesangium),
                                       {{0, 0, 300, 100, 0.99}});
        const auto exact = accumulate_edd(tiny_case({std::move(at_threshold)}), config);
        CHECK(exact.areas.mesangial == doctest::Approx(3.0));
        CHECK(!exact.presence.mesangial);
    }

    TEST_CASE("confidence gate skips low-confidence boxes") {
        PipelineConfig config;  // threshold 0.5
        auto img = image_with("a", filled(64, 64, kGbm),
                              {{0, 0, 10, 10, 0.4}, {20, 20, 30, 30, 0.5}});
        const auto result = accumulate_edd(tiny_case({std::move(img)}), config);
        CHECK(result.boxes.size() == 1);  // 0.4 dropped, 0.5 kept (>= threshold)
        CHECK(result.areas.intramembranous == doctest::Approx(0.01));
    }

    TEST_CASE("conservation: assigned box areas sum to the per-location totals") {
        PipelineConfig config;
        LabelImage mask(128, 128, kBackground);
        for (int y = 0; y < 64; ++y)
            for (int x = 0; x < 64; ++x) mask.at(x, y) = kGbm;
        for (int y = 64; y < 128; ++y)
            for (int x = 0; x < 64; ++x) mask.at(x, y) = kPodocyte;
        for (int y = 0; y < 64; ++y)
            for (int x = 64; x < 128; ++x) mask.at(x, y) = kEndothelium;
        for (int y = 64; y < 128; ++y)
            for (int x = 64; x < 128; ++x) mask.at(x, y) = kMesangium;

        auto img = image_with("a", std::move(mask),
                              {{1, 1, 21, 11, 0.9},      // GBM
                               {5, 70, 25, 90, 0.9},     // podocyte
                               {70, 5, 90, 45, 0.9},     // endothelium
                               {70, 70, 120, 120, 0.9},  // mesangium
                               {0, 0, 3, 3, 0.3}});      // dropped by confidence
        const auto result = accumulate_edd(tiny_case({std::move(img)}), config);

        double assigned_sum = 0;
        for (const auto& rec : result.boxes)
            if (rec.location) assigned_sum += rec.area_um2;
        CHECK(std::abs(assigned_sum - result.areas.total()) <=
              1e-9 * std::max(1.0, assigned_sum));
    }

    TEST_CASE("additivity over images") {
        PipelineConfig config;
        auto img1 = image_with("a", filled(64, 64, kGbm), {{0, 0, 10, 10, 0.9}});
        auto img2 = image_with("b", filled(64, 64, kMesangium), {{0, 0, 20, 20, 0.9}});

        const auto joint = accumulate_edd(tiny_case({img1, img2}), config);
        const auto only1 = accumulate_edd(tiny_case({img1}), config);
        const auto only2 = accumulate_edd(tiny_case({img2}), config);

        CHECK(joint.areas.intramembranous ==
              doctest::Approx(only1.areas.intramembranous + only2.areas.intramembranous));
        CHECK(joint.areas.mesangial ==
              doctest::Approx(only1.areas.mesangial + only2.areas.mesangial));
    }

    TEST_CASE("raising the threshold never turns absent into present") {
        PipelineConfig low, high;
        low.t_edd_um2 = 1.0;
        high.t_edd_um2 = 5.0;
        auto img = image_with("a", filled(640, 640, kGbm), {{0, 0, 600, 30, 0.9}});
        const auto at_low = accumulate_edd(tiny_case({img}), low);
        const auto at_high = accumulate_edd(tiny_case({img}), high);
        CHECK(at_low.presence.intramembranous);   // 1.8 um^2 > 1
        CHECK(!at_high.presence.intramembranous); // 1.8 um^2 < 5
    }
}
