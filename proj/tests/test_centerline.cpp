#include <doctest.h>

#include <cmath>
#include <numbers>

#include "glomorph/centerline.hpp"
#include "glomorph/errors.hpp"
#include "glomorph/skeleton.hpp"
#include "oracles.hpp"

using namespace glomorph;

namespace {

Image<std::uint8_t> blank(int w, int h) { return Image<std::uint8_t>(w, h, 0); }

double total_length_nm(const Centerline& cl, double nm_per_pixel) {
    double len = 0;
    for (const auto& pl : cl.polylines) len += pl.length_px() * nm_per_pixel;
    return len;
}

}  // namespace

TEST_SUITE("centerline") {
    TEST_CASE("spur below threshold is pruned, main line survives") {
        auto sk = blank(120, 40);
        for (int x = 5; x < 105; ++x) sk.at(x, 20) = 1;  // 100-px line
        for (int k = 1; k <= 3; ++k) sk.at(50, 20 - k) = 1;  // 3-px spur

        const Centerline cl = order_and_prune(sk, 100.0, 10.0);
        REQUIRE(cl.polylines.size() == 1);
        CHECK(!cl.polylines[0].closed);
        CHECK(cl.polylines[0].points.size() >= 95);
        CHECK(cl.polylines[0].points.size() <= 101);
    }

    TEST_CASE("closed loop comes back as one cyclic polyline") {
        const auto sk = skeletonize_gbm(oracles::annulus_mask(150, 150, 75, 75, 50, 10));
        const Centerline cl = order_and_prune(sk, 100.0, 10.0);
        REQUIRE(cl.polylines.size() == 1);
        const Polyline& pl = cl.polylines[0];
        CHECK(pl.closed);
        // First and last points are neighbors (the wrap step closes the loop).
        CHECK(distance(pl.points.front(), pl.points.back()) <=
              std::numbers::sqrt2 + 1e-9);
    }

    TEST_CASE("two disjoint bands give two polylines") {
        auto sk = blank(100, 60);
        for (int x = 10; x < 90; ++x) sk.at(x, 15) = 1;
        for (int x = 10; x < 90; ++x) sk.at(x, 45) = 1;
        const Centerline cl = order_and_prune(sk, 100.0, 10.0);
        CHECK(cl.polylines.size() == 2);
    }

    TEST_CASE("pruning everything raises") {
        auto sk = blank(50, 50);
        sk.at(25, 25) = 1;  // single isolated pixel
        CHECK_THROWS_AS(order_and_prune(sk, 300.0, 10.0), EmptyStructureError);
    }

    TEST_CASE("open polyline sampling arithmetic") {
        // Straight 101-point line, 1 px spacing @10 nm/px: length 1000 nm.
        Centerline cl;
        Polyline pl;
        for (int i = 0; i <= 100; ++i) pl.points.push_back({double(i), 0.0});
        cl.polylines.push_back(pl);

        const auto samples = sample_centerline(cl, 250.0, 10.0);
        REQUIRE(samples.size() == 5);
        for (int i = 0; i < 5; ++i) {
            CHECK(samples[i].arc_position_nm == doctest::Approx(250.0 * i));
            CHECK(samples[i].position.x == doctest::Approx(25.0 * i));
            CHECK(samples[i].tangent.x == doctest::Approx(1.0));
            CHECK(samples[i].tangent.y == doctest::Approx(0.0));
        }
    }

    TEST_CASE("polyline shorter than the stride still yields one sample") {
        Centerline cl;
        Polyline pl;
        pl.points = {{0, 0}, {1, 0}, {2, 0}};
        cl.polylines.push_back(pl);
        const auto samples = sample_centerline(cl, 500.0, 10.0);
        REQUIRE(samples.size() == 1);
        CHECK(samples[0].arc_position_nm == 0.0);
    }

    TEST_CASE("closed loop: K = floor(len/S) and tangents are perpendicular to radii") {
        const double cx = 256, cy = 256, r = 150;  // circumference ~9424.8 nm
        const auto sk = skeletonize_gbm(oracles::annulus_mask(512, 512, cx, cy, r, 12));
        const Centerline cl = order_and_prune(sk, 300.0, 10.0);
        REQUIRE(cl.polylines.size() == 1);
        REQUIRE(cl.polylines[0].closed);

        const double len_nm = total_length_nm(cl, 10.0);
        CHECK(len_nm == doctest::Approx(2 * std::numbers::pi * r * 10).epsilon(0.02));

        const double stride = 314.0;
        const auto samples = sample_centerline(cl, stride, 10.0);
        CHECK(samples.size() == std::size_t(std::floor(len_nm / stride)));

        for (const auto& s : samples) {
            REQUIRE(s.tangent.norm() == doctest::Approx(1.0).epsilon(1e-9));
            const Vec2 radial = (s.position - Vec2{cx, cy}).normalized();
            const double cosang = std::abs(radial.dot(s.tangent));
            CHECK(std::asin(std::min(1.0, cosang)) * 180.0 / std::numbers::pi <= 5.0);
        }
    }

    TEST_CASE("halving the stride at least doubles K-1") {
        const auto sk = skeletonize_gbm(oracles::annulus_mask(400, 400, 200, 200, 120, 10));
        const Centerline cl = order_and_prune(sk, 300.0, 10.0);
        const auto coarse = sample_centerline(cl, 800.0, 10.0);
        const auto fine = sample_centerline(cl, 400.0, 10.0);
        CHECK(fine.size() - 1 >= 2 * (coarse.size() - 1));
    }

    TEST_CASE("arc length is stable under 30-degree rotation") {
        // The same 200-px capsule at 0 and 30 degrees, both fully interior:
        // measured centerline length must match despite the staircase
        // rasterization of the tilted copy.
        auto capsule = [](double angle_deg) {
            LabelImage m(300, 300, kBackground);
            const double th = angle_deg * std::numbers::pi / 180.0;
            const Vec2 c{150, 150};
            const Vec2 dir{std::cos(th), std::sin(th)};
            const Vec2 a = c - dir * 100.0, b = c + dir * 100.0;
            for (int y = 0; y < 300; ++y)
                for (int x = 0; x < 300; ++x) {
                    const Vec2 p{double(x), double(y)};
                    const double t = std::clamp((p - a).dot(dir), 0.0, 200.0);
                    if (distance(p, a + dir * t) <= 10.0) m.at(x, y) = kGbm;
                }
            return m;
        };
        const Centerline cl_flat =
            order_and_prune(skeletonize_gbm(capsule(0.0)), 300.0, 10.0);
        const Centerline cl_tilted =
            order_and_prune(skeletonize_gbm(capsule(30.0)), 300.0, 10.0);

        const double len_flat = total_length_nm(cl_flat, 10.0);
        const double len_tilted = total_length_nm(cl_tilted, 10.0);
        CHECK(std::abs(len_tilted / len_flat - 1.0) < 0.03);
    }
}
