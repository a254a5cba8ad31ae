#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include <nlohmann/json.hpp>

#include "glomorph/case_io.hpp"
#include "glomorph/errors.hpp"
#include "glomorph/phantom.hpp"

using namespace glomorph;
namespace fs = std::filesystem;

namespace {

PhantomSpec base_spec() {
    PhantomSpec spec;
    spec.case_id = "ph";
    spec.width_px = 512;
    spec.height_px = 512;
    spec.radius_nm = 1500.0;
    spec.width_nm = 300.0;
    spec.band_nm = 400.0;
    spec.mesangium_radius_nm = 500.0;
    return spec;
}

std::string file_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_SUITE("phantom") {
    TEST_CASE("annulus width matches the spec at pixel scale") {
        auto [record, gt] = generate_phantom(base_spec());
        const LabelImage& mask = record.images[0].mask;
        // Radial GBM extent along +x from the center: 30 +- 1 px.
        const int cy = 255, cx0 = 255;
        int count = 0;
        for (int x = cx0; x < 512; ++x)
            if (mask.at(x, cy) == kGbm) ++count;
        CHECK(std::abs(count - 30) <= 1);
    }

    TEST_CASE("fused arc covers exactly the requested fraction") {
        auto spec = base_spec();
        spec.fused_fraction = 0.5;
        auto [record, gt] = generate_phantom(spec);
        const auto& raw = record.images[0].p_fpe.raw();
        // Sample the probability ring at the GBM radius.
        int fused = 0, total = 0;
        for (int k = 0; k < 720; ++k) {
            const double th = 2 * std::numbers::pi * k / 720.0;
            const int x = int(std::lround(255.5 + 150 * std::cos(th)));
            const int y = int(std::lround(255.5 + 150 * std::sin(th)));
            ++total;
            if (raw.at(x, y) > 32768) ++fused;
        }
        CHECK(std::abs(double(fused) / total - 0.5) < 0.02);
        CHECK(gt.expected_r_fpe == doctest::Approx(0.9 * 0.5 + 0.05));
    }

    TEST_CASE("planted mesangial boxes sum to the announced area") {
        auto spec = base_spec();
        spec.planted_edd = {{EddLocation::kMesangial, 10, 10, 3}};  // 3 x 0.01 um^2
        auto [record, gt] = generate_phantom(spec);
        CHECK(gt.planted_areas_um2.mesangial == doctest::Approx(0.03));
        CHECK(record.images[0].detections.size() == 3);
        for (const DetectionBox& b : record.images[0].detections) {
            CHECK(b.area_px2() == doctest::Approx(100.0));
            // Fully inside the mesangial disc.
            for (int y = int(b.y_min); y < int(b.y_max); ++y)
                for (int x = int(b.x_min); x < int(b.x_max); ++x)
                    CHECK(record.images[0].mask.at(x, y) == kMesangium);
        }
    }

    TEST_CASE("same seed gives byte-identical artifacts") {
        const fs::path dir1 = fs::temp_directory_path() / "glomorph_det1";
        const fs::path dir2 = fs::temp_directory_path() / "glomorph_det2";
        fs::remove_all(dir1);
        fs::remove_all(dir2);

        auto spec = base_spec();
        spec.fused_fraction = 0.3;
        spec.planted_edd = {{EddLocation::kMesangial, 8, 8, 4},
                            {EddLocation::kIntramembranous, 6, 6, 2}};
        spec.seed = 1234;
        generate_phantom_case(spec, dir1);
        generate_phantom_case(spec, dir2);

        for (const auto& entry : fs::directory_iterator(dir1)) {
            const auto name = entry.path().filename();
            CAPTURE(name.string());
            CHECK(file_bytes(entry.path()) == file_bytes(dir2 / name));
        }
        fs::remove_all(dir1);
        fs::remove_all(dir2);
    }

    TEST_CASE("infeasible boxes are rejected") {
        auto spec = base_spec();
        // 100x100 boxes cannot fit inside a 30-px-wide annulus.
        spec.planted_edd = {{EddLocation::kIntramembranous, 100, 100, 1}};
        CHECK_THROWS_AS(generate_phantom(spec), SpecInfeasibleError);
    }

    TEST_CASE("invalid geometry is rejected") {
        auto spec = base_spec();
        spec.width_nm = 20.0;  // 2 px at scale
        CHECK_THROWS_AS(generate_phantom(spec), SpecInfeasibleError);

        spec = base_spec();
        spec.mesangium_radius_nm = 1400.0;  // collides with the endothelium band
        CHECK_THROWS_AS(generate_phantom(spec), SpecInfeasibleError);

        spec = base_spec();
        spec.radius_nm = 3000.0;  // loop does not fit in 512 px at 10 nm/px
        CHECK_THROWS_AS(generate_phantom(spec), SpecInfeasibleError);
    }

    TEST_CASE("spec json round trip") {
        auto spec = base_spec();
        spec.fused_fraction = 0.4;
        spec.planted_edd = {{EddLocation::kSubepithelial, 12, 8, 5}};
        spec.seed = 77;
        const PhantomSpec back = PhantomSpec::from_json(spec.to_json());
        CHECK(back.case_id == spec.case_id);
        CHECK(back.fused_fraction == spec.fused_fraction);
        REQUIRE(back.planted_edd.size() == 1);
        CHECK(back.planted_edd[0].location == EddLocation::kSubepithelial);
        CHECK(back.planted_edd[0].box_w_px == 12);
        CHECK(back.seed == 77);
    }
}
