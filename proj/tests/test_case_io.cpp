#include <doctest.h>

#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "glomorph/case_io.hpp"
#include "glomorph/errors.hpp"
#include "glomorph/phantom.hpp"
#include "glomorph/png_io.hpp"

using namespace glomorph;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("glomorph_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

PhantomSpec small_spec() {
    PhantomSpec spec;
    spec.case_id = "io";
    spec.n_images = 3;
    spec.width_px = 256;
    spec.height_px = 256;
    spec.radius_nm = 700.0;
    spec.width_nm = 200.0;
    spec.band_nm = 200.0;
    spec.mesangium_radius_nm = 250.0;
    spec.fused_fraction = 0.25;
    spec.planted_edd = {{EddLocation::kMesangial, 6, 6, 2}};
    spec.seed = 99;
    return spec;
}

}  // namespace

TEST_SUITE("case_io") {
    TEST_CASE("save/load round trip is the identity") {
        const auto dir = temp_dir("roundtrip");
        auto [record, gt] = generate_phantom(small_spec());
        record.pathology = "MN";
        ManualReference ref;
        ref.gbm_thickness_nm = 333.0;
        ref.fpe_grade = "moderate";
        ref.edd_presence = std::array<bool, 4>{true, false, false, true};
        record.manual_reference = ref;

        const fs::path manifest = save_case(record, dir);
        const CaseRecord loaded = load_case(manifest);

        CHECK(loaded.case_id == record.case_id);
        REQUIRE(loaded.images.size() == record.images.size());
        CHECK(loaded.pathology == record.pathology);
        REQUIRE(loaded.manual_reference.has_value());
        CHECK(*loaded.manual_reference->gbm_thickness_nm == 333.0);
        CHECK(*loaded.manual_reference->fpe_grade == "moderate");
        CHECK(*loaded.manual_reference->edd_presence ==
              std::array<bool, 4>{true, false, false, true});

        for (std::size_t i = 0; i < record.images.size(); ++i) {
            const ImageRecord& a = record.images[i];
            const ImageRecord& b = loaded.images[i];
            CHECK(a.meta.image_id == b.meta.image_id);
            CHECK(a.meta.nm_per_pixel == b.meta.nm_per_pixel);
            CHECK(a.mask == b.mask);
            CHECK(a.p_mea.raw() == b.p_mea.raw());
            CHECK(a.p_fpe.raw() == b.p_fpe.raw());
            REQUIRE(a.detections.size() == b.detections.size());
            for (std::size_t k = 0; k < a.detections.size(); ++k) {
                CHECK(a.detections[k].x_min == b.detections[k].x_min);
                CHECK(a.detections[k].y_max == b.detections[k].y_max);
                CHECK(a.detections[k].confidence == b.detections[k].confidence);
            }
        }
        CHECK(loaded.images.size() == 3);
        fs::remove_all(dir);
    }

    TEST_CASE("dimension mismatch names the image") {
        const auto dir = temp_dir("dims");
        auto [record, gt] = generate_phantom(small_spec());
        const fs::path manifest = save_case(record, dir);

        // Shrink one mask on disk behind the manifest's back.
        write_label_png(dir / "io_img1.mask.png", LabelImage(64, 64, kBackground));
        try {
            load_case(manifest);
            FAIL("expected DimensionMismatchError");
        } catch (const DimensionMismatchError& e) {
            CHECK(std::string(e.what()).find("io_img1") != std::string::npos);
        }
        fs::remove_all(dir);
    }

    TEST_CASE("illegal label names the image") {
        const auto dir = temp_dir("labels");
        auto [record, gt] = generate_phantom(small_spec());
        const fs::path manifest = save_case(record, dir);
        record.images[2].mask.at(10, 10) = 7;
        write_label_png(dir / "io_img2.mask.png", record.images[2].mask);
        try {
            load_case(manifest);
            FAIL("expected IllegalLabelError");
        } catch (const IllegalLabelError& e) {
            CHECK(std::string(e.what()).find("io_img2") != std::string::npos);
            CHECK(std::string(e.what()).find('7') != std::string::npos);
        }
        fs::remove_all(dir);
    }

    TEST_CASE("missing file names the image") {
        const auto dir = temp_dir("missing");
        auto [record, gt] = generate_phantom(small_spec());
        const fs::path manifest = save_case(record, dir);
        fs::remove(dir / "io_img0.detections.json");
        try {
            load_case(manifest);
            FAIL("expected MissingFileError");
        } catch (const MissingFileError& e) {
            CHECK(std::string(e.what()).find("io_img0") != std::string::npos);
        }
        fs::remove_all(dir);
    }

    TEST_CASE("16-bit full-scale probability reads as exactly 1.0") {
        const auto dir = temp_dir("fullscale");
        write_gray16_png(dir / "p.png", Image<std::uint16_t>(40, 40, 65535));
        const auto raw = read_gray16_png(dir / "p.png");
        const ProbabilityMap map(raw, ProbKind::kFpe);
        CHECK(map.at(20, 20) == 1.0);
        fs::remove_all(dir);
    }

    TEST_CASE("manifest without images is rejected") {
        const auto dir = temp_dir("noimages");
        std::ofstream(dir / "manifest.json") << R"({"case_id":"x","images":[]})";
        CHECK_THROWS_AS(parse_manifest(dir / "manifest.json"), Error);
        fs::remove_all(dir);
    }
}
