#include <doctest.h>

#include <random>

#include "glomorph/errors.hpp"
#include "glomorph/fpe.hpp"

using namespace glomorph;

namespace {

ProbabilityMap fpe_map(int w, int h, double p) {
    return ProbabilityMap(Image<std::uint16_t>(w, h, ProbabilityMap::quantize(p)),
                          ProbKind::kFpe);
}

GfbPatch patch_at(int x, int y) {
    GfbPatch p;
    p.sample.position = {double(x), double(y)};
    p.sample.tangent = {1, 0};
    return p;
}

}  // namespace

TEST_SUITE("fpe") {
    TEST_CASE("patch probability is the map value at the center") {
        CHECK(patch_fpe_probability(patch_at(8, 8), fpe_map(16, 16, 0.95)) ==
              doctest::Approx(0.95).epsilon(1e-4));
        CHECK(patch_fpe_probability(patch_at(8, 8), fpe_map(16, 16, 0.0)) == 0.0);
    }

    TEST_CASE("split map reads the fused level over the fused region") {
        Image<std::uint16_t> raw(32, 16, ProbabilityMap::quantize(0.1));
        for (int y = 0; y < 16; ++y)
            for (int x = 16; x < 32; ++x) raw.at(x, y) = ProbabilityMap::quantize(0.9);
        const ProbabilityMap map(raw, ProbKind::kFpe);
        CHECK(patch_fpe_probability(patch_at(24, 8), map) == doctest::Approx(0.9).epsilon(1e-4));
        CHECK(patch_fpe_probability(patch_at(8, 8), map) == doctest::Approx(0.1).epsilon(1e-4));
    }

    TEST_CASE("aggregation and grading") {
        PipelineConfig config;
        const FpeSummary zero = aggregate_fpe(std::vector<double>{0, 0, 0}, config);
        CHECK(zero.r_fpe == 0.0);
        CHECK(zero.grade == FpeGrade::kMild);

        const FpeSummary mid = aggregate_fpe(std::vector<double>{0.2, 0.8}, config);
        CHECK(mid.r_fpe == doctest::Approx(0.5));
        CHECK(mid.grade == FpeGrade::kModerate);

        CHECK(grade_fpe(0.75, config) == FpeGrade::kSevere);
    }

    TEST_CASE("grade boundaries follow the clinical table") {
        PipelineConfig config;
        CHECK(grade_fpe(0.39, config) == FpeGrade::kMild);
        CHECK(grade_fpe(0.40, config) == FpeGrade::kModerate);
        CHECK(grade_fpe(0.70, config) == FpeGrade::kModerate);
        CHECK(grade_fpe(0.71, config) == FpeGrade::kSevere);
    }

    TEST_CASE("empty input raises") {
        PipelineConfig config;
        CHECK_THROWS_AS(aggregate_fpe({}, config), NoPatchesError);
    }

    TEST_CASE("range, extremes, permutation invariance and monotonicity") {
        PipelineConfig config;
        std::mt19937 rng(5);
        std::uniform_real_distribution<double> dist(0.0, 1.0);
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<double> probs(1 + trial % 13);
            for (double& p : probs) p = dist(rng);
            const double r = aggregate_fpe(probs, config).r_fpe;
            CHECK(r >= 0.0);
            CHECK(r <= 1.0);

            auto shuffled = probs;
            std::shuffle(shuffled.begin(), shuffled.end(), rng);
            CHECK(aggregate_fpe(shuffled, config).r_fpe == doctest::Approx(r).epsilon(1e-15));

            auto bumped = probs;
            std::uniform_int_distribution<std::size_t> pick(0, probs.size() - 1);
            const auto i = pick(rng);
            bumped[i] = std::min(1.0, bumped[i] + 0.1);
            CHECK(aggregate_fpe(bumped, config).r_fpe >= r - 1e-15);
        }

        CHECK(aggregate_fpe(std::vector<double>{1, 1, 1, 1}, config).r_fpe == 1.0);
        CHECK(aggregate_fpe(std::vector<double>{0, 0}, config).r_fpe == 0.0);
    }
}
