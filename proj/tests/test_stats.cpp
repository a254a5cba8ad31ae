#include <doctest.h>

#include <cmath>
#include <random>

#include "glomorph/errors.hpp"
#include "glomorph/stats.hpp"
#include "oracles.hpp"

using namespace glomorph;

TEST_SUITE("stats") {
    TEST_CASE("ks: identical samples") {
        const std::vector<double> a{3, 1, 4, 1, 5};
        const auto r = stats::ks_two_sample(a, a);
        CHECK(r.d == 0.0);
        CHECK(r.p == doctest::Approx(1.0));
    }

    TEST_CASE("ks: disjoint supports") {
        const auto r = stats::ks_two_sample({0, 1}, {10, 11});
        CHECK(r.d == 1.0);
    }

    TEST_CASE("ks: statistic equals the brute-force ECDF sweep") {
        std::mt19937 rng(17);
        std::normal_distribution<double> n1(0, 1), n2(0.3, 1.4);
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<double> a(50), b(50);
            for (double& x : a) x = n1(rng);
            for (double& x : b) x = n2(rng);
            const auto r = stats::ks_two_sample(a, b);
            CHECK(std::abs(r.d - oracles::ks_d_brute_force(a, b)) < 1e-12);
            CHECK(r.d >= 0.0);
            CHECK(r.d <= 1.0);
            // Symmetry in the two samples.
            const auto rs = stats::ks_two_sample(b, a);
            CHECK(rs.d == doctest::Approx(r.d).epsilon(1e-15));
            CHECK(rs.p == doctest::Approx(r.p).epsilon(1e-12));
        }
    }

    TEST_CASE("ks: empty sample raises") {
        CHECK_THROWS_AS(stats::ks_two_sample({}, {1.0}), EmptySampleError);
    }

    TEST_CASE("pearson: exact linear relations") {
        const std::vector<double> a{1, 2, 3, 4, 5};
        std::vector<double> b;
        for (double x : a) b.push_back(2 * x + 3);
        CHECK(stats::pearson(a, b) == doctest::Approx(1.0).epsilon(1e-12));
        std::vector<double> c;
        for (double x : a) c.push_back(-x);
        CHECK(stats::pearson(a, c) == doctest::Approx(-1.0).epsilon(1e-12));
    }

    TEST_CASE("pearson: matches the definitional formula") {
        std::mt19937 rng(23);
        std::normal_distribution<double> noise(0, 1);
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<double> a(100), b(100);
            for (std::size_t i = 0; i < a.size(); ++i) {
                a[i] = noise(rng);
                b[i] = 0.5 * a[i] + noise(rng);
            }
            CHECK(std::abs(stats::pearson(a, b) - oracles::pearson_definitional(a, b)) < 1e-12);
        }
    }

    TEST_CASE("pearson: invariant under positive affine transforms") {
        std::mt19937 rng(29);
        std::normal_distribution<double> noise(0, 1);
        std::vector<double> a(60), b(60);
        for (std::size_t i = 0; i < a.size(); ++i) {
            a[i] = noise(rng);
            b[i] = a[i] + noise(rng);
        }
        const double r = stats::pearson(a, b);
        std::vector<double> a2;
        for (double x : a) a2.push_back(3.7 * x + 11.0);
        CHECK(stats::pearson(a2, b) == doctest::Approx(r).epsilon(1e-12));
    }

    TEST_CASE("pearson: degenerate variance raises") {
        CHECK_THROWS_AS(stats::pearson({1, 1, 1}, {1, 2, 3}), DegenerateVarianceError);
        CHECK_THROWS_AS(stats::pearson({1.0}, {2.0}), EmptySampleError);
    }

    TEST_CASE("bland-altman: identical pairs collapse the limits") {
        const std::vector<double> a{5, 6, 7, 8};
        const auto r = stats::bland_altman(a, a);
        CHECK(r.mean_diff == 0.0);
        CHECK(r.loa_low == 0.0);
        CHECK(r.loa_high == 0.0);
        CHECK(r.pct_within == 1.0);
        CHECK(r.degenerate);
    }

    TEST_CASE("bland-altman: ~95% of normal diffs fall inside the limits") {
        std::mt19937 rng(31);
        std::normal_distribution<double> noise(0.0, 2.5);
        const int n = 10000;
        std::vector<double> a(n), b(n);
        for (int i = 0; i < n; ++i) {
            b[i] = double(i % 100);
            a[i] = b[i] + noise(rng);
        }
        const auto r = stats::bland_altman(a, b);
        CHECK(std::abs(r.pct_within - 0.95) <= 0.01);
        CHECK(!r.degenerate);
        CHECK(r.loa_low < r.loa_high);
    }

    TEST_CASE("roc: perfect separation and all-tied scores") {
        const auto perfect = stats::roc_auc({0.9, 0.8, 0.2, 0.1},
                                            {true, true, false, false});
        CHECK(perfect.auc == doctest::Approx(1.0));

        const auto tied = stats::roc_auc({0.5, 0.5, 0.5, 0.5},
                                         {true, false, true, false});
        CHECK(tied.auc == doctest::Approx(0.5));
        // Single tie group: the curve is the diagonal (0,0)-(1,1).
        REQUIRE(tied.points.size() == 2);
    }

    TEST_CASE("roc: trapezoid AUC equals the pairwise probability") {
        std::mt19937 rng(37);
        std::normal_distribution<double> pos(1.0, 1.0), neg(0.0, 1.0);
        std::uniform_int_distribution<int> coin(0, 1);
        std::uniform_int_distribution<int> quantized(0, 9);
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<double> scores(200);
            std::vector<bool> labels(200);
            const bool with_ties = trial % 2 == 0;
            for (int i = 0; i < 200; ++i) {
                labels[i] = coin(rng) == 1;
                scores[i] = with_ties ? double(quantized(rng)) / 10.0
                                      : (labels[i] ? pos(rng) : neg(rng));
            }
            const auto curve = stats::roc_auc(scores, labels);
            CHECK(std::abs(curve.auc - oracles::auc_pairwise(scores, labels)) < 1e-9);

            // Negating scores mirrors the AUC.
            std::vector<double> negated;
            for (double s : scores) negated.push_back(-s);
            const auto mirrored = stats::roc_auc(negated, labels);
            CHECK(mirrored.auc == doctest::Approx(1.0 - curve.auc).epsilon(1e-12));

            // Curves are monotone and anchored.
            CHECK(curve.points.front() == std::pair{0.0, 0.0});
            CHECK(curve.points.back() == std::pair{1.0, 1.0});
            for (std::size_t i = 1; i < curve.points.size(); ++i) {
                CHECK(curve.points[i].first >= curve.points[i - 1].first);
                CHECK(curve.points[i].second >= curve.points[i - 1].second);
            }
        }
    }

    TEST_CASE("roc: single class raises") {
        CHECK_THROWS_AS(stats::roc_auc({0.1, 0.2}, {true, true}), SingleClassError);
    }
}
