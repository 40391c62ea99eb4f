#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "vqansr/confidence.hpp"
#include "vqansr/rng.hpp"

using namespace vqansr;

namespace {

PredictionMatrix matrix_from_max_scores(const std::vector<double>& maxima) {
    PredictionMatrix m;
    for (double s : maxima) {
        PredictionRow row;
        row.scores[0] = s;
        for (int j = 1; j < kNumClasses; ++j) row.scores[j] = 0.0;
        row.box = {0, 0, 10, 10};
        row.box_confidence = 1.0;
        m.rows.push_back(row);
    }
    return m;
}

// Independent long-double two-pass reference for the pooled mean and
// population standard deviation of per-row maxima.
ScoreStats reference_stats(const std::vector<double>& maxima) {
    long double sum = 0.0L;
    for (double v : maxima) sum += v;
    const long double mu = sum / static_cast<long double>(maxima.size());
    long double sq = 0.0L;
    for (double v : maxima) sq += (v - mu) * (v - mu);
    return {static_cast<double>(mu),
            static_cast<double>(std::sqrt(sq / static_cast<long double>(maxima.size())))};
}

}  // namespace

TEST_CASE("score statistics, two-point case") {
    const auto m = matrix_from_max_scores({0.9, 0.7});
    const std::vector<PredictionMatrix> batch{m};
    const auto s = score_statistics(batch);
    CHECK(s.mu == Catch::Approx(0.8).margin(1e-15));
    CHECK(s.sigma == Catch::Approx(0.1).margin(1e-15));
}

TEST_CASE("score statistics, zero variance") {
    const std::vector<PredictionMatrix> batch{matrix_from_max_scores({0.42, 0.42, 0.42})};
    const auto s = score_statistics(batch);
    CHECK(s.mu == Catch::Approx(0.42).margin(1e-15));
    CHECK(s.sigma == 0.0);
}

TEST_CASE("score statistics match the high-precision reference") {
    Rng rng(7);
    std::vector<double> maxima;
    std::vector<PredictionMatrix> batch;
    std::vector<double> pending;
    for (int i = 0; i < 1000; ++i) {
        pending.push_back(rng.next_double());
        maxima.push_back(pending.back());
        if (pending.size() == 40) {  // spread over several matrices
            batch.push_back(matrix_from_max_scores(pending));
            pending.clear();
        }
    }
    if (!pending.empty()) batch.push_back(matrix_from_max_scores(pending));
    const auto got = score_statistics(batch);
    const auto want = reference_stats(maxima);
    CHECK(std::abs(got.mu - want.mu) < 1e-12);
    CHECK(std::abs(got.sigma - want.sigma) < 1e-12);
}

TEST_CASE("score statistics reject an empty batch") {
    std::vector<PredictionMatrix> none;
    CHECK_THROWS_AS(score_statistics(none), std::invalid_argument);
    std::vector<PredictionMatrix> empty_rows{PredictionMatrix{}};
    CHECK_THROWS_AS(score_statistics(empty_rows), std::invalid_argument);
}

TEST_CASE("confidence threshold") {
    CHECK(confidence_threshold({0.8, 0.1}, 1.5) == Catch::Approx(0.65).margin(1e-15));
    CHECK(confidence_threshold({0.3, 0.2}, 2.0) == 0.0);  // clamped
    CHECK(confidence_threshold({0.55, 0.2}, 0.0) == 0.55);
    CHECK_THROWS_AS(confidence_threshold({0.5, 0.1}, -0.5), std::invalid_argument);
}

TEST_CASE("weight formula") {
    CHECK(weight_from_score(1.0) == 0);
    CHECK(weight_from_score(std::exp(-5.0)) == 5000);
    CHECK(weight_from_score(0.5) == 693);  // -1000*ln(0.5) = 693.147...
    CHECK(weight_from_score(0.0) == 5000);
    CHECK_THROWS_AS(weight_from_score(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(weight_from_score(1.1), std::invalid_argument);
}

TEST_CASE("weight is monotone, bounded, and zero only at the top") {
    int prev = 5000;
    for (int i = 0; i <= 10000; ++i) {
        const double s = static_cast<double>(i) / 10000.0;
        const int w = weight_from_score(s);
        CHECK(w >= 0);
        CHECK(w <= 5000);
        CHECK(w <= prev);  // non-increasing in s... checked as s ascends
        prev = w;
    }
    CHECK(weight_from_score(1.0) == 0);
    CHECK(weight_from_score(0.999) > 0);
}

namespace {

PredictionRow row_with(std::initializer_list<std::pair<int, double>> scores) {
    PredictionRow row;
    row.box = {0, 0, 10, 10};
    row.box_confidence = 1.0;
    for (const auto& [j, s] : scores) row.scores[j] = s;
    return row;
}

}  // namespace

TEST_CASE("candidate sets: threshold filter") {
    PredictionMatrix m;
    m.rows.push_back(row_with({{0, 0.5}, {1, 0.3}, {2, 0.2}}));
    const auto sets = candidate_sets(m, 0.25, 1, false);
    REQUIRE(sets.size() == 1);
    REQUIRE(sets[0].candidates.size() == 2);
    CHECK(class_index(sets[0].candidates[0].cls) == 0);
    CHECK(class_index(sets[0].candidates[1].cls) == 1);
    CHECK(sets[0].candidates[0].score == 0.5);
}

TEST_CASE("candidate sets: fall-back when nothing qualifies") {
    PredictionMatrix m;
    m.rows.push_back(row_with({{4, 0.10}, {9, 0.08}}));
    SECTION("k=1 keeps the single top class") {
        const auto sets = candidate_sets(m, 0.9, 1, false);
        REQUIRE(sets[0].candidates.size() == 1);
        CHECK(class_index(sets[0].candidates[0].cls) == 4);
    }
    SECTION("k=3 keeps the top three by score, ties by class index") {
        const auto sets = candidate_sets(m, 0.9, 3, false);
        REQUIRE(sets[0].candidates.size() == 3);
        CHECK(class_index(sets[0].candidates[0].cls) == 4);
        CHECK(class_index(sets[0].candidates[1].cls) == 9);
        CHECK(class_index(sets[0].candidates[2].cls) == 0);  // first of the zero scores
    }
}

TEST_CASE("candidate sets: deterministic mode is argmax only") {
    PredictionMatrix m;
    m.rows.push_back(row_with({{10, 0.8}, {11, 0.79}}));
    m.rows.push_back(row_with({{20, 0.2}}));
    const auto sets = candidate_sets(m, 0.0, 1, true);
    REQUIRE(sets.size() == 2);
    for (const auto& s : sets) REQUIRE(s.candidates.size() == 1);
    CHECK(class_index(sets[0].candidates[0].cls) == 10);
    CHECK(class_index(sets[1].candidates[0].cls) == 20);
}

TEST_CASE("candidate sets never come out empty or oversized") {
    Rng rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        PredictionMatrix m;
        PredictionRow row;
        for (int j = 0; j < kNumClasses; ++j) row.scores[j] = rng.next_double();
        row.box = {0, 0, 4, 4};
        m.rows.push_back(row);
        const double theta = rng.next_double() * 1.2;  // sometimes above every score
        const auto sets = candidate_sets(m, theta, 1 + rng.uniform_int(96), false);
        REQUIRE(sets.size() == 1);
        CHECK(!sets[0].candidates.empty());
        CHECK(sets[0].candidates.size() <= 96);
    }
}

TEST_CASE("alpha monotonicity: larger alpha widens every candidate set") {
    Rng rng(123);
    const ScoreStats stats{0.6, 0.18};
    for (int trial = 0; trial < 60; ++trial) {
        PredictionMatrix m;
        const int rows = 1 + static_cast<int>(rng.uniform_int(5));
        for (int r = 0; r < rows; ++r) {
            PredictionRow row;
            for (int j = 0; j < kNumClasses; ++j)
                row.scores[j] = rng.next_double() < 0.1 ? rng.next_double() : 0.0;
            row.box = {0, 0, 8, 8};
            m.rows.push_back(row);
        }
        const double alphas[] = {0.5, 1.0, 1.5, 2.0};
        std::vector<std::vector<CandidateSet>> by_alpha;
        for (double a : alphas)
            by_alpha.push_back(candidate_sets(m, confidence_threshold(stats, a), 1, false));
        for (std::size_t i = 1; i < by_alpha.size(); ++i)
            for (std::size_t r = 0; r < by_alpha[i].size(); ++r)
                for (const auto& c : by_alpha[i - 1][r].candidates) {
                    bool found = false;
                    for (const auto& c2 : by_alpha[i][r].candidates)
                        if (c2.cls == c.cls) {
                            found = true;
                            break;
                        }
                    CHECK(found);
                }
    }
}
