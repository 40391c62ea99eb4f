#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "vqansr/prediction.hpp"

namespace vqansr {

// Mean and population standard deviation of the per-row maximum class
// scores, pooled over a batch of prediction matrices.
struct ScoreStats {
    double mu = 0.0;
    double sigma = 0.0;
};

inline ScoreStats score_statistics(std::span<const PredictionMatrix> matrices) {
    std::size_t n = 0;
    double sum = 0.0;
    for (const auto& m : matrices)
        for (const auto& row : m.rows) {
            sum += row.max_score();
            ++n;
        }
    if (n == 0) throw std::invalid_argument("score_statistics: no prediction rows");
    const double mu = sum / static_cast<double>(n);
    double sq = 0.0;
    for (const auto& m : matrices)
        for (const auto& row : m.rows) {
            const double d = row.max_score() - mu;
            sq += d * d;
        }
    return {mu, std::sqrt(sq / static_cast<double>(n))};
}

// theta = max(mu - alpha*sigma, 0). A class prediction counts as confident
// when its score is no more than alpha standard deviations below the mean.
inline double confidence_threshold(const ScoreStats& stats, double alpha) {
    if (alpha < 0.0) throw std::invalid_argument("confidence rate must be nonnegative");
    return std::max(stats.mu - alpha * stats.sigma, 0.0);
}

// Weak-constraint weight for a class score: min(-1000*ln(s), 5000), rounded
// half away from zero. s=0 maps to the cap. Result is always in [0, 5000].
inline int weight_from_score(double s) {
    if (s < 0.0 || s > 1.0) throw std::invalid_argument("score outside [0,1]");
    if (s == 0.0) return 5000;
    const double w = std::min(-1000.0 * std::log(s), 5000.0);
    return static_cast<int>(std::llround(w));
}

struct Candidate {
    ObjectClass cls;
    double score = 0.0;
    int weight = 0;

    friend bool operator==(const Candidate&, const Candidate&) = default;
};

// The thresholded interpretation of one prediction row: every class the
// reasoner is allowed to pick for it, never empty.
struct CandidateSet {
    int row_index = 0;
    BoundingBox box;
    std::vector<Candidate> candidates;
};

// Builds one candidate set per row. Deterministic mode keeps only the
// argmax class. Otherwise every class scoring >= theta is kept; if none
// qualifies, the top k classes serve as fall-back. Ties break toward the
// lower class index, and candidates come out sorted by descending score.
inline std::vector<CandidateSet> candidate_sets(const PredictionMatrix& matrix, double theta,
                                                int k, bool deterministic) {
    if (k < 1 || k > kNumClasses) throw std::invalid_argument("k must be in [1, 96]");
    std::vector<CandidateSet> out;
    out.reserve(matrix.rows.size());
    for (std::size_t i = 0; i < matrix.rows.size(); ++i) {
        const auto& row = matrix.rows[i];
        CandidateSet set;
        set.row_index = static_cast<int>(i);
        set.box = row.box;

        std::vector<int> picked;
        if (deterministic) {
            picked.push_back(row.argmax_class());
        } else {
            for (int j = 0; j < kNumClasses; ++j)
                if (row.scores[j] >= theta) picked.push_back(j);
            if (picked.empty()) {
                picked.resize(kNumClasses);
                for (int j = 0; j < kNumClasses; ++j) picked[j] = j;
                std::stable_sort(picked.begin(), picked.end(), [&](int a, int b) {
                    return row.scores[a] > row.scores[b];
                });
                picked.resize(k);
            }
        }
        std::stable_sort(picked.begin(), picked.end(),
                         [&](int a, int b) { return row.scores[a] > row.scores[b]; });
        set.candidates.reserve(picked.size());
        for (int j : picked)
            set.candidates.push_back(
                {class_from_index(j), row.scores[j], weight_from_score(row.scores[j])});
        out.push_back(std::move(set));
    }
    return out;
}

}  // namespace vqansr
