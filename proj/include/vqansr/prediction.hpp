#pragma once

#include <algorithm>
#include <array>
#include <vector>

#include "vqansr/geometry.hpp"
#include "vqansr/object_class.hpp"

namespace vqansr {

// One bounding-box prediction: 96 per-class confidence scores in [0,1]
// (independent confidences, not a distribution), the box corners, and a
// separate confidence for the box itself.
struct PredictionRow {
    std::array<double, kNumClasses> scores{};
    BoundingBox box;
    double box_confidence = 0.0;

    friend bool operator==(const PredictionRow&, const PredictionRow&) = default;

    int argmax_class() const {
        return static_cast<int>(std::max_element(scores.begin(), scores.end()) - scores.begin());
    }
    double max_score() const { return *std::max_element(scores.begin(), scores.end()); }
};

// Detector output for one image. Row count may be zero.
struct PredictionMatrix {
    int image_id = 0;
    std::vector<PredictionRow> rows;

    friend bool operator==(const PredictionMatrix&, const PredictionMatrix&) = default;
};

// Drops rows whose box confidence falls below t, preserving order.
// Idempotent, and monotone in t (larger t keeps a subset).
inline PredictionMatrix apply_bbox_threshold(const PredictionMatrix& m, double t) {
    PredictionMatrix out;
    out.image_id = m.image_id;
    out.rows.reserve(m.rows.size());
    for (const auto& row : m.rows)
        if (row.box_confidence >= t) out.rows.push_back(row);
    return out;
}

}  // namespace vqansr
