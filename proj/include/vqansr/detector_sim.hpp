#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "vqansr/prediction.hpp"
#include "vqansr/rng.hpp"
#include "vqansr/scene.hpp"

namespace vqansr {

// Synthetic detector noise. temperature is the master knob: it widens the
// per-row blur that drives class confusion, score spread, and box-confidence
// degradation, standing in for how poorly the detector was trained.
// Output is a pure function of (scene, config); the seed fixes everything.
struct NoiseConfig {
    double temperature = 0.0;   // class-confusion spread, >= 0
    double score_scale = 1.0;   // dampens the maximum class score, in (0,1]
    double p_fn = 0.0;          // per-object drop probability
    double p_fp = 0.0;          // expected spurious rows per image (Poisson mean)
    double box_jitter = 0.0;    // pixel sigma of corner noise
    std::uint64_t seed = 0;
};

inline void validate(const NoiseConfig& cfg) {
    if (cfg.temperature < 0.0) throw std::invalid_argument("temperature must be >= 0");
    if (cfg.score_scale <= 0.0 || cfg.score_scale > 1.0)
        throw std::invalid_argument("score_scale must be in (0,1]");
    if (cfg.p_fn < 0.0 || cfg.p_fn > 1.0) throw std::invalid_argument("p_fn must be in [0,1]");
    if (cfg.p_fp < 0.0) throw std::invalid_argument("p_fp must be >= 0");
    if (cfg.box_jitter < 0.0) throw std::invalid_argument("box_jitter must be >= 0");
}

// Presets emulating detectors of increasing training quality, calibrated so
// the bundled benchmark shows the qualitative recall split of roughly 0.7
// (poor) versus 0.99 (good) at a low box threshold.
inline NoiseConfig noise_preset(std::string_view name) {
    static const std::map<std::string, NoiseConfig, std::less<>> presets = {
        {"perfect", {0.0, 1.0, 0.0, 0.0, 0.0, 0}},
        {"good", {0.03, 0.995, 0.003, 0.03, 0.6, 0}},
        {"mid", {0.15, 0.97, 0.02, 0.12, 1.5, 0}},
        {"poor", {0.45, 0.92, 0.12, 0.4, 3.0, 0}},
    };
    const auto it = presets.find(name);
    if (it == presets.end())
        throw std::invalid_argument("unknown noise preset: " + std::string(name));
    return it->second;
}

namespace detail {

// Peak of the softmax over the class-distance kernel -d/b. The counts are
// how many of the 96 classes sit at each attribute distance from a center.
inline double softmax_peak(double b) {
    if (b <= 0.0) return 1.0;
    const double x = std::exp(-1.0 / b);
    return 1.0 / (1.0 + 11.0 * x + 33.0 * x * x + 37.0 * x * x * x + 14.0 * x * x * x * x);
}

inline double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

// Replaces one attribute with a uniformly drawn different value.
inline void flip_attribute(ObjectClass& c, int dim, Rng& rng) {
    const auto other = [&rng](int current, int n) {
        int v = static_cast<int>(rng.uniform_int(static_cast<std::uint32_t>(n - 1)));
        return v >= current ? v + 1 : v;
    };
    switch (dim) {
        case 0: c.size = static_cast<Size>(other(static_cast<int>(c.size), kNumSizes)); break;
        case 1: c.shape = static_cast<Shape>(other(static_cast<int>(c.shape), kNumShapes)); break;
        case 2:
            c.material = static_cast<Material>(other(static_cast<int>(c.material), kNumMaterials));
            break;
        case 3: c.color = static_cast<Color>(other(static_cast<int>(c.color), kNumColors)); break;
    }
}

// Fills one row's 96 scores for a perception centered on `center` with blur
// b. The peak is softmax_peak(b)*scale at the center; other scores decay
// exponentially in attribute distance. When the perception has drifted off
// the true class, the true class keeps a runner-up score (a fraction of the
// peak) the way a hedging detector scores its second hypothesis; without
// that, a confidence threshold low enough to readmit the truth would also
// admit the whole distance-1 shell. A lower-scored decoy hypothesis (a
// random neighbor of the truth) appears alongside drifted perceptions and
// occasionally on clean ones. A small multiplicative jitter keeps max
// scores from being all identical. b = 0 produces an exact one-hot row.
inline void fill_scores(PredictionRow& row, const ObjectClass& center,
                        const ObjectClass& truth, double b, double scale, Rng& rng) {
    const double peak = softmax_peak(b) * scale;
    const double eta = 0.06 * std::min(1.0, 2.0 * b);
    const double runner = rng.uniform(0.45, 0.85);  // drawn even when unused
    const double decoy_r = rng.uniform(0.2, 0.6);
    ObjectClass decoy = truth;
    flip_attribute(decoy, static_cast<int>(rng.uniform_int(4)), rng);
    const bool decoy_active =
        b > 0.0 && (!(truth == center) || rng.next_double() < 0.15);
    const int truth_index = class_index(truth);
    const int center_index = class_index(center);
    const int decoy_index = class_index(decoy);
    for (int j = 0; j < kNumClasses; ++j) {
        double s;
        if (j == center_index)
            s = peak;
        else if (j == truth_index)
            s = peak * runner;
        else if (decoy_active && j == decoy_index)
            s = peak * decoy_r;
        else if (b > 0.0)
            s = peak * std::exp(-attribute_distance(class_from_index(j), center) / (0.7 * b));
        else
            s = 0.0;
        if (b > 0.0) s *= 1.0 - eta * rng.next_double();
        row.scores[j] = clamp01(s);
    }
}

inline BoundingBox jitter_box(const BoundingBox& box, double sigma, Rng& rng) {
    if (sigma <= 0.0) return box;
    double x1 = box.x1 + sigma * rng.normal();
    double y1 = box.y1 + sigma * rng.normal();
    double x2 = box.x2 + sigma * rng.normal();
    double y2 = box.y2 + sigma * rng.normal();
    if (x2 < x1) std::swap(x1, x2);
    if (y2 < y1) std::swap(y1, y2);
    if (x2 - x1 < 1.0) x2 = x1 + 1.0;
    if (y2 - y1 < 1.0) y2 = y1 + 1.0;
    return {x1, y1, x2, y2};
}

}  // namespace detail

// Simulates one detector pass over a ground-truth scene. Per retained true
// object: a per-row blur b ~ temperature*U(0.6,1.4) drives independent
// attribute flips (probability 1-exp(-0.2b) each) that may shift the
// perceived class, and shapes the scores around that perception. Spurious
// rows (Poisson p_fp) get uniform random classes, dampened scores, and
// uniform boxes. Deterministic given (config.seed, scene.image_id).
inline PredictionMatrix simulate(const SceneGraph& scene, const NoiseConfig& cfg) {
    validate(cfg);
    Rng rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(scene.image_id)));
    PredictionMatrix out;
    out.image_id = scene.image_id;

    const double tau = std::min(cfg.temperature, 1.0);
    for (const auto& obj : scene.objects) {
        const bool dropped = rng.next_double() < cfg.p_fn;
        if (dropped) continue;
        const double b = cfg.temperature * rng.uniform(0.6, 1.4);

        ObjectClass perceived = obj.cls;
        const double q = 1.0 - std::exp(-0.22 * b);
        for (int dim = 0; dim < 4; ++dim)
            if (rng.next_double() < q) detail::flip_attribute(perceived, dim, rng);

        PredictionRow row;
        detail::fill_scores(row, perceived, obj.cls, b, cfg.score_scale, rng);
        row.box = detail::jitter_box(obj.box, cfg.box_jitter, rng);
        row.box_confidence =
            detail::clamp01(0.92 - 0.8 * tau + (0.02 + 0.35 * tau) * rng.normal());
        out.rows.push_back(row);
    }

    const int spurious = rng.poisson(cfg.p_fp);
    for (int s = 0; s < spurious; ++s) {
        const ObjectClass cls = class_from_index(static_cast<int>(rng.uniform_int(kNumClasses)));
        const double b = cfg.temperature * rng.uniform(0.6, 1.4);
        PredictionRow row;
        detail::fill_scores(row, cls, cls, b, 0.6 * cfg.score_scale, rng);
        const double cx = rng.uniform(40.0, 440.0);
        const double cy = rng.uniform(40.0, 280.0);
        const double hw = rng.uniform(10.0, 30.0);
        const double hh = rng.uniform(10.0, 30.0);
        row.box = {cx - hw, cy - hh, cx + hw, cy + hh};
        row.box_confidence = detail::clamp01(0.35 + 0.12 * rng.normal());
        out.rows.push_back(row);
    }
    return out;
}

struct DetectionMetrics {
    double precision = 1.0;
    double recall = 1.0;
    long long tp = 0;
    long long fp = 0;
    long long fn = 0;
};

// Greedy IoU matching per image, highest IoU first. A matched row counts as
// TP only when its argmax class equals the matched object's class; every
// other row is FP, and every unmatched object is FN. Empty denominators
// report as 1.0 by convention.
inline DetectionMetrics detection_metrics(std::span<const PredictionMatrix> predictions,
                                          std::span<const SceneGraph> truth, double iou_min) {
    if (iou_min <= 0.0 || iou_min > 1.0) throw std::invalid_argument("iou_min must be in (0,1]");
    std::map<int, const SceneGraph*> by_id;
    for (const auto& s : truth) by_id[s.image_id] = &s;
    if (by_id.size() != truth.size() || predictions.size() != truth.size())
        throw std::invalid_argument("prediction and truth image_id sets differ");

    DetectionMetrics m;
    for (const auto& pred : predictions) {
        const auto it = by_id.find(pred.image_id);
        if (it == by_id.end())
            throw std::invalid_argument("prediction and truth image_id sets differ");
        const SceneGraph& scene = *it->second;

        struct Pair {
            double iou;
            int row, obj;
        };
        std::vector<Pair> pairs;
        for (std::size_t r = 0; r < pred.rows.size(); ++r)
            for (std::size_t o = 0; o < scene.objects.size(); ++o) {
                const double v = iou(pred.rows[r].box, scene.objects[o].box);
                if (v >= iou_min) pairs.push_back({v, static_cast<int>(r), static_cast<int>(o)});
            }
        std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
            if (a.iou != b.iou) return a.iou > b.iou;
            if (a.row != b.row) return a.row < b.row;
            return a.obj < b.obj;
        });
        std::vector<bool> row_used(pred.rows.size(), false), obj_used(scene.objects.size(), false);
        long long matched = 0, tp_img = 0;
        for (const auto& p : pairs) {
            if (row_used[p.row] || obj_used[p.obj]) continue;
            row_used[p.row] = obj_used[p.obj] = true;
            ++matched;
            if (pred.rows[p.row].argmax_class() == class_index(scene.objects[p.obj].cls))
                ++tp_img;
        }
        m.tp += tp_img;
        m.fp += static_cast<long long>(pred.rows.size()) - tp_img;
        m.fn += static_cast<long long>(scene.objects.size()) - matched;
    }
    m.precision = (m.tp + m.fp) > 0 ? static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fp)
                                    : 1.0;
    m.recall = (m.tp + m.fn) > 0 ? static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fn)
                                 : 1.0;
    return m;
}

}  // namespace vqansr
