#pragma once

#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "vqansr/prediction.hpp"
#include "vqansr/scene.hpp"

namespace vqansr {

using json = nlohmann::json;

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json j;
    in >> j;
    return j;
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

// Image canvas of the CLEVR renders; box synthesis stays inside it.
inline constexpr double kImageWidth = 480.0;
inline constexpr double kImageHeight = 320.0;

// Half extent of a synthesized box, per object size.
inline constexpr double kSmallHalfExtent = 11.0;
inline constexpr double kLargeHalfExtent = 22.0;

namespace detail {

// Scene files do not carry pixel boxes. Synthesis rule, in order of
// preference:
//   1. "bbox": [x1,y1,x2,y2] taken verbatim (our own writers emit this);
//   2. "pixel_coords": [px,py,depth] -> box of fixed half extent around
//      (px,py), extent depending on object size;
//   3. "3d_coords": [x,y,z] -> ground-plane projection onto the canvas
//      using the camera's right/front directions, then rule 2.
// Spatial reasoning only consumes the relative order of the corners, so a
// fixed extent per size is sufficient.
inline BoundingBox box_from_scene_object(const json& obj, Size size) {
    const double half = (size == Size::large) ? kLargeHalfExtent : kSmallHalfExtent;
    if (obj.contains("bbox")) {
        const auto& b = obj.at("bbox");
        return make_box(b.at(0).get<double>(), b.at(1).get<double>(), b.at(2).get<double>(),
                        b.at(3).get<double>());
    }
    if (obj.contains("pixel_coords")) {
        const auto& p = obj.at("pixel_coords");
        const double cx = p.at(0).get<double>();
        const double cy = p.at(1).get<double>();
        return make_box(cx - half, cy - half, cx + half, cy + half);
    }
    if (obj.contains("3d_coords")) {
        const auto& p = obj.at("3d_coords");
        const double x = p.at(0).get<double>();
        const double y = p.at(1).get<double>();
        // Camera right/front directions on the ground plane.
        const double u = 0.6563 * x + 0.7545 * y;
        const double d = 0.7545 * x - 0.6563 * y;
        const double cx = kImageWidth / 2.0 + 32.0 * u;
        const double cy = kImageHeight / 2.0 + 28.0 * d;
        return make_box(cx - half, cy - half, cx + half, cy + half);
    }
    throw std::runtime_error("scene object carries no bbox, pixel_coords, or 3d_coords");
}

}  // namespace detail

// Loads a CLEVR-format scenes file: {"scenes": [{"image_index", "objects":
// [{"size","color","material","shape", ...}]}]}. Attribute synonyms are
// normalized; boxes are synthesized when absent (see above).
inline std::vector<SceneGraph> load_scene_graphs(const json& root) {
    std::vector<SceneGraph> out;
    const auto& scenes = root.at("scenes");
    out.reserve(scenes.size());
    int fallback_index = 0;
    for (const auto& s : scenes) {
        SceneGraph g;
        g.image_id = s.contains("image_index") ? s.at("image_index").get<int>() : fallback_index;
        ++fallback_index;
        for (const auto& o : s.at("objects")) {
            const ObjectClass cls = make_class(
                o.at("size").get<std::string>(), o.at("color").get<std::string>(),
                o.at("material").get<std::string>(), o.at("shape").get<std::string>());
            g.objects.push_back({cls, detail::box_from_scene_object(o, cls.size)});
        }
        out.push_back(std::move(g));
    }
    return out;
}

inline std::vector<SceneGraph> load_scene_graphs_file(const std::string& path) {
    return load_scene_graphs(load_json_file(path));
}

inline json scene_graphs_to_json(const std::vector<SceneGraph>& scenes) {
    json arr = json::array();
    for (const auto& g : scenes) {
        json objs = json::array();
        for (const auto& o : g.objects) {
            objs.push_back({{"size", to_string(o.cls.size)},
                            {"color", to_string(o.cls.color)},
                            {"material", to_string(o.cls.material)},
                            {"shape", to_string(o.cls.shape)},
                            {"bbox", {o.box.x1, o.box.y1, o.box.x2, o.box.y2}}});
        }
        arr.push_back({{"image_index", g.image_id}, {"objects", std::move(objs)}});
    }
    return json{{"scenes", std::move(arr)}};
}

// Prediction sidecar schema, for matrices produced outside the simulator:
// {"predictions": [{"image_id", "rows": [{"scores": [96 floats],
//  "box": [x1,y1,x2,y2], "box_confidence": f}]}]}.
inline std::vector<PredictionMatrix> load_prediction_matrices(const json& root) {
    std::vector<PredictionMatrix> out;
    const auto& preds = root.at("predictions");
    out.reserve(preds.size());
    for (const auto& p : preds) {
        PredictionMatrix m;
        m.image_id = p.at("image_id").get<int>();
        for (const auto& r : p.at("rows")) {
            PredictionRow row;
            const auto& scores = r.at("scores");
            if (scores.size() != static_cast<std::size_t>(kNumClasses))
                throw std::runtime_error("prediction row must carry exactly 96 scores");
            for (int j = 0; j < kNumClasses; ++j) {
                const double s = scores.at(j).get<double>();
                if (s < 0.0 || s > 1.0)
                    throw std::runtime_error("class score outside [0,1]");
                row.scores[j] = s;
            }
            const auto& b = r.at("box");
            row.box = make_box(b.at(0).get<double>(), b.at(1).get<double>(),
                               b.at(2).get<double>(), b.at(3).get<double>());
            row.box_confidence = r.at("box_confidence").get<double>();
            if (row.box_confidence < 0.0 || row.box_confidence > 1.0)
                throw std::runtime_error("box confidence outside [0,1]");
            m.rows.push_back(row);
        }
        out.push_back(std::move(m));
    }
    return out;
}

inline std::vector<PredictionMatrix> load_prediction_matrices_file(const std::string& path) {
    return load_prediction_matrices(load_json_file(path));
}

inline json prediction_matrices_to_json(const std::vector<PredictionMatrix>& matrices) {
    json arr = json::array();
    for (const auto& m : matrices) {
        json rows = json::array();
        for (const auto& r : m.rows) {
            json scores = json::array();
            for (double s : r.scores) scores.push_back(s);
            rows.push_back({{"scores", std::move(scores)},
                            {"box", {r.box.x1, r.box.y1, r.box.x2, r.box.y2}},
                            {"box_confidence", r.box_confidence}});
        }
        arr.push_back({{"image_id", m.image_id}, {"rows", std::move(rows)}});
    }
    return json{{"predictions", std::move(arr)}};
}

}  // namespace vqansr
