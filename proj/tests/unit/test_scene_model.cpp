#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "vqansr/json_io.hpp"
#include "vqansr/object_class.hpp"
#include "vqansr/prediction.hpp"
#include "vqansr/reasoner.hpp"
#include "vqansr/rng.hpp"

using namespace vqansr;

TEST_CASE("class index layout endpoints") {
    CHECK(class_index(make_class("small", "brown", "metal", "cube")) == 0);
    CHECK(class_index(make_class("large", "yellow", "rubber", "sphere")) == 95);
}

TEST_CASE("class index is a bijection over all 96 tuples") {
    std::set<int> seen;
    for (int s = 0; s < kNumSizes; ++s)
        for (int c = 0; c < kNumColors; ++c)
            for (int m = 0; m < kNumMaterials; ++m)
                for (int sh = 0; sh < kNumShapes; ++sh) {
                    const ObjectClass cls{static_cast<Size>(s), static_cast<Shape>(sh),
                                          static_cast<Material>(m), static_cast<Color>(c)};
                    const int idx = class_index(cls);
                    CHECK(idx >= 0);
                    CHECK(idx < kNumClasses);
                    CHECK(class_from_index(idx) == cls);
                    seen.insert(idx);
                }
    CHECK(seen.size() == 96);
}

TEST_CASE("attribute aliases normalize") {
    CHECK(parse_size("big") == Size::large);
    CHECK(parse_size("tiny") == Size::small);
    CHECK(parse_material("metallic") == Material::metal);
    CHECK(parse_material("shiny") == Material::metal);
    CHECK(parse_material("matte") == Material::rubber);
    CHECK(parse_shape("block") == Shape::cube);
    CHECK(parse_shape("ball") == Shape::sphere);
    CHECK(parse_color("grey") == Color::gray);
    CHECK_FALSE(parse_color("mauve").has_value());
    CHECK_THROWS_AS(make_class("small", "mauve", "metal", "cube"), vocabulary_error);
}

TEST_CASE("scene loader") {
    SECTION("empty scenes list") {
        const auto scenes = load_scene_graphs(json::parse(R"({"scenes": []})"));
        CHECK(scenes.empty());
    }
    SECTION("one object with explicit bbox") {
        const auto scenes = load_scene_graphs(json::parse(R"({
            "scenes": [{"image_index": 7, "objects": [
                {"size":"large","color":"red","material":"metal","shape":"cylinder",
                 "bbox":[10.0,20.0,60.0,80.0]}]}]})"));
        REQUIRE(scenes.size() == 1);
        REQUIRE(scenes[0].objects.size() == 1);
        CHECK(scenes[0].image_id == 7);
        CHECK(scenes[0].objects[0].cls == make_class("large", "red", "metal", "cylinder"));
        CHECK(scenes[0].objects[0].box == BoundingBox{10.0, 20.0, 60.0, 80.0});
    }
    SECTION("pixel_coords synthesis keeps relative order") {
        const auto scenes = load_scene_graphs(json::parse(R"({
            "scenes": [{"image_index": 0, "objects": [
                {"size":"small","color":"blue","material":"rubber","shape":"cube",
                 "pixel_coords":[100.0, 150.0, 10.0]},
                {"size":"large","color":"green","material":"metal","shape":"sphere",
                 "pixel_coords":[300.0, 200.0, 8.0]}]}]})"));
        const auto& objs = scenes.at(0).objects;
        REQUIRE(objs.size() == 2);
        CHECK(objs[0].box.x1 < objs[1].box.x1);   // left of
        CHECK(objs[0].box.y2 < objs[1].box.y2);   // behind
        CHECK(objs[0].box.valid());
        CHECK(objs[1].box.valid());
    }
    SECTION("3d_coords synthesis is deterministic") {
        const auto doc = json::parse(R"({
            "scenes": [{"image_index": 0, "objects": [
                {"size":"large","color":"cyan","material":"metal","shape":"cube",
                 "3d_coords":[1.5, -2.0, 0.7]}]}]})");
        const auto a = load_scene_graphs(doc);
        const auto b = load_scene_graphs(doc);
        CHECK(a == b);
        CHECK(a.at(0).objects.at(0).box.valid());
    }
    SECTION("missing attribute vocabulary fails") {
        CHECK_THROWS_AS(load_scene_graphs(json::parse(R"({
            "scenes": [{"image_index": 0, "objects": [
                {"size":"enormous","color":"red","material":"metal","shape":"cube",
                 "bbox":[0,0,1,1]}]}]})")),
                        vocabulary_error);
    }
}

TEST_CASE("loaded scene supports the same-shape question") {
    // A green thing plus a big brown object of the same shape: asking
    // whether the latter exists must come out true on the loaded scene.
    const auto scenes = load_scene_graphs(json::parse(R"({
        "scenes": [{"image_index": 0, "objects": [
            {"size":"small","color":"green","material":"rubber","shape":"cylinder",
             "pixel_coords":[100.0, 150.0, 10.0]},
            {"size":"big","color":"brown","material":"metallic","shape":"cylinder",
             "pixel_coords":[220.0, 140.0, 9.0]},
            {"size":"small","color":"red","material":"metal","shape":"block",
             "pixel_coords":[330.0, 200.0, 7.0]}]}]})"));
    QuestionProgram q;
    q.nodes.push_back({Func::scene, {}, {}, {}});
    q.nodes.push_back({Func::filter_color, {0}, AttrValue::of(Color::green), {}});
    q.nodes.push_back({Func::unique, {1}, {}, {}});
    q.nodes.push_back({Func::same_shape, {2}, {}, {}});
    q.nodes.push_back({Func::filter_size, {3}, AttrValue::of(Size::large), {}});
    q.nodes.push_back({Func::filter_color, {4}, AttrValue::of(Color::brown), {}});
    q.nodes.push_back({Func::exist, {5}, {}, {}});
    validate(q);
    const auto ans = direct_interpret(q, scenes.at(0));
    REQUIRE(ans.has_value());
    CHECK(*ans == Answer{true});
}

TEST_CASE("scene round-trip is stable") {
    const auto doc = json::parse(R"({
        "scenes": [{"image_index": 3, "objects": [
            {"size":"small","color":"purple","material":"rubber","shape":"cylinder",
             "pixel_coords":[88.5, 120.25, 4.0]},
            {"size":"large","color":"gray","material":"metal","shape":"cube",
             "pixel_coords":[222.0, 260.0, 2.0]}]}]})");
    const auto once = load_scene_graphs(doc);
    const auto round = load_scene_graphs(scene_graphs_to_json(once));
    CHECK(once == round);
    CHECK(scene_graphs_to_json(once).dump() == scene_graphs_to_json(round).dump());
}

namespace {

PredictionMatrix matrix_with_confidences(std::initializer_list<double> confs) {
    PredictionMatrix m;
    m.image_id = 1;
    int i = 0;
    for (double c : confs) {
        PredictionRow row;
        row.scores[i % kNumClasses] = 0.5;
        row.box = {0.0, 0.0, 10.0 + i, 10.0 + i};
        row.box_confidence = c;
        m.rows.push_back(row);
        ++i;
    }
    return m;
}

}  // namespace

TEST_CASE("bbox threshold") {
    const auto m = matrix_with_confidences({0.4, 0.6});
    SECTION("t=0 keeps everything") { CHECK(apply_bbox_threshold(m, 0.0) == m); }
    SECTION("plain comparison") {
        const auto f = apply_bbox_threshold(m, 0.5);
        REQUIRE(f.rows.size() == 1);
        CHECK(f.rows[0].box_confidence == 0.6);
    }
    SECTION("t=1 with all below gives empty matrix") {
        CHECK(apply_bbox_threshold(m, 1.0).rows.empty());
    }
}

TEST_CASE("bbox threshold is idempotent and monotone") {
    Rng rng(42);
    for (int trial = 0; trial < 50; ++trial) {
        PredictionMatrix m;
        m.image_id = trial;
        const int n = static_cast<int>(rng.uniform_int(12));
        for (int i = 0; i < n; ++i) {
            PredictionRow row;
            row.box = {0, 0, 5, 5};
            row.box_confidence = rng.next_double();
            m.rows.push_back(row);
        }
        const double lo = rng.next_double(), hi = std::min(1.0, lo + rng.next_double());
        const auto at_lo = apply_bbox_threshold(m, lo);
        const auto at_hi = apply_bbox_threshold(m, hi);
        CHECK(apply_bbox_threshold(at_lo, lo) == at_lo);
        // Every row kept at hi must appear in the lo filtering.
        std::size_t j = 0;
        for (const auto& row : at_hi.rows) {
            while (j < at_lo.rows.size() && !(at_lo.rows[j] == row)) ++j;
            REQUIRE(j < at_lo.rows.size());
        }
    }
}

TEST_CASE("prediction sidecar round-trip") {
    PredictionMatrix m;
    m.image_id = 12;
    PredictionRow row;
    for (int j = 0; j < kNumClasses; ++j) row.scores[j] = j / 100.0;
    row.box = {1.5, 2.5, 30.0, 40.0};
    row.box_confidence = 0.77;
    m.rows.push_back(row);
    const std::vector<PredictionMatrix> in{m};
    const auto out = load_prediction_matrices(prediction_matrices_to_json(in));
    CHECK(out == in);
}

TEST_CASE("prediction sidecar validation") {
    CHECK_THROWS(load_prediction_matrices(json::parse(
        R"({"predictions":[{"image_id":0,"rows":[{"scores":[0.5],"box":[0,0,1,1],"box_confidence":0.5}]}]})")));
}
