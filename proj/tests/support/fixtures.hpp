#pragma once

// Shared hand-built fixtures: the two-branch count question from the paper's
// running example and the three scene/question pairs used as worked
// examples, plus small helpers for building programs in tests.

#include "vqansr/question.hpp"
#include "vqansr/scene.hpp"

namespace vqansr::testing {

// "How many large things are either cyan metallic cylinders or yellow
// blocks?" in the shared-scene 9-node layout.
inline const char* kTwoBranchCountQuestionJson = R"({
  "question": "How many large things are either cyan metallic cylinders or yellow blocks?",
  "image_index": 0,
  "program": [
    {"function": "scene", "inputs": [], "value_inputs": []},
    {"function": "filter_material", "inputs": [0], "value_inputs": ["metal"]},
    {"function": "filter_color", "inputs": [1], "value_inputs": ["cyan"]},
    {"function": "filter_shape", "inputs": [2], "value_inputs": ["cylinder"]},
    {"function": "filter_color", "inputs": [0], "value_inputs": ["yellow"]},
    {"function": "filter_shape", "inputs": [4], "value_inputs": ["cube"]},
    {"function": "union", "inputs": [3, 5], "value_inputs": []},
    {"function": "filter_size", "inputs": [6], "value_inputs": ["large"]},
    {"function": "count", "inputs": [7], "value_inputs": []}
  ]
})";

// Same question as released in the dataset layout: two scene leaves, no
// sharing. Must normalize to the 9-node form above.
inline const char* kTwoBranchCountQuestionTreeJson = R"({
  "image_index": 0,
  "program": [
    {"function": "scene", "inputs": [], "value_inputs": []},
    {"function": "filter_material", "inputs": [0], "value_inputs": ["metal"]},
    {"function": "filter_color", "inputs": [1], "value_inputs": ["cyan"]},
    {"function": "filter_shape", "inputs": [2], "value_inputs": ["cylinder"]},
    {"function": "scene", "inputs": [], "value_inputs": []},
    {"function": "filter_color", "inputs": [4], "value_inputs": ["yellow"]},
    {"function": "filter_shape", "inputs": [5], "value_inputs": ["cube"]},
    {"function": "union", "inputs": [3, 6], "value_inputs": []},
    {"function": "filter_size", "inputs": [7], "value_inputs": ["large"]},
    {"function": "count", "inputs": [8], "value_inputs": []}
  ]
})";

inline QuestionProgram two_branch_count_question() {
    return parse_question(nlohmann::json::parse(kTwoBranchCountQuestionJson));
}

// "Is there a big brown object of the same shape as the green thing?" -> yes
inline QuestionProgram same_shape_exist_question() {
    QuestionProgram p;
    p.nodes.push_back({Func::scene, {}, {}, {}});
    p.nodes.push_back({Func::filter_color, {0}, AttrValue::of(Color::green), {}});
    p.nodes.push_back({Func::unique, {1}, {}, {}});
    p.nodes.push_back({Func::same_shape, {2}, {}, {}});
    p.nodes.push_back({Func::filter_size, {3}, AttrValue::of(Size::large), {}});
    p.nodes.push_back({Func::filter_color, {4}, AttrValue::of(Color::brown), {}});
    p.nodes.push_back({Func::exist, {5}, {}, {}});
    validate(p);
    return p;
}

// Scene for the question above: a green rubber cylinder with a large brown
// metal cylinder next to it, plus an unrelated red cube.
inline SceneGraph same_shape_exist_scene() {
    SceneGraph s;
    s.image_id = 100;
    s.objects.push_back({make_class("small", "green", "rubber", "cylinder"),
                         {100, 150, 122, 172}});
    s.objects.push_back({make_class("large", "brown", "metal", "cylinder"),
                         {200, 140, 244, 184}});
    s.objects.push_back({make_class("small", "red", "metal", "cube"), {320, 200, 342, 222}});
    return s;
}

// Scene without any large cyan metal cylinder or large yellow cube, so the
// two-branch count question answers 0.
inline SceneGraph two_branch_count_scene() {
    SceneGraph s;
    s.image_id = 101;
    s.objects.push_back({make_class("small", "cyan", "metal", "cylinder"), {60, 60, 82, 82}});
    s.objects.push_back({make_class("large", "yellow", "rubber", "sphere"),
                         {150, 100, 194, 144}});
    s.objects.push_back({make_class("large", "purple", "metal", "cube"), {260, 180, 304, 224}});
    return s;
}

// "The tiny shiny cylinder has what color?" -> brown
inline QuestionProgram query_color_question() {
    QuestionProgram p;
    p.nodes.push_back({Func::scene, {}, {}, {}});
    p.nodes.push_back({Func::filter_size, {0}, AttrValue::of(Size::small), {}});
    p.nodes.push_back({Func::filter_material, {1}, AttrValue::of(Material::metal), {}});
    p.nodes.push_back({Func::filter_shape, {2}, AttrValue::of(Shape::cylinder), {}});
    p.nodes.push_back({Func::unique, {3}, {}, {}});
    p.nodes.push_back({Func::query_color, {4}, {}, {}});
    validate(p);
    return p;
}

inline SceneGraph query_color_scene() {
    SceneGraph s;
    s.image_id = 102;
    s.objects.push_back({make_class("small", "brown", "metal", "cylinder"), {80, 90, 102, 112}});
    s.objects.push_back({make_class("large", "blue", "rubber", "cube"), {180, 120, 224, 164}});
    s.objects.push_back({make_class("small", "gray", "rubber", "sphere"), {300, 160, 322, 182}});
    return s;
}

// "What shape is the red object?" for the one-cylinder scene of the
// running example.
inline QuestionProgram red_shape_question() {
    QuestionProgram p;
    p.nodes.push_back({Func::scene, {}, {}, {}});
    p.nodes.push_back({Func::filter_color, {0}, AttrValue::of(Color::red), {}});
    p.nodes.push_back({Func::unique, {1}, {}, {}});
    p.nodes.push_back({Func::query_shape, {2}, {}, {}});
    validate(p);
    return p;
}

}  // namespace vqansr::testing
