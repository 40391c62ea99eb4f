// Walks one question through the whole pipeline and prints every stage:
// ground truth, simulated detections, thresholding, candidate sets, and the
// optimal answer under both scene encodings.

#include <cstdio>

#include "vqansr/vqansr.hpp"

using namespace vqansr;

int main() {
    // A scene with a red cylinder and two distractors.
    SceneGraph scene;
    scene.image_id = 0;
    scene.objects.push_back({make_class("large", "red", "metal", "cylinder"), {60, 80, 104, 124}});
    scene.objects.push_back({make_class("small", "blue", "rubber", "cube"), {180, 90, 202, 112}});
    scene.objects.push_back({make_class("small", "gray", "metal", "sphere"), {300, 150, 322, 172}});

    // "What shape is the red object?"
    QuestionProgram program;
    program.nodes.push_back({Func::scene, {}, {}, {}});
    program.nodes.push_back({Func::filter_color, {0}, AttrValue::of(Color::red), {}});
    program.nodes.push_back({Func::unique, {1}, {}, {}});
    program.nodes.push_back({Func::query_shape, {2}, {}, {}});
    validate(program);

    std::printf("truth: ");
    for (const auto& o : scene.objects) std::printf("[%s] ", to_string(o.cls).c_str());
    const auto truth_ans = direct_interpret(program, scene);
    std::printf("\ndirect answer: %s\n\n", truth_ans ? to_string(*truth_ans).c_str() : "none");

    auto noise = noise_preset("poor");
    noise.seed = 20240517;
    const auto matrix = apply_bbox_threshold(simulate(scene, noise), 0.25);
    std::printf("detector: %zu rows after box threshold\n", matrix.rows.size());

    const std::vector<PredictionMatrix> batch{matrix};
    const auto stats = score_statistics(batch);
    for (const double alpha : {0.5, 2.0}) {
        const double theta = confidence_threshold(stats, alpha);
        const auto sets = candidate_sets(matrix, theta, 1, false);
        std::size_t total = 0;
        for (const auto& s : sets) total += s.candidates.size();
        const auto out = solve(sets, program);
        std::printf("alpha=%.1f  theta=%.3f  candidates=%zu  answer=%s  cost=%lld  explored=%lld\n",
                    alpha, theta, total,
                    out.result ? to_string(*out.result).c_str() : "NO ANSWER",
                    out.cost.value_or(-1), out.explored);
    }

    const auto det_sets = candidate_sets(matrix, 0.0, 1, true);
    const auto det_out = solve(det_sets, program);
    std::printf("deterministic      answer=%s\n",
                det_out.result ? to_string(*det_out.result).c_str() : "NO ANSWER");

    // The same instance as a standalone ASP program.
    const auto sets = candidate_sets(matrix, confidence_threshold(stats, 2.0), 1, false);
    write_text_file("demo.lp", emit_asp(program, sets));
    std::printf("wrote demo.lp (feed it to an ASP solver to cross-check)\n");
    return 0;
}
