// Command-line front end for the VQA reasoning pipeline: benchmark runs,
// ASP emission for external solvers, synthetic dataset generation, and
// report inspection.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "vqansr/vqansr.hpp"

namespace fs = std::filesystem;
using namespace vqansr;

namespace {

int cmd_run(const std::string& config_path) {
    const RunConfig cfg = run_config_from_toml(toml::parse_file(config_path));
    validate(cfg);
    const RunReport report = run_benchmark(cfg);
    write_run_outputs(cfg, report);
    std::cout << report_to_csv(report);
    std::cout << "wrote " << (fs::path(cfg.output_dir) / "report.csv").string() << "\n";
    return 0;
}

int cmd_emit_asp(const std::string& question_path, int question_index,
                 const std::string& predictions_path, double alpha, int k, double bbox_threshold,
                 bool deterministic, const std::string& out_path) {
    const auto questions = load_questions(load_json_file(question_path));
    if (question_index < 0 || question_index >= static_cast<int>(questions.size()))
        throw std::runtime_error("question index out of range");
    const QuestionProgram& program = questions[question_index];

    auto matrices = load_prediction_matrices_file(predictions_path);
    for (auto& m : matrices) m = apply_bbox_threshold(m, bbox_threshold);

    // Statistics come from the whole predictions file, the matrix from the
    // question's image (or the first one if the file has no match).
    const ScoreStats stats = score_statistics(matrices);
    const double theta = confidence_threshold(stats, alpha);
    const PredictionMatrix* matrix = &matrices.front();
    for (const auto& m : matrices)
        if (m.image_id == program.image_index) {
            matrix = &m;
            break;
        }

    const auto sets = candidate_sets(*matrix, theta, k, deterministic);
    const std::string text = emit_asp(program, sets);
    check_asp_syntax(text);
    write_text_file(out_path, text);
    std::fprintf(stderr, "mu=%.6f sigma=%.6f theta=%.6f rows=%zu\n", stats.mu, stats.sigma, theta,
                 sets.size());
    std::cout << "wrote " << out_path << "\n";
    return 0;
}

int cmd_gen(int scenes, int questions_per_scene, int min_objects, int max_objects,
            std::uint64_t seed, const std::string& noise_name, const std::string& out_dir) {
    SyntheticConfig cfg;
    cfg.num_scenes = scenes;
    cfg.questions_per_scene = questions_per_scene;
    cfg.min_objects = min_objects;
    cfg.max_objects = max_objects;
    cfg.seed = seed;
    const TaskSet set = generate_synthetic_tasks(cfg);
    fs::create_directories(out_dir);
    write_text_file((fs::path(out_dir) / "scenes.json").string(),
                    scene_graphs_to_json(set.scenes).dump(1) + "\n");
    write_text_file((fs::path(out_dir) / "questions.json").string(),
                    tasks_to_questions_json(set).dump(1) + "\n");
    if (!noise_name.empty()) {
        NoiseConfig noise = noise_preset(noise_name);
        noise.seed = seed;
        std::vector<PredictionMatrix> preds;
        preds.reserve(set.scenes.size());
        for (const auto& s : set.scenes) preds.push_back(simulate(s, noise));
        write_text_file((fs::path(out_dir) / "predictions.json").string(),
                        prediction_matrices_to_json(preds).dump(1) + "\n");
    }
    std::cout << "wrote " << set.scenes.size() << " scenes, " << set.tasks.size()
              << " questions to " << out_dir << "\n";
    return 0;
}

int cmd_metrics(const std::string& report_path) {
    std::ifstream in(report_path);
    if (!in) throw std::runtime_error("cannot open " + report_path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty report");
    std::printf("%-18s %-6s %-8s %6s %9s %8s %10s %10s %8s\n", "mode", "alpha", "noise", "bbox",
                "correct%", "wrong%", "noanswer%", "recall", "wall_ms");
    int row = 0;
    while (std::getline(in, line)) {
        std::vector<std::string> cols;
        std::stringstream ss(line);
        std::string col;
        while (std::getline(ss, col, ',')) cols.push_back(col);
        if (cols.size() < 14) throw std::runtime_error("malformed report row: " + line);
        const double correct = std::stod(cols[5]), wrong = std::stod(cols[6]),
                     noans = std::stod(cols[7]);
        if (std::abs(correct + wrong + noans - 100.0) > 0.01)
            throw std::runtime_error("row " + std::to_string(row) +
                                     ": percentages do not sum to 100");
        std::printf("%-18s %-6s %-8s %6s %9.2f %8.2f %10.2f %10s %8s\n", cols[0].c_str(),
                    cols[1].empty() ? "-" : cols[1].c_str(), cols[2].c_str(), cols[3].c_str(),
                    correct, wrong, noans, cols[9].c_str(), cols[13].c_str());
        ++row;
    }
    std::printf("%d cells, all percentage sums within 0.01 of 100\n", row);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Neuro-symbolic VQA reasoning pipeline"};
    app.require_subcommand(1);

    std::string config_path;
    auto* run = app.add_subcommand("run", "Run a benchmark from a TOML config");
    run->add_option("--config", config_path, "TOML run configuration")->required();

    std::string question_path, predictions_path, out_lp = "out.lp";
    int question_index = 0, k = 1;
    double alpha = 1.5, bbox_threshold = 0.25;
    bool deterministic = false;
    auto* emit = app.add_subcommand("emit-asp", "Compile one question + predictions to ASP text");
    emit->add_option("--question", question_path, "CLEVR questions JSON")->required();
    emit->add_option("--question-index", question_index, "Which question to compile");
    emit->add_option("--predictions", predictions_path, "Prediction sidecar JSON")->required();
    emit->add_option("--alpha", alpha, "Confidence rate");
    emit->add_option("--k", k, "Fall-back candidate count");
    emit->add_option("--bbox-threshold", bbox_threshold, "Box confidence cutoff");
    emit->add_flag("--deterministic", deterministic, "Argmax-only scene encoding");
    emit->add_option("-o,--output", out_lp, "Output .lp path");

    int scenes = 100, questions_per_scene = 5, min_objects = 3, max_objects = 8;
    std::uint64_t seed = 1;
    std::string noise_name, out_dir = "data";
    auto* gen = app.add_subcommand("gen", "Generate a synthetic scenes+questions dataset");
    gen->add_option("--scenes", scenes, "Number of scenes");
    gen->add_option("--questions-per-scene", questions_per_scene, "Questions per scene");
    gen->add_option("--min-objects", min_objects, "Minimum objects per scene");
    gen->add_option("--max-objects", max_objects, "Maximum objects per scene");
    gen->add_option("--seed", seed, "Generator seed")->required();
    gen->add_option("--noise", noise_name, "Also write simulated predictions (preset name)");
    gen->add_option("-o,--output", out_dir, "Output directory");

    std::string report_path;
    auto* metrics = app.add_subcommand("metrics", "Summarize and sanity-check a report.csv");
    metrics->add_option("--report", report_path, "Path to report.csv")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(config_path);
        if (emit->parsed())
            return cmd_emit_asp(question_path, question_index, predictions_path, alpha, k,
                                bbox_threshold, deterministic, out_lp);
        if (gen->parsed())
            return cmd_gen(scenes, questions_per_scene, min_objects, max_objects, seed,
                           noise_name, out_dir);
        if (metrics->parsed()) return cmd_metrics(report_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
