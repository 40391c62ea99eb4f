#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "vqansr/asp_emit.hpp"
#include "vqansr/confidence.hpp"
#include "vqansr/detector_sim.hpp"
#include "vqansr/json_io.hpp"
#include "vqansr/reasoner.hpp"
#include "vqansr/synthetic.hpp"
#include "vqansr/toml_lite.hpp"

namespace vqansr {

struct DatasetConfig {
    std::string scenes_path;
    std::string questions_path;
    std::optional<std::string> predictions_path;  // sidecar matrices; simulated when absent
};

struct RunConfig {
    std::optional<SyntheticConfig> synthetic;
    std::optional<DatasetConfig> dataset;
    NoiseConfig noise;
    std::string noise_name = "custom";
    double bbox_threshold = 0.25;
    std::vector<double> alphas = {0.5, 1.0, 1.5, 2.0};
    int k = 1;
    bool deterministic_mode = true;
    bool nondeterministic_mode = true;
    double iou_min = 0.5;
    std::string output_dir = "out";
    bool write_trace = false;
    int threads = 0;          // 0 = auto
    int timing_repeats = 1;   // timed passes per cell; wall_ms is the per-pass mean
};

inline void validate(const RunConfig& cfg) {
    if (cfg.synthetic.has_value() == cfg.dataset.has_value())
        throw std::invalid_argument("exactly one of [synthetic] and [dataset] must be given");
    if (!cfg.deterministic_mode && !cfg.nondeterministic_mode)
        throw std::invalid_argument("at least one mode must be enabled");
    if (cfg.nondeterministic_mode && cfg.alphas.empty())
        throw std::invalid_argument("alpha list must be nonempty for the non-deterministic mode");
    for (double a : cfg.alphas)
        if (a < 0.0) throw std::invalid_argument("alpha must be >= 0");
    if (cfg.k < 1 || cfg.k > kNumClasses) throw std::invalid_argument("k must be in [1,96]");
    if (cfg.bbox_threshold < 0.0 || cfg.bbox_threshold > 1.0)
        throw std::invalid_argument("bbox_threshold must be in [0,1]");
    validate(cfg.noise);
}

// One row of the report: results for a (mode, alpha) cell under the run's
// noise model and box threshold.
struct CellReport {
    std::string mode;             // "deterministic" or "nondeterministic"
    std::optional<double> alpha;  // absent in deterministic mode
    std::string noise;
    double bbox_threshold = 0.0;
    int n_questions = 0;
    long long n_correct = 0, n_wrong = 0, n_no_answer = 0;
    double correct_pct = 0.0, wrong_pct = 0.0, no_answer_pct = 0.0;
    double precision = 1.0, recall = 1.0;
    double mu = 0.0, sigma = 0.0, theta = 0.0;
    double wall_ms = 0.0;
};

struct QuestionTrace {
    std::string cell;
    int question_index = 0;
    int image_index = 0;
    std::string expected;
    std::string outcome;  // correct | wrong | no_answer
    std::optional<std::string> answer;
    std::optional<long long> cost;
    long long explored = 0;
    std::vector<int> chosen_classes;
};

struct RunReport {
    std::vector<CellReport> cells;
    ScoreStats stats;
    std::vector<double> thetas;  // aligned with cfg.alphas
    std::string config_hash;
    std::vector<QuestionTrace> trace;  // filled when cfg.write_trace
};

// Canonicalizes an answer string for comparison: attribute synonyms collapse,
// booleans become yes/no, integers lose leading zeros.
inline std::string normalize_answer(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    if (s == "true" || s == "yes") return "yes";
    if (s == "false" || s == "no") return "no";
    if (const auto av = parse_attr_value(s)) return std::string(to_string(*av));
    if (!s.empty() && (std::isdigit(static_cast<unsigned char>(s[0])) || s[0] == '-')) {
        try {
            return std::to_string(std::stoll(s));
        } catch (const std::exception&) {
        }
    }
    return s;
}

namespace detail {

inline std::uint64_t fnv1a(std::string_view data) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::string config_fingerprint(const RunConfig& cfg) {
    std::string s;
    if (cfg.synthetic) {
        const auto& g = *cfg.synthetic;
        s += "synthetic:" + std::to_string(g.num_scenes) + "," + std::to_string(g.min_objects) +
             "," + std::to_string(g.max_objects) + "," + std::to_string(g.questions_per_scene) +
             "," + std::to_string(g.seed) + ";";
    }
    if (cfg.dataset) {
        s += "dataset:" + cfg.dataset->scenes_path + "," + cfg.dataset->questions_path + "," +
             cfg.dataset->predictions_path.value_or("-") + ";";
    }
    char buf[256];
    std::snprintf(buf, sizeof buf, "noise:%s,%.9g,%.9g,%.9g,%.9g,%.9g,%llu;bbox:%.9g;k:%d;iou:%.9g",
                  cfg.noise_name.c_str(), cfg.noise.temperature, cfg.noise.score_scale,
                  cfg.noise.p_fn, cfg.noise.p_fp, cfg.noise.box_jitter,
                  static_cast<unsigned long long>(cfg.noise.seed), cfg.bbox_threshold, cfg.k,
                  cfg.iou_min);
    s += buf;
    s += ";alphas:";
    for (double a : cfg.alphas) {
        std::snprintf(buf, sizeof buf, "%.9g,", a);
        s += buf;
    }
    s += ";modes:";
    s += cfg.deterministic_mode ? "d" : "";
    s += cfg.nondeterministic_mode ? "n" : "";
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a(s)));
    return buf;
}

struct PreparedRun {
    TaskSet tasks;                                  // scenes + questions
    std::vector<PredictionMatrix> filtered;         // one per scene, box-thresholded
    std::vector<bool> calibration;                  // per scene index
    std::vector<int> eval_tasks;                    // indices into tasks.tasks
    ScoreStats stats;
};

inline TaskSet load_dataset_tasks(const DatasetConfig& ds) {
    TaskSet set;
    set.scenes = load_scene_graphs_file(ds.scenes_path);
    std::map<int, int> scene_index;
    for (std::size_t i = 0; i < set.scenes.size(); ++i)
        scene_index[set.scenes[i].image_id] = static_cast<int>(i);
    const auto questions = load_questions(load_json_file(ds.questions_path));
    for (const auto& q : questions) {
        Task t;
        const auto it = scene_index.find(q.image_index);
        if (it == scene_index.end())
            throw std::runtime_error("question references unknown image_index " +
                                     std::to_string(q.image_index));
        t.scene_index = it->second;
        t.program = q;
        if (!t.program.expected_answer) {
            const auto ans = direct_interpret(t.program, set.scenes[t.scene_index]);
            if (!ans)
                throw std::runtime_error("question has no dataset answer and no direct answer");
            t.program.expected_answer = to_string(*ans);
        }
        set.tasks.push_back(std::move(t));
    }
    return set;
}

inline PreparedRun prepare(const RunConfig& cfg) {
    PreparedRun run;
    run.tasks = cfg.synthetic ? generate_synthetic_tasks(*cfg.synthetic)
                              : load_dataset_tasks(*cfg.dataset);
    if (run.tasks.tasks.empty()) throw std::runtime_error("empty task set");

    std::vector<PredictionMatrix> raw;
    if (cfg.dataset && cfg.dataset->predictions_path) {
        raw = load_prediction_matrices_file(*cfg.dataset->predictions_path);
        std::map<int, PredictionMatrix*> by_id;
        for (auto& m : raw) by_id[m.image_id] = &m;
        std::vector<PredictionMatrix> aligned;
        for (const auto& s : run.tasks.scenes) {
            const auto it = by_id.find(s.image_id);
            if (it == by_id.end())
                throw std::runtime_error("no prediction matrix for image " +
                                         std::to_string(s.image_id));
            aligned.push_back(*it->second);
        }
        raw = std::move(aligned);
    } else {
        raw.reserve(run.tasks.scenes.size());
        for (const auto& s : run.tasks.scenes) raw.push_back(simulate(s, cfg.noise));
    }

    run.filtered.reserve(raw.size());
    for (const auto& m : raw) run.filtered.push_back(apply_bbox_threshold(m, cfg.bbox_threshold));

    // Every fifth scene calibrates the confidence statistics; the rest are
    // evaluated. The split is by scene so no question sees its own
    // calibration data.
    run.calibration.resize(run.tasks.scenes.size());
    std::vector<PredictionMatrix> calib;
    for (std::size_t i = 0; i < run.tasks.scenes.size(); ++i) {
        run.calibration[i] = (i % 5 == 0);
        if (run.calibration[i]) calib.push_back(run.filtered[i]);
    }
    run.stats = score_statistics(calib);

    for (std::size_t t = 0; t < run.tasks.tasks.size(); ++t)
        if (!run.calibration[run.tasks.tasks[t].scene_index])
            run.eval_tasks.push_back(static_cast<int>(t));
    if (run.eval_tasks.empty()) throw std::runtime_error("no evaluation questions after split");
    return run;
}

struct CellOutcome {
    std::string outcome;
    std::optional<std::string> answer;
    std::optional<long long> cost;
    long long explored = 0;
    std::vector<int> chosen;
};

}  // namespace detail

// Runs the full pipeline: simulate (or load) detections, box-filter,
// calibrate (mu, sigma) on the held-out slice, then answer every evaluation
// question per cell and aggregate rates. Deterministic up to wall_ms.
inline RunReport run_benchmark(const RunConfig& cfg) {
    validate(cfg);
    detail::PreparedRun run = detail::prepare(cfg);

    RunReport report;
    report.stats = run.stats;
    report.config_hash = detail::config_fingerprint(cfg);
    for (double a : cfg.alphas) report.thetas.push_back(confidence_threshold(run.stats, a));

    // Detection quality over the evaluation slice; identical across cells.
    std::vector<PredictionMatrix> eval_preds;
    std::vector<SceneGraph> eval_scenes;
    for (std::size_t i = 0; i < run.tasks.scenes.size(); ++i)
        if (!run.calibration[i]) {
            eval_preds.push_back(run.filtered[i]);
            eval_scenes.push_back(run.tasks.scenes[i]);
        }
    const DetectionMetrics det = detection_metrics(eval_preds, eval_scenes, cfg.iou_min);

    struct CellSpec {
        bool deterministic;
        std::optional<double> alpha;
    };
    std::vector<CellSpec> specs;
    if (cfg.deterministic_mode) specs.push_back({true, std::nullopt});
    if (cfg.nondeterministic_mode)
        for (double a : cfg.alphas) specs.push_back({false, a});

    const unsigned hw = std::thread::hardware_concurrency();
    const int n_threads = cfg.threads > 0 ? cfg.threads
                                          : static_cast<int>(std::min(8u, std::max(1u, hw)));

    for (const auto& spec : specs) {
        const double theta =
            spec.alpha ? confidence_threshold(run.stats, *spec.alpha) : 0.0;
        const std::string cell_name =
            spec.deterministic ? "deterministic"
                               : "nondeterministic@alpha=" + std::to_string(*spec.alpha);

        // Candidate sets are shared by all questions on a scene.
        std::vector<std::vector<CandidateSet>> sets(run.tasks.scenes.size());
        for (std::size_t i = 0; i < run.tasks.scenes.size(); ++i)
            if (!run.calibration[i])
                sets[i] = candidate_sets(run.filtered[i], theta, cfg.k, spec.deterministic);

        // Untimed warmup slice so the first cell does not absorb one-time
        // allocator and page-fault costs into its wall time.
        for (std::size_t w = 0; w < std::min<std::size_t>(32, run.eval_tasks.size()); ++w) {
            const Task& task = run.tasks.tasks[run.eval_tasks[w]];
            (void)solve(sets[task.scene_index], task.program);
        }

        const int repeats = std::max(1, cfg.timing_repeats);
        const auto t0 = std::chrono::steady_clock::now();

        std::vector<detail::CellOutcome> outcomes(run.eval_tasks.size());
        std::atomic<std::size_t> cursor{0};
        const std::size_t total_work = run.eval_tasks.size() * static_cast<std::size_t>(repeats);
        const auto worker = [&]() {
            for (;;) {
                const std::size_t slot = cursor.fetch_add(1);
                if (slot >= total_work) return;
                const std::size_t at = slot % run.eval_tasks.size();
                const Task& task = run.tasks.tasks[run.eval_tasks[at]];
                const Outcome out = solve(sets[task.scene_index], task.program);
                if (slot >= run.eval_tasks.size()) continue;  // repeat passes are timing-only
                detail::CellOutcome& dst = outcomes[at];
                dst.explored = out.explored;
                dst.cost = out.cost;
                dst.chosen = out.chosen_classes;
                if (!out.result) {
                    dst.outcome = "no_answer";
                } else {
                    dst.answer = to_string(*out.result);
                    dst.outcome = normalize_answer(*dst.answer) ==
                                          normalize_answer(*task.program.expected_answer)
                                      ? "correct"
                                      : "wrong";
                }
            }
        };
        std::vector<std::thread> pool;
        for (int t = 1; t < n_threads; ++t) pool.emplace_back(worker);
        worker();
        for (auto& t : pool) t.join();

        const auto t1 = std::chrono::steady_clock::now();

        CellReport cell;
        cell.mode = spec.deterministic ? "deterministic" : "nondeterministic";
        cell.alpha = spec.alpha;
        cell.noise = cfg.noise_name;
        cell.bbox_threshold = cfg.bbox_threshold;
        cell.n_questions = static_cast<int>(run.eval_tasks.size());
        for (const auto& o : outcomes) {
            if (o.outcome == "correct")
                ++cell.n_correct;
            else if (o.outcome == "wrong")
                ++cell.n_wrong;
            else
                ++cell.n_no_answer;
        }
        const double n = static_cast<double>(cell.n_questions);
        cell.correct_pct = 100.0 * static_cast<double>(cell.n_correct) / n;
        cell.wrong_pct = 100.0 * static_cast<double>(cell.n_wrong) / n;
        cell.no_answer_pct = 100.0 * static_cast<double>(cell.n_no_answer) / n;
        cell.precision = det.precision;
        cell.recall = det.recall;
        cell.mu = run.stats.mu;
        cell.sigma = run.stats.sigma;
        cell.theta = theta;
        cell.wall_ms =
            std::chrono::duration<double, std::milli>(t1 - t0).count() / repeats;
        report.cells.push_back(cell);

        if (cfg.write_trace) {
            for (std::size_t at = 0; at < outcomes.size(); ++at) {
                const Task& task = run.tasks.tasks[run.eval_tasks[at]];
                QuestionTrace tr;
                tr.cell = cell_name;
                tr.question_index = run.eval_tasks[at];
                tr.image_index = run.tasks.scenes[task.scene_index].image_id;
                tr.expected = *task.program.expected_answer;
                tr.outcome = outcomes[at].outcome;
                tr.answer = outcomes[at].answer;
                tr.cost = outcomes[at].cost;
                tr.explored = outcomes[at].explored;
                tr.chosen_classes = outcomes[at].chosen;
                report.trace.push_back(std::move(tr));
            }
        }
    }
    return report;
}

// CSV rendering mirrors the report cells one row per cell; every field but
// wall_ms is reproducible bit for bit under a fixed config and seed.
inline std::string report_to_csv(const RunReport& report) {
    std::string out =
        "mode,alpha,noise,bbox_threshold,n_questions,correct_pct,wrong_pct,no_answer_pct,"
        "precision,recall,mu,sigma,theta,wall_ms\n";
    char buf[512];
    for (const auto& c : report.cells) {
        std::string alpha = c.alpha ? [&] {
            char a[32];
            std::snprintf(a, sizeof a, "%.2f", *c.alpha);
            return std::string(a);
        }() : std::string();
        std::snprintf(buf, sizeof buf,
                      "%s,%s,%s,%.4f,%d,%.4f,%.4f,%.4f,%.6f,%.6f,%.6f,%.6f,%.6f,%.3f\n",
                      c.mode.c_str(), alpha.c_str(), c.noise.c_str(), c.bbox_threshold,
                      c.n_questions, c.correct_pct, c.wrong_pct, c.no_answer_pct, c.precision,
                      c.recall, c.mu, c.sigma, c.theta, c.wall_ms);
        out += buf;
    }
    return out;
}

inline json manifest_json(const RunConfig& cfg, const RunReport& report) {
    json noise{{"name", cfg.noise_name},
               {"temperature", cfg.noise.temperature},
               {"score_scale", cfg.noise.score_scale},
               {"p_fn", cfg.noise.p_fn},
               {"p_fp", cfg.noise.p_fp},
               {"box_jitter", cfg.noise.box_jitter},
               {"seed", cfg.noise.seed}};
    json modes = json::array();
    if (cfg.deterministic_mode) modes.push_back("deterministic");
    if (cfg.nondeterministic_mode) modes.push_back("nondeterministic");
    json m{{"version", "0.1.0"},
           {"config_hash", report.config_hash},
           {"noise", std::move(noise)},
           {"bbox_threshold", cfg.bbox_threshold},
           {"alphas", cfg.alphas},
           {"thetas", report.thetas},
           {"k", cfg.k},
           {"iou_min", cfg.iou_min},
           {"modes", std::move(modes)},
           {"mu", report.stats.mu},
           {"sigma", report.stats.sigma}};
    if (cfg.synthetic)
        m["synthetic"] = {{"num_scenes", cfg.synthetic->num_scenes},
                          {"min_objects", cfg.synthetic->min_objects},
                          {"max_objects", cfg.synthetic->max_objects},
                          {"questions_per_scene", cfg.synthetic->questions_per_scene},
                          {"seed", cfg.synthetic->seed}};
    if (cfg.dataset)
        m["dataset"] = {{"scenes", cfg.dataset->scenes_path},
                        {"questions", cfg.dataset->questions_path},
                        {"predictions", cfg.dataset->predictions_path.value_or("")}};
    return m;
}

inline void write_run_outputs(const RunConfig& cfg, const RunReport& report) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.output_dir);
    write_text_file((fs::path(cfg.output_dir) / "report.csv").string(), report_to_csv(report));
    write_text_file((fs::path(cfg.output_dir) / "manifest.json").string(),
                    manifest_json(cfg, report).dump(2) + "\n");
    if (cfg.write_trace) {
        std::string lines;
        for (const auto& t : report.trace) {
            json j{{"cell", t.cell},
                   {"question", t.question_index},
                   {"image_index", t.image_index},
                   {"expected", t.expected},
                   {"outcome", t.outcome},
                   {"explored", t.explored},
                   {"chosen", t.chosen_classes}};
            j["answer"] = t.answer ? json(*t.answer) : json(nullptr);
            j["cost"] = t.cost ? json(*t.cost) : json(nullptr);
            lines += j.dump();
            lines += '\n';
        }
        write_text_file((fs::path(cfg.output_dir) / "trace.jsonl").string(), lines);
    }
}

// Reads a run config in the TOML layout: [synthetic]/[dataset], [noise],
// [thresholds], [modes], [output].
inline RunConfig run_config_from_toml(const toml::Document& doc) {
    RunConfig cfg;
    const auto get = [&](const std::string& section) -> const toml::Table* {
        const auto it = doc.find(section);
        return it == doc.end() ? nullptr : &it->second;
    };
    const auto field = [](const toml::Table& t, const std::string& key) -> const toml::Value* {
        const auto it = t.find(key);
        return it == t.end() ? nullptr : &it->second;
    };

    if (const auto* t = get("synthetic")) {
        SyntheticConfig g;
        if (const auto* v = field(*t, "num_scenes")) g.num_scenes = static_cast<int>(v->as_int());
        if (const auto* v = field(*t, "min_objects")) g.min_objects = static_cast<int>(v->as_int());
        if (const auto* v = field(*t, "max_objects")) g.max_objects = static_cast<int>(v->as_int());
        if (const auto* v = field(*t, "questions_per_scene"))
            g.questions_per_scene = static_cast<int>(v->as_int());
        if (const auto* v = field(*t, "seed")) g.seed = static_cast<std::uint64_t>(v->as_int());
        cfg.synthetic = g;
    }
    if (const auto* t = get("dataset")) {
        DatasetConfig d;
        if (const auto* v = field(*t, "scenes")) d.scenes_path = v->as_string();
        if (const auto* v = field(*t, "questions")) d.questions_path = v->as_string();
        if (const auto* v = field(*t, "predictions")) d.predictions_path = v->as_string();
        cfg.dataset = d;
    }
    if (const auto* t = get("noise")) {
        if (const auto* v = field(*t, "preset")) {
            cfg.noise = noise_preset(v->as_string());
            cfg.noise_name = v->as_string();
        }
        if (const auto* v = field(*t, "temperature")) cfg.noise.temperature = v->as_double();
        if (const auto* v = field(*t, "score_scale")) cfg.noise.score_scale = v->as_double();
        if (const auto* v = field(*t, "p_fn")) cfg.noise.p_fn = v->as_double();
        if (const auto* v = field(*t, "p_fp")) cfg.noise.p_fp = v->as_double();
        if (const auto* v = field(*t, "box_jitter")) cfg.noise.box_jitter = v->as_double();
        if (const auto* v = field(*t, "seed")) cfg.noise.seed = static_cast<std::uint64_t>(v->as_int());
    }
    if (const auto* t = get("thresholds")) {
        if (const auto* v = field(*t, "bbox_threshold")) cfg.bbox_threshold = v->as_double();
        if (const auto* v = field(*t, "alpha")) {
            cfg.alphas.clear();
            for (const auto& a : v->as_array()) cfg.alphas.push_back(a.as_double());
        }
        if (const auto* v = field(*t, "k")) cfg.k = static_cast<int>(v->as_int());
        if (const auto* v = field(*t, "iou_min")) cfg.iou_min = v->as_double();
    }
    if (const auto* t = get("modes")) {
        if (const auto* v = field(*t, "deterministic")) cfg.deterministic_mode = v->as_bool();
        if (const auto* v = field(*t, "nondeterministic")) cfg.nondeterministic_mode = v->as_bool();
    }
    if (const auto* t = get("output")) {
        if (const auto* v = field(*t, "dir")) cfg.output_dir = v->as_string();
        if (const auto* v = field(*t, "trace")) cfg.write_trace = v->as_bool();
        if (const auto* v = field(*t, "threads")) cfg.threads = static_cast<int>(v->as_int());
        if (const auto* v = field(*t, "timing_repeats"))
            cfg.timing_repeats = static_cast<int>(v->as_int());
    }
    return cfg;
}

}  // namespace vqansr
