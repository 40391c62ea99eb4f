#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <set>

#include "vqansr/harness.hpp"

using namespace vqansr;

TEST_CASE("toml reader") {
    const auto doc = toml::parse(R"(
# run configuration
[synthetic]
num_scenes = 40        # comment after value
seed = 9
[thresholds]
bbox_threshold = 0.25
alpha = [0.5, 1.0, 1.5, 2.0]
k = 1
[modes]
deterministic = true
nondeterministic = false
[output]
dir = "out/run-1"
)");
    CHECK(doc.at("synthetic").at("num_scenes").as_int() == 40);
    CHECK(doc.at("thresholds").at("bbox_threshold").as_double() == 0.25);
    CHECK(doc.at("thresholds").at("alpha").as_array().size() == 4);
    CHECK(doc.at("thresholds").at("alpha").as_array()[2].as_double() == 1.5);
    CHECK(doc.at("modes").at("deterministic").as_bool());
    CHECK_FALSE(doc.at("modes").at("nondeterministic").as_bool());
    CHECK(doc.at("output").at("dir").as_string() == "out/run-1");

    CHECK_THROWS_AS(toml::parse("key value"), toml::toml_error);
    CHECK_THROWS_AS(toml::parse("[section\nk = 1"), toml::toml_error);
    CHECK_THROWS_AS(toml::parse("k = [1, 2"), toml::toml_error);
    CHECK_THROWS_AS(toml::parse("k = \"abc"), toml::toml_error);
}

TEST_CASE("run config from toml") {
    const auto doc = toml::parse(R"(
[synthetic]
num_scenes = 50
questions_per_scene = 4
seed = 11
[noise]
preset = "poor"
seed = 5
[thresholds]
bbox_threshold = 0.25
alpha = [1.0, 2.0]
k = 1
[modes]
deterministic = true
nondeterministic = true
[output]
dir = "out/x"
trace = true
)");
    const auto cfg = run_config_from_toml(doc);
    REQUIRE(cfg.synthetic.has_value());
    CHECK(cfg.synthetic->num_scenes == 50);
    CHECK(cfg.noise_name == "poor");
    CHECK(cfg.noise.seed == 5);
    CHECK(cfg.noise.temperature == noise_preset("poor").temperature);
    CHECK(cfg.alphas == std::vector<double>{1.0, 2.0});
    CHECK(cfg.write_trace);
    CHECK_NOTHROW(validate(cfg));
}

TEST_CASE("run config validation") {
    RunConfig cfg;
    cfg.synthetic = SyntheticConfig{};
    cfg.deterministic_mode = false;
    cfg.nondeterministic_mode = false;
    CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
    cfg.nondeterministic_mode = true;
    cfg.alphas.clear();
    CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
    cfg.alphas = {1.0};
    CHECK_NOTHROW(validate(cfg));
    cfg.dataset = DatasetConfig{};
    CHECK_THROWS_AS(validate(cfg), std::invalid_argument);  // two sources
}

TEST_CASE("synthetic generation is deterministic and answerable") {
    SyntheticConfig cfg;
    cfg.num_scenes = 20;
    cfg.questions_per_scene = 5;
    cfg.seed = 123;
    const auto a = generate_synthetic_tasks(cfg);
    const auto b = generate_synthetic_tasks(cfg);
    REQUIRE(a.scenes.size() == b.scenes.size());
    CHECK(a.scenes == b.scenes);
    REQUIRE(a.tasks.size() == 100);
    for (std::size_t i = 0; i < a.tasks.size(); ++i) {
        CHECK(a.tasks[i].program.nodes == b.tasks[i].program.nodes);
        REQUIRE(a.tasks[i].program.expected_answer.has_value());
        const auto ans = direct_interpret(a.tasks[i].program, a.scenes[a.tasks[i].scene_index]);
        REQUIRE(ans.has_value());
        CHECK(to_string(*ans) == *a.tasks[i].program.expected_answer);
    }
}

TEST_CASE("any 100 consecutive questions cover the whole catalogue") {
    SyntheticConfig cfg;
    cfg.num_scenes = 30;
    cfg.questions_per_scene = 5;
    cfg.seed = 321;
    const auto set = generate_synthetic_tasks(cfg);
    REQUIRE(set.tasks.size() >= 150);
    for (std::size_t start : {std::size_t{0}, std::size_t{37}}) {
        std::set<Func> used;
        for (std::size_t i = start; i < start + 100; ++i)
            for (const auto& node : set.tasks[i].program.nodes) used.insert(node.fn);
        for (int f = 0; f < kNumFuncs; ++f) {
            INFO("missing function " << to_string(static_cast<Func>(f)));
            CHECK(used.count(static_cast<Func>(f)) == 1);
        }
    }
}

TEST_CASE("questions round-trip through the CLEVR json schema") {
    SyntheticConfig cfg;
    cfg.num_scenes = 6;
    cfg.questions_per_scene = 5;
    cfg.seed = 8;
    const auto set = generate_synthetic_tasks(cfg);
    const auto parsed = load_questions(tasks_to_questions_json(set));
    REQUIRE(parsed.size() == set.tasks.size());
    for (std::size_t i = 0; i < parsed.size(); ++i) {
        CHECK(parsed[i].nodes == set.tasks[i].program.nodes);
        CHECK(parsed[i].expected_answer == set.tasks[i].program.expected_answer);
        CHECK(parsed[i].image_index == set.scenes[set.tasks[i].scene_index].image_id);
    }
}

namespace {

RunConfig small_run(const char* preset, std::uint64_t seed) {
    RunConfig cfg;
    SyntheticConfig g;
    g.num_scenes = 30;
    g.questions_per_scene = 4;
    g.seed = seed;
    cfg.synthetic = g;
    cfg.noise = noise_preset(preset);
    cfg.noise.seed = seed + 1;
    cfg.noise_name = preset;
    cfg.alphas = {1.0, 2.0};
    cfg.output_dir = (std::filesystem::temp_directory_path() / "vqansr-test-run").string();
    return cfg;
}

}  // namespace

TEST_CASE("noise-free benchmark answers everything correctly") {
    auto cfg = small_run("perfect", 42);
    const auto report = run_benchmark(cfg);
    REQUIRE(report.cells.size() == 3);  // det + two alphas
    for (const auto& cell : report.cells) {
        CHECK(cell.n_questions >= 90);
        CHECK(cell.correct_pct == 100.0);
        CHECK(cell.wrong_pct == 0.0);
        CHECK(cell.no_answer_pct == 0.0);
        CHECK(cell.precision == 1.0);
        CHECK(cell.recall == 1.0);
    }
}

TEST_CASE("report percentages always partition the questions") {
    auto cfg = small_run("poor", 7);
    const auto report = run_benchmark(cfg);
    for (const auto& cell : report.cells) {
        CHECK(cell.correct_pct + cell.wrong_pct + cell.no_answer_pct ==
              Catch::Approx(100.0).margin(0.01));
        CHECK(cell.n_correct + cell.n_wrong + cell.n_no_answer == cell.n_questions);
    }
}

TEST_CASE("benchmark reruns bit-identically apart from wall time") {
    auto cfg = small_run("mid", 13);
    cfg.write_trace = true;
    const auto a = run_benchmark(cfg);
    const auto b = run_benchmark(cfg);
    REQUIRE(a.cells.size() == b.cells.size());
    for (std::size_t i = 0; i < a.cells.size(); ++i) {
        auto ca = a.cells[i], cb = b.cells[i];
        ca.wall_ms = cb.wall_ms = 0.0;
        CHECK(ca.mode == cb.mode);
        CHECK(ca.n_correct == cb.n_correct);
        CHECK(ca.n_wrong == cb.n_wrong);
        CHECK(ca.n_no_answer == cb.n_no_answer);
        CHECK(ca.precision == cb.precision);
        CHECK(ca.recall == cb.recall);
        CHECK(ca.theta == cb.theta);
    }
    REQUIRE(a.trace.size() == b.trace.size());
    for (std::size_t i = 0; i < a.trace.size(); ++i) {
        CHECK(a.trace[i].outcome == b.trace[i].outcome);
        CHECK(a.trace[i].chosen_classes == b.trace[i].chosen_classes);
        CHECK(a.trace[i].cost == b.trace[i].cost);
    }
    CHECK(a.config_hash == b.config_hash);
}

TEST_CASE("run outputs land on disk") {
    namespace fs = std::filesystem;
    auto cfg = small_run("good", 3);
    cfg.write_trace = true;
    cfg.output_dir = (fs::temp_directory_path() / "vqansr-test-outputs").string();
    fs::remove_all(cfg.output_dir);
    const auto report = run_benchmark(cfg);
    write_run_outputs(cfg, report);
    CHECK(fs::exists(fs::path(cfg.output_dir) / "report.csv"));
    CHECK(fs::exists(fs::path(cfg.output_dir) / "manifest.json"));
    CHECK(fs::exists(fs::path(cfg.output_dir) / "trace.jsonl"));

    const auto csv = report_to_csv(report);
    CHECK(csv.find("mode,alpha,noise") == 0);
    CHECK(csv.find("deterministic,") != std::string::npos);
    const auto manifest = manifest_json(cfg, report);
    CHECK(manifest.at("mu").get<double>() == report.stats.mu);
    CHECK(manifest.at("thetas").size() == cfg.alphas.size());
}

TEST_CASE("dataset mode consumes generated files") {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "vqansr-test-dataset";
    fs::create_directories(dir);
    SyntheticConfig g;
    g.num_scenes = 15;
    g.questions_per_scene = 3;
    g.seed = 77;
    const auto set = generate_synthetic_tasks(g);
    write_text_file((dir / "scenes.json").string(), scene_graphs_to_json(set.scenes).dump(1));
    write_text_file((dir / "questions.json").string(), tasks_to_questions_json(set).dump(1));

    RunConfig cfg;
    cfg.dataset = DatasetConfig{(dir / "scenes.json").string(), (dir / "questions.json").string(),
                                std::nullopt};
    cfg.noise = noise_preset("perfect");
    cfg.noise_name = "perfect";
    cfg.alphas = {1.0};
    cfg.deterministic_mode = true;
    cfg.nondeterministic_mode = false;
    const auto report = run_benchmark(cfg);
    REQUIRE(report.cells.size() == 1);
    CHECK(report.cells[0].correct_pct == 100.0);
}

TEST_CASE("answer normalization") {
    CHECK(normalize_answer("Yes") == "yes");
    CHECK(normalize_answer("TRUE") == "yes");
    CHECK(normalize_answer("false") == "no");
    CHECK(normalize_answer(" metallic ") == "metal");
    CHECK(normalize_answer("big") == "large");
    CHECK(normalize_answer("03") == "3");
    CHECK(normalize_answer("cylinder") == "cylinder");
}
