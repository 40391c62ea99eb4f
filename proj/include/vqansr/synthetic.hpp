#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "vqansr/json_io.hpp"
#include "vqansr/question.hpp"
#include "vqansr/reasoner.hpp"
#include "vqansr/rng.hpp"
#include "vqansr/scene.hpp"

namespace vqansr {

struct SyntheticConfig {
    int num_scenes = 100;
    int min_objects = 3;
    int max_objects = 8;
    int questions_per_scene = 5;
    std::uint64_t seed = 1;
};

struct Task {
    int scene_index = 0;
    QuestionProgram program;  // expected_answer always set
};

struct TaskSet {
    std::vector<SceneGraph> scenes;
    std::vector<Task> tasks;
};

namespace detail {

// Scene sampler: distinct classes per scene (so every object is uniquely
// identifiable by its attributes) and mostly non-overlapping boxes.
inline SceneGraph sample_scene(int image_id, const SyntheticConfig& cfg, Rng& rng) {
    SceneGraph scene;
    scene.image_id = image_id;
    const int n =
        cfg.min_objects +
        static_cast<int>(rng.uniform_int(static_cast<std::uint32_t>(cfg.max_objects - cfg.min_objects + 1)));

    std::vector<int> pool(kNumClasses);
    std::iota(pool.begin(), pool.end(), 0);
    for (int i = 0; i < n; ++i) {
        const int j = i + static_cast<int>(rng.uniform_int(static_cast<std::uint32_t>(kNumClasses - i)));
        std::swap(pool[i], pool[j]);
    }

    for (int i = 0; i < n; ++i) {
        const ObjectClass cls = class_from_index(pool[i]);
        const double half = cls.size == Size::large ? kLargeHalfExtent : kSmallHalfExtent;
        BoundingBox box;
        for (int attempt = 0; attempt < 40; ++attempt) {
            const double cx = rng.uniform(40.0, kImageWidth - 40.0);
            const double cy = rng.uniform(40.0, kImageHeight - 40.0);
            box = {cx - half, cy - half, cx + half, cy + half};
            bool clear = true;
            for (const auto& other : scene.objects)
                if (iou(box, other.box) > 0.1) {
                    clear = false;
                    break;
                }
            if (clear) break;
        }
        scene.objects.push_back({cls, box});
    }
    return scene;
}

// Builds questions from a fixed template cycle. Rotating counters over
// attribute dimensions and relation directions guarantee that any run of
// 100 consecutive questions uses every catalogue function at least once.
class QuestionSampler {
  public:
    QuestionSampler(const SceneGraph& scene, Rng& rng) : scene_(scene), rng_(rng) {}

    QuestionProgram sample(int template_hint) {
        for (int shift = 0; shift < kNumTemplates; ++shift) {
            const int t = (template_hint + shift) % kNumTemplates;
            for (int attempt = 0; attempt < 40; ++attempt) {
                prog_ = QuestionProgram{};
                if (!build(t)) continue;
                validate(prog_);
                const auto ans = direct_interpret(prog_, scene_);
                if (!ans) continue;
                prog_.expected_answer = to_string(*ans);
                prog_.image_index = scene_.image_id;
                return prog_;
            }
        }
        throw std::runtime_error("question sampling failed for scene " +
                                 std::to_string(scene_.image_id));
    }

    static constexpr int kNumTemplates = 15;

  private:
    const SceneGraph& scene_;
    Rng& rng_;
    QuestionProgram prog_;

    // Rotations shared across questions of one generator run.
  public:
    struct Rotations {
        int filter_dim = 0;
        int query_dim = 0;
        int same_dim = 0;
        int equal_dim = 0;
        int direction = 0;
    };
    Rotations* rot = nullptr;

  private:
    int add(FPNode node) {
        prog_.nodes.push_back(std::move(node));
        return static_cast<int>(prog_.nodes.size()) - 1;
    }
    int add_scene() { return add({Func::scene, {}, {}, {}}); }

    static Func filter_func(AttrValue::Dim dim) {
        switch (dim) {
            case AttrValue::Dim::size: return Func::filter_size;
            case AttrValue::Dim::color: return Func::filter_color;
            case AttrValue::Dim::material: return Func::filter_material;
            case AttrValue::Dim::shape: return Func::filter_shape;
        }
        return Func::filter_size;
    }
    static Func query_func(AttrValue::Dim dim) {
        return static_cast<Func>(static_cast<int>(Func::query_size) + static_cast<int>(dim));
    }
    static Func equal_func(AttrValue::Dim dim) {
        return static_cast<Func>(static_cast<int>(Func::equal_size) + static_cast<int>(dim));
    }
    static Func same_func(AttrValue::Dim dim) {
        return static_cast<Func>(static_cast<int>(Func::same_size) + static_cast<int>(dim));
    }

    AttrValue value_of(const ObjectClass& cls, AttrValue::Dim dim) const {
        return AttrValue{dim, attribute_of(cls, dim)};
    }
    AttrValue random_value(AttrValue::Dim dim) {
        constexpr int sizes[] = {kNumSizes, kNumColors, kNumMaterials, kNumShapes};
        return AttrValue{dim, static_cast<std::uint8_t>(rng_.uniform_int(
                                  static_cast<std::uint32_t>(sizes[static_cast<int>(dim)])))};
    }
    AttrValue::Dim next_filter_dim() {
        return static_cast<AttrValue::Dim>(rot->filter_dim++ % 4);
    }

    int random_object() {
        return static_cast<int>(rng_.uniform_int(static_cast<std::uint32_t>(scene_.objects.size())));
    }

    // Chain of 1-2 filters. Values are anchored to a real object three times
    // out of four so the sets are usually nonempty.
    int filter_chain(int input) {
        const int len = 1 + static_cast<int>(rng_.uniform_int(2));
        int cur = input;
        for (int i = 0; i < len; ++i) {
            const AttrValue::Dim dim = next_filter_dim();
            const AttrValue v = rng_.next_double() < 0.75
                                    ? value_of(scene_.objects[random_object()].cls, dim)
                                    : random_value(dim);
            cur = add({filter_func(dim), {cur}, v, {}});
        }
        return cur;
    }

    // Filters the scene down to exactly one chosen object, which works for
    // any target because scene classes are pairwise distinct.
    int unique_object(int& target_out) {
        const int target = random_object();
        target_out = target;
        const ObjectClass& cls = scene_.objects[target].cls;

        int dims[4] = {0, 1, 2, 3};
        for (int i = 3; i > 0; --i)
            std::swap(dims[i], dims[static_cast<int>(rng_.uniform_int(static_cast<std::uint32_t>(i + 1)))]);

        std::vector<int> alive(scene_.objects.size());
        std::iota(alive.begin(), alive.end(), 0);
        int cur = add_scene();
        for (int dim_i : dims) {
            const auto dim = static_cast<AttrValue::Dim>(dim_i);
            const AttrValue v = value_of(cls, dim);
            cur = add({filter_func(dim), {cur}, v, {}});
            std::erase_if(alive, [&](int idx) {
                return attribute_of(scene_.objects[idx].cls, dim) != v.value;
            });
            if (alive.size() == 1) break;
        }
        return add({Func::unique, {cur}, {}, {}});
    }

    Direction next_direction() { return static_cast<Direction>(rot->direction++ % 4); }

    bool build(int t) {
        if (scene_.objects.empty()) return false;
        int target = 0;
        switch (t) {
            case 0: add({Func::exist, {filter_chain(add_scene())}, {}, {}}); return true;
            case 1: add({Func::count, {filter_chain(add_scene())}, {}, {}}); return true;
            case 2: {
                const int u = unique_object(target);
                const auto dim = static_cast<AttrValue::Dim>(rot->query_dim++ % 4);
                add({query_func(dim), {u}, {}, {}});
                return true;
            }
            case 3: {
                const int a = filter_chain(add_scene());
                const int b = filter_chain(0);
                add({Func::count, {add({Func::union_set, {a, b}, {}, {}})}, {}, {}});
                return true;
            }
            case 4: {
                const int a = filter_chain(add_scene());
                const int b = filter_chain(0);
                add({Func::count, {add({Func::intersect, {a, b}, {}, {}})}, {}, {}});
                return true;
            }
            case 5: {
                const int a = filter_chain(add_scene());
                const int b = filter_chain(0);
                add({Func::exist, {add({Func::intersect, {a, b}, {}, {}})}, {}, {}});
                return true;
            }
            case 6:
            case 7:
            case 8: {
                const int a = add({Func::count, {filter_chain(add_scene())}, {}, {}});
                const int b = add({Func::count, {filter_chain(0)}, {}, {}});
                const Func f = t == 6 ? Func::equal_integer
                               : t == 7 ? Func::less_than
                                        : Func::greater_than;
                add({f, {a, b}, {}, {}});
                return true;
            }
            case 9: {
                const int u = unique_object(target);
                const int r = add({Func::relate, {u}, {}, next_direction()});
                add({Func::count, {r}, {}, {}});
                return true;
            }
            case 10: {
                const int u = unique_object(target);
                const int r = add({Func::relate, {u}, {}, next_direction()});
                add({Func::exist, {filter_chain(r)}, {}, {}});
                return true;
            }
            case 11: {
                const int u = unique_object(target);
                const auto dim = static_cast<AttrValue::Dim>(rot->same_dim++ % 4);
                add({Func::count, {add({same_func(dim), {u}, {}, {}})}, {}, {}});
                return true;
            }
            case 12: {
                const int u = unique_object(target);
                const auto dim = static_cast<AttrValue::Dim>(rot->same_dim++ % 4);
                add({Func::exist, {add({same_func(dim), {u}, {}, {}})}, {}, {}});
                return true;
            }
            case 13: {
                if (scene_.objects.size() < 2) return false;
                int t1 = 0, t2 = 0;
                const int u1 = unique_object(t1);
                int guard = 0;
                do {
                    t2 = random_object();
                } while (t2 == t1 && ++guard < 20);
                if (t2 == t1) return false;
                // Second unique chain, explicitly anchored to t2.
                const ObjectClass& cls = scene_.objects[t2].cls;
                int cur = 0;  // reuse scene node 0
                std::vector<int> alive(scene_.objects.size());
                std::iota(alive.begin(), alive.end(), 0);
                for (int dim_i = 0; dim_i < 4; ++dim_i) {
                    const auto dim = static_cast<AttrValue::Dim>(dim_i);
                    const AttrValue v = value_of(cls, dim);
                    cur = add({filter_func(dim), {cur}, v, {}});
                    std::erase_if(alive, [&](int idx) {
                        return attribute_of(scene_.objects[idx].cls, dim) != v.value;
                    });
                    if (alive.size() == 1) break;
                }
                const int u2 = add({Func::unique, {cur}, {}, {}});
                const auto dim = static_cast<AttrValue::Dim>(rot->equal_dim++ % 4);
                const int q1 = add({query_func(dim), {u1}, {}, {}});
                const int q2 = add({query_func(dim), {u2}, {}, {}});
                add({equal_func(dim), {q1, q2}, {}, {}});
                return true;
            }
            case 14: {
                const int u = unique_object(target);
                const auto dim = static_cast<AttrValue::Dim>(rot->same_dim++ % 4);
                const int s = add({same_func(dim), {u}, {}, {}});
                add({Func::exist, {filter_chain(s)}, {}, {}});
                return true;
            }
            default: return false;
        }
    }
};

}  // namespace detail

// Desk-scale task source: random scenes plus random well-typed questions
// whose expected answers come from direct interpretation of the truth.
// Fully determined by the config seed.
inline TaskSet generate_synthetic_tasks(const SyntheticConfig& cfg) {
    if (cfg.num_scenes < 1 || cfg.min_objects < 1 || cfg.max_objects < cfg.min_objects ||
        cfg.questions_per_scene < 1)
        throw std::invalid_argument("invalid synthetic generator settings");
    TaskSet out;
    Rng scene_rng(mix_seed(cfg.seed, 0xA11CE));
    out.scenes.reserve(cfg.num_scenes);
    for (int i = 0; i < cfg.num_scenes; ++i)
        out.scenes.push_back(detail::sample_scene(i, cfg, scene_rng));

    detail::QuestionSampler::Rotations rot;
    Rng question_rng(mix_seed(cfg.seed, 0xB0B));
    int question_counter = 0;
    for (int i = 0; i < cfg.num_scenes; ++i) {
        detail::QuestionSampler sampler(out.scenes[i], question_rng);
        sampler.rot = &rot;
        for (int q = 0; q < cfg.questions_per_scene; ++q) {
            Task task;
            task.scene_index = i;
            task.program = sampler.sample(question_counter++ % detail::QuestionSampler::kNumTemplates);
            out.tasks.push_back(std::move(task));
        }
    }
    return out;
}

inline json tasks_to_questions_json(const TaskSet& set) {
    json questions = json::array();
    for (const auto& t : set.tasks) questions.push_back(question_to_json(t.program));
    return json{{"questions", std::move(questions)}};
}

}  // namespace vqansr
