#pragma once

#include <bit>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "vqansr/confidence.hpp"
#include "vqansr/question.hpp"
#include "vqansr/scene.hpp"

namespace vqansr {

using Answer = std::variant<Size, Color, Material, Shape, bool, long long>;

inline std::string to_string(const Answer& a) {
    struct V {
        std::string operator()(Size v) const { return std::string(to_string(v)); }
        std::string operator()(Color v) const { return std::string(to_string(v)); }
        std::string operator()(Material v) const { return std::string(to_string(v)); }
        std::string operator()(Shape v) const { return std::string(to_string(v)); }
        std::string operator()(bool v) const { return v ? "yes" : "no"; }
        std::string operator()(long long v) const { return std::to_string(v); }
    };
    return std::visit(V{}, a);
}

// One committed scene interpretation: per detection row, the class picked
// from its candidate set plus that pick's weak-constraint weight.
struct ChosenObject {
    ObjectClass cls;
    BoundingBox box;
    int weight = 0;
};

using Choice = std::vector<ChosenObject>;

struct Outcome {
    std::optional<Answer> result;     // nullopt = NoAnswer
    std::optional<long long> cost;    // total weight of the winning choice
    bool tie = false;                 // another answer value is equally cheap
    long long explored = 0;           // complete choices evaluated (diagnostic)
    std::vector<int> chosen_classes;  // winning class index per row, empty on NoAnswer
};

// Scene interpretations are held as bitmasks over rows.
inline constexpr int kMaxObjectsPerScene = 64;

namespace detail {

struct NodeValue {
    ValueKind kind = ValueKind::object_set;
    std::uint64_t mask = 0;
    long long num = 0;
    bool flag = false;
    AttrValue attr{AttrValue::Dim::size, 0};
};

inline bool coordinate_relation(Direction d, const BoundingBox& obj, const BoundingBox& ref) {
    switch (d) {
        case Direction::left: return obj.x1 < ref.x1;
        case Direction::right: return obj.x1 > ref.x1;
        case Direction::front: return obj.y2 > ref.y2;   // larger y2 = closer to camera
        case Direction::behind: return obj.y2 < ref.y2;
    }
    return false;
}

}  // namespace detail

// Evaluates the program bottom-up for one fixed choice of object classes.
// With the choice fixed the logic program is stratified, so this single
// deterministic pass computes its unique model. Returns nullopt exactly when
// the interpretation admits no answer: a unique/query/relate/same node sees
// an input that is not a singleton, or the root produces an object set.
inline std::optional<Answer> evaluate_fixed(const Choice& choice, const QuestionProgram& program) {
    const int n = static_cast<int>(choice.size());
    if (n > kMaxObjectsPerScene)
        throw std::invalid_argument("scene exceeds the 64-detection limit");
    const std::uint64_t scene_mask = n == 64 ? ~0ULL : (1ULL << n) - 1;

    // Scratch reused across calls; the search evaluates the same program
    // thousands of times and the allocation would dominate.
    static thread_local std::vector<detail::NodeValue> values;
    values.assign(program.nodes.size(), detail::NodeValue{});
    for (std::size_t id = 0; id < program.nodes.size(); ++id) {
        const FPNode& node = program.nodes[id];
        detail::NodeValue v;
        v.kind = result_kind(node.fn);

        const auto input = [&](int slot) -> const detail::NodeValue& {
            return values[node.inputs[slot]];
        };
        // Resolves the single object a reference node denotes, or fails.
        const auto singleton = [&](const detail::NodeValue& in) -> std::optional<int> {
            if (in.kind != ValueKind::object_set || std::popcount(in.mask) != 1)
                return std::nullopt;
            return std::countr_zero(in.mask);
        };

        switch (node.fn) {
            case Func::scene: v.mask = scene_mask; break;
            case Func::filter_size:
            case Func::filter_color:
            case Func::filter_material:
            case Func::filter_shape: {
                std::uint64_t m = 0;
                for (int i = 0; i < n; ++i)
                    if ((input(0).mask >> i & 1) &&
                        attribute_of(choice[i].cls, node.attr->dim) == node.attr->value)
                        m |= 1ULL << i;
                v.mask = m;
                break;
            }
            case Func::unique: {
                const auto ref = singleton(input(0));
                if (!ref) return std::nullopt;
                v.mask = input(0).mask;
                break;
            }
            case Func::relate: {
                const auto ref = singleton(input(0));
                if (!ref) return std::nullopt;
                std::uint64_t m = 0;
                for (int i = 0; i < n; ++i)
                    if (i != *ref &&
                        detail::coordinate_relation(*node.dir, choice[i].box, choice[*ref].box))
                        m |= 1ULL << i;
                v.mask = m;
                break;
            }
            case Func::same_size:
            case Func::same_color:
            case Func::same_material:
            case Func::same_shape: {
                const auto ref = singleton(input(0));
                if (!ref) return std::nullopt;
                const auto dim = *attr_dim(node.fn);
                const auto want = attribute_of(choice[*ref].cls, dim);
                std::uint64_t m = 0;
                for (int i = 0; i < n; ++i)
                    if (i != *ref && attribute_of(choice[i].cls, dim) == want) m |= 1ULL << i;
                v.mask = m;
                break;
            }
            case Func::union_set: v.mask = input(0).mask | input(1).mask; break;
            case Func::intersect: v.mask = input(0).mask & input(1).mask; break;
            case Func::count: v.num = std::popcount(input(0).mask); break;
            case Func::exist: v.flag = input(0).mask != 0; break;
            case Func::query_size:
            case Func::query_color:
            case Func::query_material:
            case Func::query_shape: {
                const auto ref = singleton(input(0));
                if (!ref) return std::nullopt;
                const auto dim = *attr_dim(node.fn);
                v.attr = AttrValue{dim, attribute_of(choice[*ref].cls, dim)};
                break;
            }
            // Comparisons mirror the ASP encoding's default negation: the
            // false case fires whenever the true case cannot be derived.
            case Func::equal_integer:
                v.flag = input(0).kind == ValueKind::integer &&
                         input(1).kind == ValueKind::integer && input(0).num == input(1).num;
                break;
            case Func::less_than:
                v.flag = input(0).kind == ValueKind::integer &&
                         input(1).kind == ValueKind::integer && input(0).num < input(1).num;
                break;
            case Func::greater_than:
                v.flag = input(0).kind == ValueKind::integer &&
                         input(1).kind == ValueKind::integer && input(0).num > input(1).num;
                break;
            case Func::equal_size:
            case Func::equal_color:
            case Func::equal_material:
            case Func::equal_shape: {
                const auto dim = *attr_dim(node.fn);
                v.flag = input(0).kind != ValueKind::object_set &&
                         input(0).kind == input(1).kind && input(0).attr.dim == dim &&
                         input(1).attr.dim == dim && input(0).attr.value == input(1).attr.value;
                break;
            }
        }
        values[id] = v;
    }

    const detail::NodeValue& root = values[program.root()];
    switch (root.kind) {
        case ValueKind::object_set: return std::nullopt;
        case ValueKind::integer: return Answer{root.num};
        case ValueKind::boolean: return Answer{root.flag};
        case ValueKind::size: return Answer{root.attr.as_size()};
        case ValueKind::color: return Answer{root.attr.as_color()};
        case ValueKind::material: return Answer{root.attr.as_material()};
        case ValueKind::shape: return Answer{root.attr.as_shape()};
    }
    return std::nullopt;
}

namespace detail {

// Shared search state for solve/brute_force so both apply the identical
// ordering and tie rules: rows visited by ascending candidate count (index
// as tiebreak), candidates in stored order (ascending weight). The first
// answer found at the final optimal cost is the reported one, which makes
// the winner the lexicographically least optimal choice. Buffers live in
// thread-local storage; the harness calls solve once per question and the
// allocations would otherwise dominate small instances.
struct SearchOrder {
    std::vector<int> rows;              // visiting order -> original row slot
    std::vector<long long> suffix_min;  // min completion cost from depth d on

    void fill(std::span<const CandidateSet> sets) {
        rows.resize(sets.size());
        std::iota(rows.begin(), rows.end(), 0);
        std::stable_sort(rows.begin(), rows.end(), [&](int a, int b) {
            return sets[a].candidates.size() < sets[b].candidates.size();
        });
        suffix_min.assign(sets.size() + 1, 0);
        for (int d = static_cast<int>(sets.size()) - 1; d >= 0; --d) {
            long long row_min = sets[rows[d]].candidates.empty()
                                    ? 0
                                    : sets[rows[d]].candidates.front().weight;
            for (const auto& c : sets[rows[d]].candidates)
                row_min = std::min(row_min, static_cast<long long>(c.weight));
            suffix_min[d] = suffix_min[d + 1] + row_min;
        }
    }
};

inline SearchOrder& search_order_for(std::span<const CandidateSet> sets) {
    static thread_local SearchOrder order;
    order.fill(sets);
    return order;
}

inline Choice& choice_buffer(std::size_t n) {
    static thread_local Choice choice;
    choice.assign(n, ChosenObject{});
    return choice;
}

struct BestTracker {
    std::optional<Answer> answer;
    long long cost = 0;
    bool tie = false;
    std::vector<int> classes;

    void offer(const Answer& a, long long c, const Choice& choice) {
        if (!answer || c < cost) {
            answer = a;
            cost = c;
            tie = false;
            classes.clear();
            classes.reserve(choice.size());
            for (const auto& obj : choice) classes.push_back(class_index(obj.cls));
        } else if (c == cost && !(a == *answer)) {
            tie = true;
        }
    }

    void finish(Outcome& out) const {
        if (!answer) return;
        out.result = answer;
        out.cost = cost;
        out.tie = tie;
        out.chosen_classes = classes;
    }
};

inline void require_nonempty(std::span<const CandidateSet> sets) {
    for (const auto& s : sets)
        if (s.candidates.empty())
            throw std::invalid_argument("candidate set must not be empty");
}

}  // namespace detail

// Finds the minimum-cost choice that admits an answer, by depth-first
// branch and bound over the candidate sets. Partial branches are cut when
// their cost plus a lower bound on the remainder exceeds the incumbent;
// equal-cost branches survive so answer ties are detected exactly.
inline Outcome solve(std::span<const CandidateSet> sets, const QuestionProgram& program) {
    detail::require_nonempty(sets);
    if (sets.size() > kMaxObjectsPerScene)
        throw std::invalid_argument("scene exceeds the 64-detection limit");

    const detail::SearchOrder& order = detail::search_order_for(sets);
    Choice& choice = detail::choice_buffer(sets.size());
    detail::BestTracker best;
    Outcome out;

    const auto descend = [&](const auto& self, std::size_t depth, long long partial) -> void {
        if (best.answer && partial + order.suffix_min[depth] > best.cost) return;
        if (depth == sets.size()) {
            ++out.explored;
            if (const auto a = evaluate_fixed(choice, program)) best.offer(*a, partial, choice);
            return;
        }
        const int slot = order.rows[depth];
        for (const auto& c : sets[slot].candidates) {
            choice[slot] = {c.cls, sets[slot].box, c.weight};
            self(self, depth + 1, partial + c.weight);
        }
    };
    descend(descend, 0, 0);

    best.finish(out);
    return out;
}

// Exhaustive reference for solve: enumerates every choice in the same
// lexicographic order and applies the same tie rules. Guarded against
// blowup; intended for tests and spot checks.
inline Outcome brute_force(std::span<const CandidateSet> sets, const QuestionProgram& program) {
    detail::require_nonempty(sets);
    if (sets.size() > kMaxObjectsPerScene)
        throw std::invalid_argument("scene exceeds the 64-detection limit");
    double combos = 1.0;
    for (const auto& s : sets) combos *= static_cast<double>(s.candidates.size());
    if (combos > 1e6) throw std::invalid_argument("instance too large for brute force");

    const detail::SearchOrder order = detail::search_order_for(sets);  // copy: long-lived loop
    Choice choice(sets.size());
    detail::BestTracker best;
    Outcome out;

    std::vector<std::size_t> odo(sets.size(), 0);
    for (;;) {
        long long cost = 0;
        for (std::size_t d = 0; d < sets.size(); ++d) {
            const int slot = order.rows[d];
            const auto& c = sets[slot].candidates[odo[d]];
            choice[slot] = {c.cls, sets[slot].box, c.weight};
            cost += c.weight;
        }
        ++out.explored;
        if (const auto a = evaluate_fixed(choice, program)) best.offer(*a, cost, choice);

        // Advance the odometer, last visited row fastest.
        std::size_t d = sets.size();
        while (d > 0) {
            --d;
            if (++odo[d] < sets[order.rows[d]].candidates.size()) break;
            odo[d] = 0;
            if (d == 0) {
                best.finish(out);
                return out;
            }
        }
        if (sets.empty()) break;
    }
    best.finish(out);
    return out;
}

// Reference semantics on ground truth: the scene's own objects form the
// choice, bypassing detection entirely.
inline std::optional<Answer> direct_interpret(const QuestionProgram& program,
                                              const SceneGraph& scene) {
    Choice choice;
    choice.reserve(scene.objects.size());
    for (const auto& o : scene.objects) choice.push_back({o.cls, o.box, 0});
    return evaluate_fixed(choice, program);
}

}  // namespace vqansr
