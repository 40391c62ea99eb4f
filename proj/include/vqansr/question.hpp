#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "vqansr/attributes.hpp"

namespace vqansr {

// The CLEVR functional-program catalogue.
enum class Func : std::uint8_t {
    scene,
    filter_size,
    filter_color,
    filter_material,
    filter_shape,
    unique,
    relate,
    union_set,
    intersect,
    count,
    exist,
    query_size,
    query_color,
    query_material,
    query_shape,
    equal_integer,
    less_than,
    greater_than,
    equal_size,
    equal_color,
    equal_material,
    equal_shape,
    same_size,
    same_color,
    same_material,
    same_shape,
};

inline constexpr int kNumFuncs = 26;

enum class Direction : std::uint8_t { left, right, front, behind };

constexpr std::string_view to_string(Direction d) {
    constexpr std::string_view names[] = {"left", "right", "front", "behind"};
    return names[static_cast<int>(d)];
}

inline std::optional<Direction> parse_direction(std::string_view s) {
    if (s == "left") return Direction::left;
    if (s == "right") return Direction::right;
    if (s == "front") return Direction::front;
    if (s == "behind") return Direction::behind;
    return std::nullopt;
}

constexpr std::string_view to_string(Func f) {
    constexpr std::string_view names[] = {
        "scene",        "filter_size",    "filter_color",  "filter_material", "filter_shape",
        "unique",       "relate",         "union",         "intersect",       "count",
        "exist",        "query_size",     "query_color",   "query_material",  "query_shape",
        "equal_integer", "less_than",     "greater_than",  "equal_size",      "equal_color",
        "equal_material", "equal_shape",  "same_size",     "same_color",      "same_material",
        "same_shape"};
    return names[static_cast<int>(f)];
}

// What a node produces; used for input validation and evaluation dispatch.
enum class ValueKind : std::uint8_t { object_set, integer, boolean, size, color, material, shape };

constexpr ValueKind result_kind(Func f) {
    switch (f) {
        case Func::count: return ValueKind::integer;
        case Func::exist:
        case Func::equal_integer:
        case Func::less_than:
        case Func::greater_than:
        case Func::equal_size:
        case Func::equal_color:
        case Func::equal_material:
        case Func::equal_shape: return ValueKind::boolean;
        case Func::query_size: return ValueKind::size;
        case Func::query_color: return ValueKind::color;
        case Func::query_material: return ValueKind::material;
        case Func::query_shape: return ValueKind::shape;
        default: return ValueKind::object_set;
    }
}

constexpr int arity(Func f) {
    switch (f) {
        case Func::scene: return 0;
        case Func::union_set:
        case Func::intersect:
        case Func::equal_integer:
        case Func::less_than:
        case Func::greater_than:
        case Func::equal_size:
        case Func::equal_color:
        case Func::equal_material:
        case Func::equal_shape: return 2;
        default: return 1;
    }
}

constexpr bool takes_attr_value(Func f) {
    return f == Func::filter_size || f == Func::filter_color || f == Func::filter_material ||
           f == Func::filter_shape;
}

constexpr std::optional<AttrValue::Dim> attr_dim(Func f) {
    switch (f) {
        case Func::filter_size:
        case Func::query_size:
        case Func::equal_size:
        case Func::same_size: return AttrValue::Dim::size;
        case Func::filter_color:
        case Func::query_color:
        case Func::equal_color:
        case Func::same_color: return AttrValue::Dim::color;
        case Func::filter_material:
        case Func::query_material:
        case Func::equal_material:
        case Func::same_material: return AttrValue::Dim::material;
        case Func::filter_shape:
        case Func::query_shape:
        case Func::equal_shape:
        case Func::same_shape: return AttrValue::Dim::shape;
        default: return std::nullopt;
    }
}

// One node of a functional program, in linearized form. Node ids are list
// positions; inputs always reference strictly smaller ids.
struct FPNode {
    Func fn = Func::scene;
    std::vector<int> inputs;
    std::optional<AttrValue> attr;   // filter value
    std::optional<Direction> dir;    // relate direction

    friend bool operator==(const FPNode&, const FPNode&) = default;
};

struct QuestionProgram {
    std::vector<FPNode> nodes;
    std::optional<std::string> expected_answer;
    std::optional<std::string> question_text;
    int image_index = -1;

    int root() const { return static_cast<int>(nodes.size()) - 1; }
};

class parse_error : public std::runtime_error {
  public:
    explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline Func parse_func_name(std::string name) {
    // Some releases spell parameterized functions "filter[color]" instead of
    // "filter_color"; normalize before lookup.
    const auto lb = name.find('[');
    if (lb != std::string::npos && name.back() == ']')
        name = name.substr(0, lb) + "_" + name.substr(lb + 1, name.size() - lb - 2);
    static const std::map<std::string, Func, std::less<>> table = [] {
        std::map<std::string, Func, std::less<>> t;
        for (int i = 0; i < kNumFuncs; ++i)
            t.emplace(std::string(to_string(static_cast<Func>(i))), static_cast<Func>(i));
        return t;
    }();
    const auto it = table.find(name);
    if (it == table.end()) throw parse_error("unknown function name: " + name);
    return it->second;
}

inline bool is_value_input(ValueKind k) { return k != ValueKind::object_set; }

}  // namespace detail

// Structural validation: topological order, arity, value slots, and value
// kinds for the comparison functions. Throws parse_error on violation.
inline void validate(const QuestionProgram& program) {
    if (program.nodes.empty()) throw parse_error("empty program");
    for (std::size_t id = 0; id < program.nodes.size(); ++id) {
        const FPNode& node = program.nodes[id];
        const std::string where = "node " + std::to_string(id) + " (" +
                                  std::string(to_string(node.fn)) + ")";
        if (static_cast<int>(node.inputs.size()) != arity(node.fn))
            throw parse_error(where + ": expected " + std::to_string(arity(node.fn)) +
                              " inputs, got " + std::to_string(node.inputs.size()));
        for (int in : node.inputs)
            if (in < 0 || in >= static_cast<int>(id))
                throw parse_error(where + ": input " + std::to_string(in) +
                                  " is not an earlier node");
        if (takes_attr_value(node.fn)) {
            if (!node.attr) throw parse_error(where + ": missing attribute value");
            if (node.attr->dim != *attr_dim(node.fn))
                throw parse_error(where + ": attribute value of wrong dimension");
        } else if (node.attr) {
            throw parse_error(where + ": unexpected attribute value");
        }
        if (node.fn == Func::relate) {
            if (!node.dir) throw parse_error(where + ": missing relation direction");
        } else if (node.dir) {
            throw parse_error(where + ": unexpected relation direction");
        }
        // Comparisons consume values of a matching kind; everything else
        // consumes object sets (unique outputs included).
        for (int in : node.inputs) {
            const ValueKind got = result_kind(program.nodes[in].fn);
            switch (node.fn) {
                case Func::equal_integer:
                case Func::less_than:
                case Func::greater_than:
                    if (got != ValueKind::integer)
                        throw parse_error(where + ": input must produce an integer");
                    break;
                case Func::equal_size:
                    if (got != ValueKind::size)
                        throw parse_error(where + ": input must produce a size value");
                    break;
                case Func::equal_color:
                    if (got != ValueKind::color)
                        throw parse_error(where + ": input must produce a color value");
                    break;
                case Func::equal_material:
                    if (got != ValueKind::material)
                        throw parse_error(where + ": input must produce a material value");
                    break;
                case Func::equal_shape:
                    if (got != ValueKind::shape)
                        throw parse_error(where + ": input must produce a shape value");
                    break;
                default:
                    if (detail::is_value_input(got))
                        throw parse_error(where + ": input must produce an object set");
                    break;
            }
        }
    }
}

// Parses one question object from the CLEVR questions schema: a "program"
// list of nodes with "function" (or legacy "type"), "inputs", and
// "value_inputs" (or legacy "side_inputs"). Duplicate scene nodes are merged
// into the first one, as the fact encoding expects a single scene source.
inline QuestionProgram parse_question(const nlohmann::json& q) {
    QuestionProgram program;
    if (q.contains("question") && q.at("question").is_string())
        program.question_text = q.at("question").get<std::string>();
    if (q.contains("answer")) {
        const auto& a = q.at("answer");
        if (a.is_string())
            program.expected_answer = a.get<std::string>();
        else if (a.is_number_integer())
            program.expected_answer = std::to_string(a.get<long long>());
        else if (a.is_boolean())
            program.expected_answer = a.get<bool>() ? "yes" : "no";
    }
    if (q.contains("image_index")) program.image_index = q.at("image_index").get<int>();

    const auto& prog = q.at("program");
    std::vector<int> remap(prog.size(), -1);
    int first_scene = -1;
    for (std::size_t i = 0; i < prog.size(); ++i) {
        const auto& jn = prog.at(i);
        FPNode node;
        const std::string fname = jn.contains("function") ? jn.at("function").get<std::string>()
                                                          : jn.at("type").get<std::string>();
        node.fn = detail::parse_func_name(fname);

        if (node.fn == Func::scene && first_scene >= 0) {
            remap[i] = first_scene;
            continue;
        }

        if (jn.contains("inputs"))
            for (const auto& in : jn.at("inputs")) {
                const int raw = in.get<int>();
                if (raw < 0 || raw >= static_cast<int>(i))
                    throw parse_error("node " + std::to_string(i) +
                                      ": input references a non-earlier node");
                node.inputs.push_back(remap[raw]);
            }

        const char* vkey = jn.contains("value_inputs") ? "value_inputs"
                           : jn.contains("side_inputs") ? "side_inputs"
                                                        : nullptr;
        std::vector<std::string> values;
        if (vkey)
            for (const auto& v : jn.at(vkey)) values.push_back(v.get<std::string>());
        if (takes_attr_value(node.fn)) {
            if (values.size() != 1)
                throw parse_error("node " + std::to_string(i) + ": expected one value input");
            const auto av = parse_attr_value(values[0]);
            if (!av) throw vocabulary_error("unknown attribute value: " + values[0]);
            node.attr = av;
        } else if (node.fn == Func::relate) {
            if (values.size() != 1)
                throw parse_error("node " + std::to_string(i) + ": expected one value input");
            const auto dir = parse_direction(values[0]);
            if (!dir) throw parse_error("unknown relation direction: " + values[0]);
            node.dir = dir;
        } else if (!values.empty()) {
            throw parse_error("node " + std::to_string(i) + ": unexpected value inputs");
        }

        remap[i] = static_cast<int>(program.nodes.size());
        if (node.fn == Func::scene) first_scene = remap[i];
        program.nodes.push_back(std::move(node));
    }
    validate(program);
    return program;
}

// Loads a CLEVR questions file: {"questions": [...]}.
inline std::vector<QuestionProgram> load_questions(const nlohmann::json& root) {
    std::vector<QuestionProgram> out;
    const auto& questions = root.at("questions");
    out.reserve(questions.size());
    for (const auto& q : questions) out.push_back(parse_question(q));
    return out;
}

inline nlohmann::json question_to_json(const QuestionProgram& program) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& node : program.nodes) {
        nlohmann::json jn{{"function", to_string(node.fn)},
                          {"inputs", node.inputs},
                          {"value_inputs", nlohmann::json::array()}};
        if (node.attr) jn["value_inputs"].push_back(std::string(to_string(*node.attr)));
        if (node.dir) jn["value_inputs"].push_back(std::string(to_string(*node.dir)));
        nodes.push_back(std::move(jn));
    }
    nlohmann::json q{{"program", std::move(nodes)}};
    if (program.expected_answer) q["answer"] = *program.expected_answer;
    if (program.question_text) q["question"] = *program.question_text;
    if (program.image_index >= 0) q["image_index"] = program.image_index;
    return q;
}

}  // namespace vqansr
