#pragma once

#include <string>
#include <vector>

#include "vqansr/question.hpp"

namespace vqansr {

// One ground fact of the question encoding, e.g. filter_large(7,6).
// The first argument is the producing node id, the rest are input ids.
struct Fact {
    std::string predicate;
    std::vector<int> args;

    friend bool operator==(const Fact&, const Fact&) = default;
    friend auto operator<=>(const Fact&, const Fact&) = default;
};

inline std::string to_string(const Fact& f) {
    std::string s = f.predicate;
    if (!f.args.empty()) {
        s += '(';
        for (std::size_t i = 0; i < f.args.size(); ++i) {
            if (i) s += ',';
            s += std::to_string(f.args[i]);
        }
        s += ')';
    }
    s += '.';
    return s;
}

namespace detail {

inline std::string fact_predicate(const FPNode& node) {
    // Filter and relate facts fold their parameter into the predicate name:
    // filter_color(yellow) at node 4 becomes filter_yellow(4, input).
    if (takes_attr_value(node.fn)) return "filter_" + std::string(to_string(*node.attr));
    if (node.fn == Func::relate) return "relate_" + std::string(to_string(*node.dir));
    return std::string(to_string(node.fn));
}

}  // namespace detail

// Linearizes a program into its fact representation: end(root) first, then
// one fact per node in descending id order.
inline std::vector<Fact> to_facts(const QuestionProgram& program) {
    std::vector<Fact> out;
    out.reserve(program.nodes.size() + 1);
    out.push_back({"end", {program.root()}});
    for (int id = program.root(); id >= 0; --id) {
        const FPNode& node = program.nodes[id];
        Fact f{detail::fact_predicate(node), {id}};
        f.args.insert(f.args.end(), node.inputs.begin(), node.inputs.end());
        out.push_back(std::move(f));
    }
    return out;
}

}  // namespace vqansr
