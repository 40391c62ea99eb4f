#pragma once

#include <span>
#include <string>

#include "vqansr/confidence.hpp"
#include "vqansr/facts.hpp"
#include "vqansr/question.hpp"

namespace vqansr {

namespace detail {

// ASP terms are integers; pixel coordinates are scaled by 100 and truncated.
// Only the relative order of corners matters to the spatial rules, which the
// scaling preserves down to 0.01 px.
inline long long coord_term(double v) { return static_cast<long long>(v * 100.0); }

inline std::string obj_atom(int row, const Candidate& c, const BoundingBox& box) {
    std::string s = "obj(O,";
    s += std::to_string(row);
    s += ',';
    s += to_string(c.cls.size);
    s += ',';
    s += to_string(c.cls.shape);
    s += ',';
    s += to_string(c.cls.material);
    s += ',';
    s += to_string(c.cls.color);
    s += ',';
    s += std::to_string(coord_term(box.x1));
    s += ',';
    s += std::to_string(coord_term(box.y1));
    s += ',';
    s += std::to_string(coord_term(box.x2));
    s += ',';
    s += std::to_string(coord_term(box.y2));
    s += ')';
    return s;
}

}  // namespace detail

// The fixed rule set shared by every emitted program: one rule per CLEVR
// basic function over obj/10 atoms, answer extraction, and the constraint
// requiring that an answer is derived. union/intersect facts are bridged
// onto the or/and rule forms, so both predicate spellings are accepted.
inline const std::string& rule_library() {
    static const std::string text = R"(% filter rules
obj(T,I,small,SH,MA,CO,X1,Y1,X2,Y2) :- filter_small(T,T1), obj(T1,I,small,SH,MA,CO,X1,Y1,X2,Y2).
obj(T,I,large,SH,MA,CO,X1,Y1,X2,Y2) :- filter_large(T,T1), obj(T1,I,large,SH,MA,CO,X1,Y1,X2,Y2).
obj(T,I,SZ,SH,MA,brown,X1,Y1,X2,Y2) :- filter_brown(T,T1), obj(T1,I,SZ,SH,MA,brown,X1,Y1,X2,Y2).
obj(T,I,SZ,SH,MA,blue,X1,Y1,X2,Y2) :- filter_blue(T,T1), obj(T1,I,SZ,SH,MA,blue,X1,Y1,X2,Y2).
obj(T,I,SZ,SH,MA,cyan,X1,Y1,X2,Y2) :- filter_cyan(T,T1), obj(T1,I,SZ,SH,MA,cyan,X1,Y1,X2,Y2).
obj(T,I,SZ,SH,MA,gray,X1,Y1,X2,Y2) :- filter_gray(T,T1), obj(T1,I,SZ,SH,MA,gray,X1,Y1,X2,Y2).
obj(T,I,SZ,SH,MA,green,X1,Y1,X2,Y2) :- filter_green(T,T1), obj(T1,I,SZ,SH,MA,green,X1,Y1,X2,Y2).
obj(T,I,SZ,SH,MA,purple,X1,Y1,X2,Y2) :- filter_purple(T,T1), obj(T1,I,SZ,SH,MA,purple,X1,Y1,X2,Y2).
obj(T,I,SZ,SH,MA,red,X1,Y1,X2,Y2) :- filter_red(T,T1), obj(T1,I,SZ,SH,MA,red,X1,Y1,X2,Y2).
obj(T,I,SZ,SH,MA,yellow,X1,Y1,X2,Y2) :- filter_yellow(T,T1), obj(T1,I,SZ,SH,MA,yellow,X1,Y1,X2,Y2).
obj(T,I,SZ,SH,metal,CO,X1,Y1,X2,Y2) :- filter_metal(T,T1), obj(T1,I,SZ,SH,metal,CO,X1,Y1,X2,Y2).
obj(T,I,SZ,SH,rubber,CO,X1,Y1,X2,Y2) :- filter_rubber(T,T1), obj(T1,I,SZ,SH,rubber,CO,X1,Y1,X2,Y2).
obj(T,I,SZ,cube,MA,CO,X1,Y1,X2,Y2) :- filter_cube(T,T1), obj(T1,I,SZ,cube,MA,CO,X1,Y1,X2,Y2).
obj(T,I,SZ,cylinder,MA,CO,X1,Y1,X2,Y2) :- filter_cylinder(T,T1), obj(T1,I,SZ,cylinder,MA,CO,X1,Y1,X2,Y2).
obj(T,I,SZ,sphere,MA,CO,X1,Y1,X2,Y2) :- filter_sphere(T,T1), obj(T1,I,SZ,sphere,MA,CO,X1,Y1,X2,Y2).
% set operations
or(T,T1,T2) :- union(T,T1,T2).
and(T,T1,T2) :- intersect(T,T1,T2).
obj(T,I,SZ,SH,MA,CO,X1,Y1,X2,Y2) :- or(T,T1,T2), obj(T1,I,SZ,SH,MA,CO,X1,Y1,X2,Y2).
obj(T,I,SZ,SH,MA,CO,X1,Y1,X2,Y2) :- or(T,T1,T2), obj(T2,I,SZ,SH,MA,CO,X1,Y1,X2,Y2).
obj(T,I,SZ,SH,MA,CO,X1,Y1,X2,Y2) :- and(T,T1,T2), obj(T1,I,SZ,SH,MA,CO,X1,Y1,X2,Y2), obj(T2,I,SZ,SH,MA,CO,X1,Y1,X2,Y2).
% reference nodes require exactly one input object; interpretations where a
% unique/query/relate/same reference is empty or ambiguous are eliminated
nonempty(T) :- obj(T,_,_,_,_,_,_,_,_,_).
multi(T) :- obj(T,I,_,_,_,_,_,_,_,_), obj(T,I2,_,_,_,_,_,_,_,_), I != I2.
refnode(T1) :- unique(T,T1).
refnode(T1) :- query_size(T,T1).
refnode(T1) :- query_color(T,T1).
refnode(T1) :- query_material(T,T1).
refnode(T1) :- query_shape(T,T1).
refnode(T1) :- relate_left(T,T1).
refnode(T1) :- relate_right(T,T1).
refnode(T1) :- relate_front(T,T1).
refnode(T1) :- relate_behind(T,T1).
refnode(T1) :- same_size(T,T1).
refnode(T1) :- same_color(T,T1).
refnode(T1) :- same_material(T,T1).
refnode(T1) :- same_shape(T,T1).
:- refnode(T), not nonempty(T).
:- refnode(T), multi(T).
obj(T,I,SZ,SH,MA,CO,X1,Y1,X2,Y2) :- unique(T,T1), obj(T1,I,SZ,SH,MA,CO,X1,Y1,X2,Y2).
% spatial relations: scene objects in the given relation to the reference
obj(T,I,SZ,SH,MA,CO,X1,Y1,X2,Y2) :- relate_left(T,T1), obj(T1,IR,_,_,_,_,RX1,_,_,_), scene(S), obj(S,I,SZ,SH,MA,CO,X1,Y1,X2,Y2), I != IR, X1 < RX1.
obj(T,I,SZ,SH,MA,CO,X1,Y1,X2,Y2) :- relate_right(T,T1), obj(T1,IR,_,_,_,_,RX1,_,_,_), scene(S), obj(S,I,SZ,SH,MA,CO,X1,Y1,X2,Y2), I != IR, X1 > RX1.
obj(T,I,SZ,SH,MA,CO,X1,Y1,X2,Y2) :- relate_front(T,T1), obj(T1,IR,_,_,_,_,_,_,_,RY2), scene(S), obj(S,I,SZ,SH,MA,CO,X1,Y1,X2,Y2), I != IR, Y2 > RY2.
obj(T,I,SZ,SH,MA,CO,X1,Y1,X2,Y2) :- relate_behind(T,T1), obj(T1,IR,_,_,_,_,_,_,_,RY2), scene(S), obj(S,I,SZ,SH,MA,CO,X1,Y1,X2,Y2), I != IR, Y2 < RY2.
% same-attribute relations: scene objects agreeing with the reference
obj(T,I,SZ,SH,MA,CO,X1,Y1,X2,Y2) :- same_size(T,T1), obj(T1,IR,SZ,_,_,_,_,_,_,_), scene(S), obj(S,I,SZ,SH,MA,CO,X1,Y1,X2,Y2), I != IR.
obj(T,I,SZ,SH,MA,CO,X1,Y1,X2,Y2) :- same_color(T,T1), obj(T1,IR,_,_,_,CO,_,_,_,_), scene(S), obj(S,I,SZ,SH,MA,CO,X1,Y1,X2,Y2), I != IR.
obj(T,I,SZ,SH,MA,CO,X1,Y1,X2,Y2) :- same_material(T,T1), obj(T1,IR,_,_,MA,_,_,_,_,_), scene(S), obj(S,I,SZ,SH,MA,CO,X1,Y1,X2,Y2), I != IR.
obj(T,I,SZ,SH,MA,CO,X1,Y1,X2,Y2) :- same_shape(T,T1), obj(T1,IR,_,SH,_,_,_,_,_,_), scene(S), obj(S,I,SZ,SH,MA,CO,X1,Y1,X2,Y2), I != IR.
% counting and existence
int(T,V) :- count(T,T1), V = #count{ I : obj(T1,I,_,_,_,_,_,_,_,_) }.
bool(T,true) :- exist(T,T1), obj(T1,_,_,_,_,_,_,_,_,_).
bool(T,false) :- exist(T,T1), not bool(T,true).
% attribute queries
size(T,V) :- query_size(T,T1), obj(T1,_,V,_,_,_,_,_,_,_).
color(T,V) :- query_color(T,T1), obj(T1,_,_,_,_,V,_,_,_,_).
material(T,V) :- query_material(T,T1), obj(T1,_,_,_,V,_,_,_,_,_).
shape(T,V) :- query_shape(T,T1), obj(T1,_,_,V,_,_,_,_,_,_).
% integer comparisons
bool(T,true) :- equal_integer(T,T1,T2), int(T1,V), int(T2,V).
bool(T,false) :- equal_integer(T,T1,T2), not bool(T,true).
bool(T,true) :- less_than(T,T1,T2), int(T1,V1), int(T2,V2), V1 < V2.
bool(T,false) :- less_than(T,T1,T2), not bool(T,true).
bool(T,true) :- greater_than(T,T1,T2), int(T1,V1), int(T2,V2), V1 > V2.
bool(T,false) :- greater_than(T,T1,T2), not bool(T,true).
% attribute comparisons
bool(T,true) :- equal_size(T,T1,T2), size(T1,V), size(T2,V).
bool(T,false) :- equal_size(T,T1,T2), not bool(T,true).
bool(T,true) :- equal_color(T,T1,T2), color(T1,V), color(T2,V).
bool(T,false) :- equal_color(T,T1,T2), not bool(T,true).
bool(T,true) :- equal_material(T,T1,T2), material(T1,V), material(T2,V).
bool(T,false) :- equal_material(T,T1,T2), not bool(T,true).
bool(T,true) :- equal_shape(T,T1,T2), shape(T1,V), shape(T2,V).
bool(T,false) :- equal_shape(T,T1,T2), not bool(T,true).
% answer extraction
ans(V) :- end(T), size(T,V).
ans(V) :- end(T), color(T,V).
ans(V) :- end(T), material(T,V).
ans(V) :- end(T), shape(T,V).
ans(V) :- end(T), bool(T,V).
ans(V) :- end(T), int(T,V).
has_answer :- ans(V).
:- not has_answer.
#show ans/1.
)";
    return text;
}

// Emits a self-contained ASP program for one question over one thresholded
// scene interpretation: question facts, a cardinality-1 choice rule per
// detection row, a weak constraint per candidate weighting it by
// plausibility, and the rule library. Byte-deterministic.
inline std::string emit_asp(const QuestionProgram& program,
                            std::span<const CandidateSet> sets) {
    std::string out;
    out += "% question program\n";
    for (const Fact& f : to_facts(program)) {
        out += to_string(f);
        out += '\n';
    }
    out += "\n% scene interpretation\n";
    for (const auto& set : sets) {
        out += "1 { ";
        for (std::size_t i = 0; i < set.candidates.size(); ++i) {
            if (i) out += " ; ";
            out += detail::obj_atom(set.row_index, set.candidates[i], set.box);
        }
        out += " } 1 :- scene(O).\n";
    }
    for (const auto& set : sets)
        for (const auto& c : set.candidates) {
            out += ":~ ";
            out += detail::obj_atom(set.row_index, c, set.box);
            out += ". [";
            out += std::to_string(c.weight);
            out += "@1,";
            out += std::to_string(set.row_index);
            out += "]\n";
        }
    out += "\n% rule library\n";
    out += rule_library();
    return out;
}

}  // namespace vqansr
