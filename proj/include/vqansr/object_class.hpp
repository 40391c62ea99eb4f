#pragma once

#include <compare>
#include <string>

#include "vqansr/attributes.hpp"

namespace vqansr {

inline constexpr int kNumClasses = kNumSizes * kNumColors * kNumMaterials * kNumShapes;  // 96

// One of the 96 CLEVR object classes: a full attribute assignment.
struct ObjectClass {
    Size size;
    Shape shape;
    Material material;
    Color color;

    friend auto operator<=>(const ObjectClass&, const ObjectClass&) = default;
};

// Fixed index layout: size is the outermost digit, shape the innermost.
// class_index and class_from_index are exact inverses over [0, 96).
constexpr int class_index(const ObjectClass& c) {
    return ((static_cast<int>(c.size) * kNumColors + static_cast<int>(c.color)) * kNumMaterials +
            static_cast<int>(c.material)) *
               kNumShapes +
           static_cast<int>(c.shape);
}

constexpr ObjectClass class_from_index(int index) {
    if (index < 0 || index >= kNumClasses)
        throw std::out_of_range("object class index out of range");
    const int shape = index % kNumShapes;
    index /= kNumShapes;
    const int material = index % kNumMaterials;
    index /= kNumMaterials;
    const int color = index % kNumColors;
    index /= kNumColors;
    return ObjectClass{static_cast<Size>(index), static_cast<Shape>(shape),
                       static_cast<Material>(material), static_cast<Color>(color)};
}

inline ObjectClass make_class(std::string_view size, std::string_view color,
                              std::string_view material, std::string_view shape) {
    return ObjectClass{parse_size_or_throw(size), parse_shape_or_throw(shape),
                       parse_material_or_throw(material), parse_color_or_throw(color)};
}

// Number of attribute positions on which two classes disagree, in [0, 4].
constexpr int attribute_distance(const ObjectClass& a, const ObjectClass& b) {
    return (a.size != b.size) + (a.shape != b.shape) + (a.material != b.material) +
           (a.color != b.color);
}

inline std::uint8_t attribute_of(const ObjectClass& c, AttrValue::Dim dim) {
    switch (dim) {
        case AttrValue::Dim::size: return static_cast<std::uint8_t>(c.size);
        case AttrValue::Dim::color: return static_cast<std::uint8_t>(c.color);
        case AttrValue::Dim::material: return static_cast<std::uint8_t>(c.material);
        case AttrValue::Dim::shape: return static_cast<std::uint8_t>(c.shape);
    }
    return 0;
}

inline std::string to_string(const ObjectClass& c) {
    std::string s;
    s += to_string(c.size);
    s += ' ';
    s += to_string(c.color);
    s += ' ';
    s += to_string(c.material);
    s += ' ';
    s += to_string(c.shape);
    return s;
}

}  // namespace vqansr
