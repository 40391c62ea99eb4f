#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace vqansr {

// CLEVR object attributes. Enumerator order is fixed; class indexing and
// fact emission depend on it, so reordering is a breaking change.
enum class Size : std::uint8_t { small, large };
enum class Color : std::uint8_t { brown, blue, cyan, gray, green, purple, red, yellow };
enum class Material : std::uint8_t { metal, rubber };
enum class Shape : std::uint8_t { cube, cylinder, sphere };

inline constexpr int kNumSizes = 2;
inline constexpr int kNumColors = 8;
inline constexpr int kNumMaterials = 2;
inline constexpr int kNumShapes = 3;

constexpr std::string_view to_string(Size v) {
    constexpr std::string_view names[] = {"small", "large"};
    return names[static_cast<int>(v)];
}
constexpr std::string_view to_string(Color v) {
    constexpr std::string_view names[] = {"brown", "blue", "cyan", "gray",
                                          "green", "purple", "red", "yellow"};
    return names[static_cast<int>(v)];
}
constexpr std::string_view to_string(Material v) {
    constexpr std::string_view names[] = {"metal", "rubber"};
    return names[static_cast<int>(v)];
}
constexpr std::string_view to_string(Shape v) {
    constexpr std::string_view names[] = {"cube", "cylinder", "sphere"};
    return names[static_cast<int>(v)];
}

// Source data uses several synonyms per value ("big", "metallic", "block", ...).
// Everything funnels through these parsers so one canonical spelling exists
// downstream.
inline std::optional<Size> parse_size(std::string_view s) {
    if (s == "small" || s == "tiny") return Size::small;
    if (s == "large" || s == "big") return Size::large;
    return std::nullopt;
}
inline std::optional<Color> parse_color(std::string_view s) {
    constexpr std::string_view names[] = {"brown", "blue", "cyan", "gray",
                                          "green", "purple", "red", "yellow"};
    for (int i = 0; i < kNumColors; ++i)
        if (s == names[i]) return static_cast<Color>(i);
    if (s == "grey") return Color::gray;
    return std::nullopt;
}
inline std::optional<Material> parse_material(std::string_view s) {
    if (s == "metal" || s == "metallic" || s == "shiny") return Material::metal;
    if (s == "rubber" || s == "matte") return Material::rubber;
    return std::nullopt;
}
inline std::optional<Shape> parse_shape(std::string_view s) {
    if (s == "cube" || s == "block") return Shape::cube;
    if (s == "cylinder") return Shape::cylinder;
    if (s == "sphere" || s == "ball") return Shape::sphere;
    return std::nullopt;
}

// A value in one of the four attribute dimensions, used where code has to be
// generic over the dimension (filter nodes, query results, ...).
struct AttrValue {
    enum class Dim : std::uint8_t { size, color, material, shape };
    Dim dim;
    std::uint8_t value;

    static AttrValue of(Size v) { return {Dim::size, static_cast<std::uint8_t>(v)}; }
    static AttrValue of(Color v) { return {Dim::color, static_cast<std::uint8_t>(v)}; }
    static AttrValue of(Material v) { return {Dim::material, static_cast<std::uint8_t>(v)}; }
    static AttrValue of(Shape v) { return {Dim::shape, static_cast<std::uint8_t>(v)}; }

    Size as_size() const { return static_cast<Size>(value); }
    Color as_color() const { return static_cast<Color>(value); }
    Material as_material() const { return static_cast<Material>(value); }
    Shape as_shape() const { return static_cast<Shape>(value); }

    friend bool operator==(const AttrValue&, const AttrValue&) = default;
};

inline std::string_view to_string(const AttrValue& v) {
    switch (v.dim) {
        case AttrValue::Dim::size: return to_string(v.as_size());
        case AttrValue::Dim::color: return to_string(v.as_color());
        case AttrValue::Dim::material: return to_string(v.as_material());
        case AttrValue::Dim::shape: return to_string(v.as_shape());
    }
    return {};
}

// Parses a value of any dimension; the 15 canonical names are pairwise
// distinct so the dimension is implied by the word.
inline std::optional<AttrValue> parse_attr_value(std::string_view s) {
    if (auto v = parse_size(s)) return AttrValue::of(*v);
    if (auto v = parse_color(s)) return AttrValue::of(*v);
    if (auto v = parse_material(s)) return AttrValue::of(*v);
    if (auto v = parse_shape(s)) return AttrValue::of(*v);
    return std::nullopt;
}

class vocabulary_error : public std::runtime_error {
  public:
    explicit vocabulary_error(const std::string& what) : std::runtime_error(what) {}
};

inline Size parse_size_or_throw(std::string_view s) {
    if (auto v = parse_size(s)) return *v;
    throw vocabulary_error("unknown size value: " + std::string(s));
}
inline Color parse_color_or_throw(std::string_view s) {
    if (auto v = parse_color(s)) return *v;
    throw vocabulary_error("unknown color value: " + std::string(s));
}
inline Material parse_material_or_throw(std::string_view s) {
    if (auto v = parse_material(s)) return *v;
    throw vocabulary_error("unknown material value: " + std::string(s));
}
inline Shape parse_shape_or_throw(std::string_view s) {
    if (auto v = parse_shape(s)) return *v;
    throw vocabulary_error("unknown shape value: " + std::string(s));
}

}  // namespace vqansr
