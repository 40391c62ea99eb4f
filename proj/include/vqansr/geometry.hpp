#pragma once

#include <algorithm>
#include <stdexcept>

namespace vqansr {

// Axis-aligned pixel box, top-left (x1,y1) to bottom-right (x2,y2).
// Image y grows downward, so larger y means closer to the camera.
struct BoundingBox {
    double x1 = 0.0;
    double y1 = 0.0;
    double x2 = 0.0;
    double y2 = 0.0;

    friend bool operator==(const BoundingBox&, const BoundingBox&) = default;

    bool valid() const { return x1 < x2 && y1 < y2; }
    double width() const { return x2 - x1; }
    double height() const { return y2 - y1; }
    double area() const { return width() * height(); }
};

inline BoundingBox make_box(double x1, double y1, double x2, double y2) {
    BoundingBox b{x1, y1, x2, y2};
    if (!b.valid()) throw std::invalid_argument("degenerate bounding box");
    return b;
}

inline double iou(const BoundingBox& a, const BoundingBox& b) {
    const double ix = std::max(0.0, std::min(a.x2, b.x2) - std::max(a.x1, b.x1));
    const double iy = std::max(0.0, std::min(a.y2, b.y2) - std::max(a.y1, b.y1));
    const double inter = ix * iy;
    const double uni = a.area() + b.area() - inter;
    return uni > 0.0 ? inter / uni : 0.0;
}

}  // namespace vqansr
