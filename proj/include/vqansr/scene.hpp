#pragma once

#include <vector>

#include "vqansr/geometry.hpp"
#include "vqansr/object_class.hpp"

namespace vqansr {

struct SceneObject {
    ObjectClass cls;
    BoundingBox box;

    friend bool operator==(const SceneObject&, const SceneObject&) = default;
};

// Ground-truth scene: what is actually in the image. Serves as oracle input
// for direct interpretation and as the seed for the detector simulator.
struct SceneGraph {
    int image_id = 0;
    std::vector<SceneObject> objects;

    friend bool operator==(const SceneGraph&, const SceneGraph&) = default;
};

}  // namespace vqansr
