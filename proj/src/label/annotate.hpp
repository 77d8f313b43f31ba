#pragma once

#include <cstdint>
#include <vector>

#include "sampler/plan.hpp"
#include "scene/mesh.hpp"

namespace airforge {

// Amodal 2D box for one object instance, clipped to the image rectangle.
struct Annotation {
    int64_t image_id = 0;
    int instance_id = 0;
    int class_id = 0;  // 0 = "uav"
    BBox2D bbox;
    bool truncated = false;  // image border or near plane changed the box
};

struct AnnotateStats {
    int dropped_outside = 0;  // fully outside the frustum
    int dropped_tiny = 0;     // clipped area below the 4 px^2 floor
};

// Projects each placed instance of the model mesh to the tight bbox of its
// near-plane-clipped triangles. Boxes of fully invisible objects are
// dropped silently (counted in stats).
std::vector<Annotation> annotate(const SceneSample &sample, const Camera &camera,
                                 const Mesh &model_mesh, AnnotateStats *stats = nullptr);

// Tight bbox of the mesh under one placement; nullopt when fully outside.
// Building block of annotate, also handy for single meshes in tests.
std::optional<BBox2D> project_mesh_bbox(const Mesh &mesh, const RigidTransform &placement,
                                        const Camera &camera, bool *truncated = nullptr);

}  // namespace airforge
