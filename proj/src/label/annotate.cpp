#include "label/annotate.hpp"

#include <algorithm>
#include <cmath>

namespace airforge {

namespace {

constexpr double kNearPlane = 1e-4;     // camera-space depth of the clip plane
constexpr double kMinBoxArea = 4.0;     // px^2; slivers below this are dropped

// Projection of a camera-space point with depth > kNearPlane.
Vec2 pixel_from_camera_space(const Camera &camera, const Vec3 &q) {
    double depth = -q.z;
    double ndc_x = q.x / (depth * camera.tan_half_hfov());
    double ndc_y = q.y / (depth * camera.tan_half_vfov());
    return {(ndc_x * 0.5 + 0.5) * camera.width, (0.5 - ndc_y * 0.5) * camera.height};
}

// Clips a camera-space triangle against depth > kNearPlane and appends the
// projected vertices of the surviving polygon.
void clip_and_project(const Camera &camera, const Vec3 tri[3], std::vector<Vec2> &out,
                      bool *clipped) {
    auto inside = [](const Vec3 &q) { return -q.z > kNearPlane; };
    Vec3 poly[4];
    int n = 0;
    for (int i = 0; i < 3; ++i) {
        const Vec3 &a = tri[i];
        const Vec3 &b = tri[(i + 1) % 3];
        bool ia = inside(a), ib = inside(b);
        if (ia) poly[n++] = a;
        if (ia != ib) {
            double t = (-kNearPlane - a.z) / (b.z - a.z);  // depth interpolation
            poly[n++] = a + (b - a) * t;
            if (clipped) *clipped = true;
        }
    }
    for (int i = 0; i < n; ++i) out.push_back(pixel_from_camera_space(camera, poly[i]));
}

}  // namespace

std::optional<BBox2D> project_mesh_bbox(const Mesh &mesh, const RigidTransform &placement,
                                        const Camera &camera, bool *truncated) {
    RigidTransform world_to_cam = camera.pose.inverse() * placement;
    bool near_clipped = false;
    std::vector<Vec2> points;
    points.reserve(mesh.vertex_count());
    for (const auto &tri : mesh.triangles) {
        Vec3 q[3] = {world_to_cam.apply_point(mesh.positions[tri[0]]),
                     world_to_cam.apply_point(mesh.positions[tri[1]]),
                     world_to_cam.apply_point(mesh.positions[tri[2]])};
        clip_and_project(camera, q, points, &near_clipped);
    }
    if (points.empty()) return std::nullopt;

    BBox2D raw = bbox_of_points(points);
    BBox2D box{std::clamp(raw.x_min, 0.0, double(camera.width)),
               std::clamp(raw.y_min, 0.0, double(camera.height)),
               std::clamp(raw.x_max, 0.0, double(camera.width)),
               std::clamp(raw.y_max, 0.0, double(camera.height))};
    if (box.area() <= 0.0) return std::nullopt;
    if (truncated)
        *truncated = near_clipped || box.x_min != raw.x_min || box.y_min != raw.y_min ||
                     box.x_max != raw.x_max || box.y_max != raw.y_max;
    return box;
}

std::vector<Annotation> annotate(const SceneSample &sample, const Camera &camera,
                                 const Mesh &model_mesh, AnnotateStats *stats) {
    std::vector<Annotation> annotations;
    for (size_t i = 0; i < sample.placements.size(); ++i) {
        bool truncated = false;
        auto box = project_mesh_bbox(model_mesh, sample.placements[i], camera, &truncated);
        if (!box) {
            if (stats) stats->dropped_outside++;
            continue;
        }
        if (box->area() < kMinBoxArea) {
            if (stats) stats->dropped_tiny++;
            continue;
        }
        Annotation ann;
        ann.image_id = sample.image_id;
        ann.instance_id = int(i);
        ann.class_id = 0;
        ann.bbox = *box;
        ann.truncated = truncated;
        annotations.push_back(ann);
    }
    return annotations;
}

}  // namespace airforge
