#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/math.hpp"

namespace airforge {

// Indexed triangle mesh with unified per-vertex attributes. Immutable by
// convention once built; scene code shares meshes across threads freely.
struct Mesh {
    std::vector<Vec3> positions;
    std::vector<Vec3> normals;  // unit length, one per vertex
    std::vector<Vec2> uvs;      // one per vertex, in [0,1]^2
    std::vector<std::array<uint32_t, 3>> triangles;
    int material_slot = 0;

    size_t vertex_count() const { return positions.size(); }
    size_t triangle_count() const { return triangles.size(); }

    Aabb bounds() const {
        Aabb box;
        for (const Vec3 &p : positions) box.grow(p);
        return box;
    }

    // Radius of the bounding sphere around the AABB center.
    double bounding_radius() const;

    // Checks index validity, normal lengths and non-emptiness; throws on violation.
    void validate() const;

    // Area-weighted vertex normals recomputed from the faces.
    void recompute_normals();
};

// Rotation + translation; maps local/camera coordinates into world coordinates.
struct RigidTransform {
    Mat3 rotation;
    Vec3 translation;

    static RigidTransform identity() { return {}; }

    Vec3 apply_point(const Vec3 &p) const { return rotation * p + translation; }
    Vec3 apply_vector(const Vec3 &v) const { return rotation * v; }

    RigidTransform inverse() const {
        Mat3 rt = rotation.transposed();
        return {rt, -(rt * translation)};
    }

    RigidTransform operator*(const RigidTransform &o) const {
        return {rotation * o.rotation, rotation * o.translation + translation};
    }

    // True when the rotation is orthonormal with det +1 (1e-9 tolerance).
    bool is_valid() const;
};

Mesh transformed(const Mesh &mesh, const RigidTransform &xf);

// Builds the world-from-camera pose whose -Z axis points from eye toward
// target. Throws std::invalid_argument when eye == target or up is parallel
// to the view direction.
RigidTransform look_at(const Vec3 &eye, const Vec3 &target, const Vec3 &up);

// Pinhole camera. World space is right-handed Y-up; the camera looks along
// its local -Z. Continuous pixel coordinates put the center of pixel (i,j)
// at (i+0.5, j+0.5), so the image spans [0,width]x[0,height].
struct Camera {
    RigidTransform pose;  // world-from-camera
    double hfov_deg = 60.0;
    int width = 608;
    int height = 608;

    void validate() const;

    double tan_half_hfov() const;
    double tan_half_vfov() const;
};

struct ProjectedPoint {
    Vec2 pixel;    // continuous pixel coordinates
    double depth;  // distance along the camera forward axis, > 0
};

// Empty optional marks a point at or behind the camera plane (depth <= 1e-6).
std::optional<ProjectedPoint> project_point(const Camera &camera, const Vec3 &p);

// Camera-space ray through a continuous image position, returned in world space.
struct Ray {
    Vec3 origin;
    Vec3 dir;  // unit
};

Ray camera_ray(const Camera &camera, double px, double py);

struct BBox2D {
    double x_min = 0.0;
    double y_min = 0.0;
    double x_max = 0.0;
    double y_max = 0.0;

    double width() const { return x_max - x_min; }
    double height() const { return y_max - y_min; }
    double area() const { return width() * height(); }
    bool valid() const { return x_min <= x_max && y_min <= y_max; }
};

BBox2D bbox_of_points(const std::vector<Vec2> &points);

}  // namespace airforge
