#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "core/math.hpp"
#include "scene/mesh.hpp"

namespace airforge {

// World-space triangle with interpolation attributes, flattened out of a
// placed mesh instance.
struct SceneTriangle {
    Vec3 p0, p1, p2;
    Vec3 n0, n1, n2;
    Vec2 uv0, uv1, uv2;
    int32_t instance_id = 0;
    int32_t material_id = 0;

    Aabb bounds() const {
        Aabb b;
        b.grow(p0);
        b.grow(p1);
        b.grow(p2);
        return b;
    }
};

struct TriangleHit {
    double t = 0.0;
    double u = 0.0, v = 0.0;  // barycentrics of p1, p2
    uint32_t triangle = 0;
};

// Binned-SAH bounding volume hierarchy with median-split fallback. Every
// input triangle lands in exactly one leaf; depth is capped at 64.
class Bvh {
public:
    static Bvh build(std::vector<SceneTriangle> triangles);

    std::optional<TriangleHit> intersect(const Vec3 &origin, const Vec3 &dir,
                                         double t_max = 1e300) const;
    bool occluded(const Vec3 &origin, const Vec3 &dir, double t_max) const;

    const std::vector<SceneTriangle> &triangles() const { return triangles_; }

    struct Node {
        Aabb box;
        uint32_t first = 0;  // leaf: first triangle; inner: right child index
        uint32_t count = 0;  // leaf when > 0
        uint8_t axis = 0;
    };
    const std::vector<Node> &nodes() const { return nodes_; }

private:
    std::vector<SceneTriangle> triangles_;  // reordered during the build
    std::vector<Node> nodes_;

    uint32_t build_range(std::vector<uint32_t> &order, std::vector<Aabb> &boxes,
                         std::vector<Vec3> &centroids, uint32_t begin, uint32_t end, int depth);
};

// Ray / triangle test (Moeller-Trumbore); exposed for the brute-force
// oracle used by the render tests.
std::optional<TriangleHit> intersect_triangle(const SceneTriangle &tri, const Vec3 &origin,
                                              const Vec3 &dir, double t_max);

}  // namespace airforge
