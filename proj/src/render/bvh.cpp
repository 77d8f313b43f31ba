#include "render/bvh.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace airforge {

std::optional<TriangleHit> intersect_triangle(const SceneTriangle &tri, const Vec3 &origin,
                                              const Vec3 &dir, double t_max) {
    constexpr double kTMin = 1e-9;
    Vec3 e1 = tri.p1 - tri.p0;
    Vec3 e2 = tri.p2 - tri.p0;
    Vec3 pvec = cross(dir, e2);
    double det = dot(e1, pvec);
    if (std::abs(det) < 1e-14) return std::nullopt;
    double inv_det = 1.0 / det;
    Vec3 tvec = origin - tri.p0;
    double u = dot(tvec, pvec) * inv_det;
    if (u < 0.0 || u > 1.0) return std::nullopt;
    Vec3 qvec = cross(tvec, e1);
    double v = dot(dir, qvec) * inv_det;
    if (v < 0.0 || u + v > 1.0) return std::nullopt;
    double t = dot(e2, qvec) * inv_det;
    if (t < kTMin || t > t_max) return std::nullopt;
    return TriangleHit{t, u, v, 0};
}

namespace {

constexpr int kLeafSize = 4;
constexpr int kMaxDepth = 64;
constexpr int kNumBins = 12;

bool slab_hit(const Aabb &box, const Vec3 &origin, const Vec3 &inv_dir, double t_max) {
    double t0 = (box.lo.x - origin.x) * inv_dir.x;
    double t1 = (box.hi.x - origin.x) * inv_dir.x;
    double tmin = std::min(t0, t1), tmax = std::max(t0, t1);
    t0 = (box.lo.y - origin.y) * inv_dir.y;
    t1 = (box.hi.y - origin.y) * inv_dir.y;
    tmin = std::max(tmin, std::min(t0, t1));
    tmax = std::min(tmax, std::max(t0, t1));
    t0 = (box.lo.z - origin.z) * inv_dir.z;
    t1 = (box.hi.z - origin.z) * inv_dir.z;
    tmin = std::max(tmin, std::min(t0, t1));
    tmax = std::min(tmax, std::max(t0, t1));
    return tmin <= tmax && tmax >= 0.0 && tmin <= t_max;
}

}  // namespace

uint32_t Bvh::build_range(std::vector<uint32_t> &order, std::vector<Aabb> &boxes,
                          std::vector<Vec3> &centroids, uint32_t begin, uint32_t end, int depth) {
    uint32_t node_index = uint32_t(nodes_.size());
    nodes_.emplace_back();

    Aabb bounds, centroid_bounds;
    for (uint32_t i = begin; i < end; ++i) {
        bounds.grow(boxes[order[i]]);
        centroid_bounds.grow(centroids[order[i]]);
    }
    nodes_[node_index].box = bounds;

    uint32_t count = end - begin;
    Vec3 extent = centroid_bounds.extent();
    int axis = extent.x > extent.y ? (extent.x > extent.z ? 0 : 2) : (extent.y > extent.z ? 1 : 2);
    double axis_extent = extent[axis];

    if (count <= kLeafSize || depth >= kMaxDepth || axis_extent < 1e-12) {
        nodes_[node_index].first = begin;
        nodes_[node_index].count = count;
        return node_index;
    }

    // Binned SAH over the centroid range on the widest axis.
    double lo = centroid_bounds.lo[axis];
    double inv = double(kNumBins) / axis_extent;
    struct Bin {
        Aabb box;
        uint32_t count = 0;
    } bins[kNumBins];
    for (uint32_t i = begin; i < end; ++i) {
        int b = std::min(kNumBins - 1, int((centroids[order[i]][axis] - lo) * inv));
        bins[b].box.grow(boxes[order[i]]);
        bins[b].count++;
    }

    double best_cost = 1e300;
    int best_split = -1;
    for (int split = 1; split < kNumBins; ++split) {
        Aabb left_box, right_box;
        uint32_t left_count = 0, right_count = 0;
        for (int b = 0; b < split; ++b) {
            left_box.grow(bins[b].box);
            left_count += bins[b].count;
        }
        for (int b = split; b < kNumBins; ++b) {
            right_box.grow(bins[b].box);
            right_count += bins[b].count;
        }
        if (left_count == 0 || right_count == 0) continue;
        double cost =
            left_box.surface_area() * left_count + right_box.surface_area() * right_count;
        if (cost < best_cost) {
            best_cost = cost;
            best_split = split;
        }
    }

    uint32_t mid;
    if (best_split < 0) {
        // Degenerate distribution: median split keeps the tree balanced.
        mid = begin + count / 2;
        std::nth_element(order.begin() + begin, order.begin() + mid, order.begin() + end,
                         [&](uint32_t a, uint32_t b) {
                             return centroids[a][axis] < centroids[b][axis];
                         });
    } else {
        auto it = std::partition(order.begin() + begin, order.begin() + end, [&](uint32_t i) {
            int b = std::min(kNumBins - 1, int((centroids[i][axis] - lo) * inv));
            return b < best_split;
        });
        mid = uint32_t(it - order.begin());
        if (mid == begin || mid == end) mid = begin + count / 2;
    }

    nodes_[node_index].axis = uint8_t(axis);
    nodes_[node_index].count = 0;
    build_range(order, boxes, centroids, begin, mid, depth + 1);
    uint32_t right = build_range(order, boxes, centroids, mid, end, depth + 1);
    nodes_[node_index].first = right;
    return node_index;
}

Bvh Bvh::build(std::vector<SceneTriangle> triangles) {
    if (triangles.empty()) throw std::invalid_argument("Bvh::build: empty scene");
    Bvh bvh;

    uint32_t n = uint32_t(triangles.size());
    std::vector<uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::vector<Aabb> boxes(n);
    std::vector<Vec3> centroids(n);
    for (uint32_t i = 0; i < n; ++i) {
        boxes[i] = triangles[i].bounds();
        centroids[i] = boxes[i].center();
    }

    bvh.nodes_.reserve(size_t(2) * n);
    bvh.build_range(order, boxes, centroids, 0, n, 0);

    bvh.triangles_.reserve(n);
    for (uint32_t i = 0; i < n; ++i) bvh.triangles_.push_back(triangles[order[i]]);
    return bvh;
}

std::optional<TriangleHit> Bvh::intersect(const Vec3 &origin, const Vec3 &dir,
                                          double t_max) const {
    Vec3 inv_dir{1.0 / dir.x, 1.0 / dir.y, 1.0 / dir.z};
    std::optional<TriangleHit> best;
    double closest = t_max;

    uint32_t stack[kMaxDepth + 2];
    int top = 0;
    stack[top++] = 0;
    while (top > 0) {
        const Node &node = nodes_[stack[--top]];
        if (!slab_hit(node.box, origin, inv_dir, closest)) continue;
        if (node.count > 0) {
            for (uint32_t i = node.first; i < node.first + node.count; ++i) {
                if (auto hit = intersect_triangle(triangles_[i], origin, dir, closest)) {
                    hit->triangle = i;
                    closest = hit->t;
                    best = hit;
                }
            }
        } else {
            // Near child first along the split axis.
            uint32_t left = uint32_t(&node - nodes_.data()) + 1;
            uint32_t right = node.first;
            if (dir[node.axis] < 0.0) std::swap(left, right);
            stack[top++] = right;
            stack[top++] = left;
        }
    }
    return best;
}

bool Bvh::occluded(const Vec3 &origin, const Vec3 &dir, double t_max) const {
    Vec3 inv_dir{1.0 / dir.x, 1.0 / dir.y, 1.0 / dir.z};
    uint32_t stack[kMaxDepth + 2];
    int top = 0;
    stack[top++] = 0;
    while (top > 0) {
        const Node &node = nodes_[stack[--top]];
        if (!slab_hit(node.box, origin, inv_dir, t_max)) continue;
        if (node.count > 0) {
            for (uint32_t i = node.first; i < node.first + node.count; ++i)
                if (intersect_triangle(triangles_[i], origin, dir, t_max)) return true;
        } else {
            stack[top++] = node.first;
            stack[top++] = uint32_t(&node - nodes_.data()) + 1;
        }
    }
    return false;
}

}  // namespace airforge
