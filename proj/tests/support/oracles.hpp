#pragma once

// Independent reference implementations the test suites check the engine
// against. Nothing here may call back into the code paths under test: the
// path tracer below walks a flat triangle list with BSDF sampling only (no
// BVH, no next-event estimation), and the AP sweep re-matches from scratch
// at every confidence cutoff.

#include <algorithm>
#include <optional>
#include <set>
#include <vector>

#include "core/rng.hpp"
#include "eval/metrics.hpp"
#include "render/render.hpp"

namespace airforge::test {

// ---- brute-force path tracer -------------------------------------------

struct OracleHit {
    double t;
    Vec3 point, normal;
    Vec2 uv;
    int material;
};

inline std::vector<SceneTriangle> flatten_objects(const std::vector<SceneObject> &objects) {
    std::vector<SceneTriangle> tris;
    for (const SceneObject &obj : objects) {
        for (const auto &t : obj.mesh->triangles) {
            SceneTriangle st;
            st.p0 = obj.transform.apply_point(obj.mesh->positions[t[0]]);
            st.p1 = obj.transform.apply_point(obj.mesh->positions[t[1]]);
            st.p2 = obj.transform.apply_point(obj.mesh->positions[t[2]]);
            st.n0 = obj.transform.apply_vector(obj.mesh->normals[t[0]]);
            st.n1 = obj.transform.apply_vector(obj.mesh->normals[t[1]]);
            st.n2 = obj.transform.apply_vector(obj.mesh->normals[t[2]]);
            st.uv0 = obj.mesh->uvs[t[0]];
            st.uv1 = obj.mesh->uvs[t[1]];
            st.uv2 = obj.mesh->uvs[t[2]];
            st.material_id = obj.material_id;
            st.instance_id = obj.instance_id;
            tris.push_back(st);
        }
    }
    return tris;
}

inline std::optional<OracleHit> oracle_intersect(const std::vector<SceneTriangle> &tris,
                                                 const Vec3 &origin, const Vec3 &dir) {
    std::optional<OracleHit> best;
    double closest = 1e300;
    for (const SceneTriangle &tri : tris) {
        auto hit = intersect_triangle(tri, origin, dir, closest);
        if (!hit) continue;
        closest = hit->t;
        double u = hit->u, v = hit->v, w = 1 - u - v;
        OracleHit oh;
        oh.t = hit->t;
        oh.point = origin + dir * hit->t;
        oh.normal = normalize(tri.n0 * w + tri.n1 * u + tri.n2 * v);
        oh.uv = {tri.uv0.x * w + tri.uv1.x * u + tri.uv2.x * v,
                 tri.uv0.y * w + tri.uv1.y * u + tri.uv2.y * v};
        oh.material = tri.material_id;
        best = oh;
    }
    return best;
}

// Same depth-truncated transport as the renderer: misses shade from the
// environment at any depth, a hit with no scatters left contributes zero.
inline Vec3 oracle_trace(const std::vector<SceneTriangle> &tris, const TextureMixture &mats,
                         const EnvMap &env, Vec3 origin, Vec3 dir, int scatters_left, Rng &rng) {
    auto hit = oracle_intersect(tris, origin, dir);
    if (!hit) return env_lookup(env, dir);
    if (scatters_left == 0) return {};
    const MaterialSpec &mat = mats.entries[size_t(hit->material)];
    Vec3 wo = -dir;
    Vec3 n = hit->normal;
    bool transmissive = mat.bsdf == BsdfKind::Glass || mat.bsdf == BsdfKind::Translucent;
    if (!transmissive && dot(n, wo) < 0) n = -n;
    Vec3 albedo = sample_pattern(mat, hit->uv);
    BsdfSample bs = sample_bsdf(mat, albedo, wo, n, rng);
    if (bs.weight.x == 0 && bs.weight.y == 0 && bs.weight.z == 0) return {};
    Vec3 next_origin = hit->point + n * (dot(bs.wi, n) >= 0 ? 1e-6 : -1e-6);
    return bs.weight * oracle_trace(tris, mats, env, next_origin, bs.wi, scatters_left - 1, rng);
}

// ---- brute-force average precision ---------------------------------------

inline double brute_force_ap(std::vector<DetectionRecord> dets,
                             const std::vector<GroundTruthBox> &gts, double threshold) {
    std::stable_sort(dets.begin(), dets.end(),
                     [](const DetectionRecord &a, const DetectionRecord &b) {
                         if (a.confidence != b.confidence) return a.confidence > b.confidence;
                         return a.image_id < b.image_id;
                     });
    std::set<double, std::greater<double>> cutoffs;
    for (const DetectionRecord &d : dets) cutoffs.insert(d.confidence);

    auto overlap = [](const BBox2D &a, const BBox2D &b) {
        double ix = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
        double iy = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
        double inter = std::max(0.0, ix) * std::max(0.0, iy);
        double uni = a.area() + b.area() - inter;
        return uni > 0 ? inter / uni : 0.0;
    };

    std::vector<double> recalls, precisions;
    for (double cutoff : cutoffs) {
        std::vector<bool> used(gts.size(), false);
        int64_t tp = 0, fp = 0;
        for (const DetectionRecord &d : dets) {
            if (d.confidence < cutoff) break;
            int best = -1;
            double best_iou = 0;
            for (size_t g = 0; g < gts.size(); ++g) {
                if (used[g] || gts[g].image_id != d.image_id || gts[g].class_id != d.class_id)
                    continue;
                double o = overlap(d.bbox, gts[g].bbox);
                if (o >= threshold && o > best_iou) {
                    best_iou = o;
                    best = int(g);
                }
            }
            if (best >= 0) {
                used[size_t(best)] = true;
                ++tp;
            } else {
                ++fp;
            }
        }
        recalls.push_back(double(tp) / double(gts.size()));
        precisions.push_back(tp + fp > 0 ? double(tp) / double(tp + fp) : 0.0);
    }

    double ap = 0.0, prev_recall = 0.0;
    for (size_t k = 0; k < recalls.size(); ++k) {
        double envelope = 0.0;
        for (size_t j = k; j < precisions.size(); ++j) envelope = std::max(envelope, precisions[j]);
        ap += (recalls[k] - prev_recall) * envelope;
        prev_recall = recalls[k];
    }
    return ap;
}

struct ApInstance {
    std::vector<DetectionRecord> dets;
    std::vector<GroundTruthBox> gts;
};

// Random instance with <= 20 boxes; continuous confidences keep the
// per-detection PR points identical to the threshold sweep's.
inline ApInstance random_ap_instance(Rng &rng) {
    ApInstance inst;
    int num_gt = 1 + int(rng.next_below(8));
    int num_det = int(rng.next_below(13));
    int images = 1 + int(rng.next_below(3));
    for (int g = 0; g < num_gt; ++g) {
        double x0 = rng.uniform(0, 80), y0 = rng.uniform(0, 80);
        inst.gts.push_back({int64_t(rng.next_below(uint64_t(images))), 0,
                            {x0, y0, x0 + rng.uniform(5, 30), y0 + rng.uniform(5, 30)}});
    }
    for (int d = 0; d < num_det; ++d) {
        BBox2D base = inst.gts[rng.next_below(inst.gts.size())].bbox;
        double dx = rng.uniform(-10, 10), dy = rng.uniform(-10, 10);
        BBox2D b{base.x_min + dx, base.y_min + dy, base.x_max + dx * 0.5, base.y_max + dy * 0.5};
        if (b.x_min > b.x_max) std::swap(b.x_min, b.x_max);
        if (b.y_min > b.y_max) std::swap(b.y_min, b.y_max);
        inst.dets.push_back(
            {int64_t(rng.next_below(uint64_t(images))), 0, b, rng.next_double()});
    }
    return inst;
}

// ---- silhouette from the instance-id buffer -------------------------------

inline std::optional<BBox2D> silhouette_bbox(const RenderOutput &out, int width, int height) {
    int min_x = width, min_y = height, max_x = -1, max_y = -1;
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
            if (out.instance_at(x, y) != kBackgroundId) {
                min_x = std::min(min_x, x);
                min_y = std::min(min_y, y);
                max_x = std::max(max_x, x);
                max_y = std::max(max_y, y);
            }
    if (max_x < 0) return std::nullopt;
    return BBox2D{double(min_x), double(min_y), double(max_x + 1), double(max_y + 1)};
}

}  // namespace airforge::test
