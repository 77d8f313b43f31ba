#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "core/image.hpp"
#include "env/env_sampler.hpp"
#include "materials/material.hpp"
#include "render/bvh.hpp"
#include "scene/mesh.hpp"

namespace airforge {

struct SceneObject {
    const Mesh *mesh = nullptr;
    RigidTransform transform;
    int material_id = 0;
    int instance_id = 0;
};

// Immutable render scene: world-space triangle soup under a BVH, the
// material pool, and the environment that both lights the scene and fills
// the background. Safe to share read-only across render threads.
class Scene {
public:
    Scene(const std::vector<SceneObject> &objects, const TextureMixture *materials,
          const EnvMap *environment);

    struct Hit {
        double t;
        Vec3 point;
        Vec3 shading_normal;   // interpolated, unit
        Vec3 geometric_normal; // face normal, unit
        Vec2 uv;
        int32_t instance_id;
        int32_t material_id;
    };

    std::optional<Hit> intersect(const Vec3 &origin, const Vec3 &dir) const;
    bool occluded(const Vec3 &origin, const Vec3 &dir, double t_max = 1e300) const;

    bool empty() const { return triangle_count_ == 0; }
    const MaterialSpec &material(int32_t id) const;
    const EnvMap &environment() const { return *environment_; }
    const EnvSampler *env_sampler() const { return env_sampler_.get(); }  // null for black maps

private:
    std::optional<Bvh> bvh_;
    size_t triangle_count_ = 0;
    const TextureMixture *materials_;
    const EnvMap *environment_;
    std::unique_ptr<EnvSampler> env_sampler_;
};

// Flattens placed meshes into a BVH; instance ids are list positions.
Bvh build_bvh(const std::vector<SceneObject> &objects);

struct RenderConfig {
    int spp = 512;
    int max_depth = 5;
    int width = 608;
    int height = 608;
    double exposure = 1.0;
    uint64_t seed = 0;
    int threads = 1;

    void validate() const;
};

constexpr int32_t kBackgroundId = -1;

struct RenderOutput {
    ImageRgb color;
    std::vector<int32_t> instance_ids;  // row-major, kBackgroundId for misses

    int32_t instance_at(int x, int y) const { return instance_ids[size_t(y) * color.width + x]; }
};

// One path-traced sample for a pixel: stratified-jittered primary ray,
// BSDF sampling plus next-event estimation against the environment with
// the balance heuristic, Russian roulette from depth 3. A pure function
// of (config.seed, pixel, sample_index).
Vec3 trace_pixel(const Scene &scene, const Camera &camera, const RenderConfig &config, int px,
                 int py, int sample_index);

// Averages spp samples per pixel over a tile-parallel worker pool. The
// instance-id grid comes from a deterministic pixel-center ray, so outputs
// are bitwise identical for any thread count.
RenderOutput render(const Scene &scene, const Camera &camera, const RenderConfig &config);

// clamp(linear * exposure, 0, 1) -> sRGB, rounded half up to 8 bits.
Image8 tonemap(const ImageRgb &linear, double exposure);

}  // namespace airforge
