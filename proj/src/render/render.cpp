#include "render/render.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "core/color.hpp"
#include "core/rng.hpp"

namespace airforge {

Bvh build_bvh(const std::vector<SceneObject> &objects) {
    std::vector<SceneTriangle> soup;
    for (const SceneObject &obj : objects) {
        const Mesh &mesh = *obj.mesh;
        for (const auto &tri : mesh.triangles) {
            SceneTriangle st;
            st.p0 = obj.transform.apply_point(mesh.positions[tri[0]]);
            st.p1 = obj.transform.apply_point(mesh.positions[tri[1]]);
            st.p2 = obj.transform.apply_point(mesh.positions[tri[2]]);
            st.n0 = obj.transform.apply_vector(mesh.normals[tri[0]]);
            st.n1 = obj.transform.apply_vector(mesh.normals[tri[1]]);
            st.n2 = obj.transform.apply_vector(mesh.normals[tri[2]]);
            st.uv0 = mesh.uvs[tri[0]];
            st.uv1 = mesh.uvs[tri[1]];
            st.uv2 = mesh.uvs[tri[2]];
            st.instance_id = obj.instance_id;
            st.material_id = obj.material_id;
            soup.push_back(st);
        }
    }
    return Bvh::build(std::move(soup));
}

Scene::Scene(const std::vector<SceneObject> &objects, const TextureMixture *materials,
             const EnvMap *environment)
    : materials_(materials), environment_(environment) {
    if (!environment_) throw std::invalid_argument("Scene: environment map is required");
    for (const SceneObject &obj : objects) triangle_count_ += obj.mesh->triangle_count();
    if (triangle_count_ > 0) bvh_.emplace(build_bvh(objects));
    try {
        env_sampler_ = std::make_unique<EnvSampler>(*environment_);
    } catch (const std::invalid_argument &) {
        env_sampler_.reset();  // all-black environment: nothing to sample
    }
}

const MaterialSpec &Scene::material(int32_t id) const {
    static const MaterialSpec kFallback{};
    if (!materials_ || id < 0 || id >= int(materials_->entries.size())) return kFallback;
    return materials_->entries[size_t(id)];
}

std::optional<Scene::Hit> Scene::intersect(const Vec3 &origin, const Vec3 &dir) const {
    if (!bvh_) return std::nullopt;
    auto tri_hit = bvh_->intersect(origin, dir);
    if (!tri_hit) return std::nullopt;
    const SceneTriangle &tri = bvh_->triangles()[tri_hit->triangle];
    double u = tri_hit->u, v = tri_hit->v, w = 1.0 - u - v;
    Hit hit;
    hit.t = tri_hit->t;
    hit.point = origin + dir * tri_hit->t;
    hit.shading_normal = normalize(tri.n0 * w + tri.n1 * u + tri.n2 * v);
    hit.geometric_normal = normalize(cross(tri.p1 - tri.p0, tri.p2 - tri.p0));
    hit.uv = {tri.uv0.x * w + tri.uv1.x * u + tri.uv2.x * v,
              tri.uv0.y * w + tri.uv1.y * u + tri.uv2.y * v};
    hit.instance_id = tri.instance_id;
    hit.material_id = tri.material_id;
    return hit;
}

bool Scene::occluded(const Vec3 &origin, const Vec3 &dir, double t_max) const {
    return bvh_ && bvh_->occluded(origin, dir, t_max);
}

void RenderConfig::validate() const {
    if (spp < 1) throw std::invalid_argument("render config: spp must be >= 1");
    if (max_depth < 1) throw std::invalid_argument("render config: max_depth must be >= 1");
    if (width < 1 || height < 1) throw std::invalid_argument("render config: empty image");
    if (!(exposure > 0)) throw std::invalid_argument("render config: exposure must be > 0");
    if (threads < 1) throw std::invalid_argument("render config: threads must be >= 1");
}

namespace {

constexpr double kSpawnOffset = 1e-6;  // meters; scene features are >= mm
constexpr int kRouletteDepth = 3;

Vec3 offset_origin(const Scene::Hit &hit, const Vec3 &dir) {
    double side = dot(dir, hit.geometric_normal) >= 0 ? 1.0 : -1.0;
    return hit.point + hit.geometric_normal * (side * kSpawnOffset);
}

bool is_black(const Vec3 &v) { return v.x == 0 && v.y == 0 && v.z == 0; }

double balance_weight(double pdf_this, double pdf_other) {
    return pdf_this / (pdf_this + pdf_other);
}

}  // namespace

Vec3 trace_pixel(const Scene &scene, const Camera &camera, const RenderConfig &config, int px,
                 int py, int sample_index) {
    Rng rng = Rng::keyed({config.seed, uint64_t(py) * uint64_t(config.width) + uint64_t(px),
                          uint64_t(sample_index)});

    // Stratified-jittered subpixel position over the largest square grid
    // that fits in spp; the remainder falls back to plain jitter.
    int strata = int(std::sqrt(double(config.spp)));
    double jx = rng.next_double(), jy = rng.next_double();
    double sx, sy;
    if (strata >= 2 && sample_index < strata * strata) {
        sx = (sample_index % strata + jx) / strata;
        sy = (sample_index / strata + jy) / strata;
    } else {
        sx = jx;
        sy = jy;
    }

    Ray ray = camera_ray(camera, px + sx, py + sy);
    const EnvSampler *env_sampler = scene.env_sampler();

    Vec3 radiance{};
    Vec3 throughput{1, 1, 1};
    double prev_bsdf_pdf = 0.0;
    bool prev_delta = true;  // primary rays hit the environment at full weight

    for (int bounce = 0;; ++bounce) {
        auto hit = scene.intersect(ray.origin, ray.dir);
        if (!hit) {
            Vec3 env = env_lookup(scene.environment(), ray.dir);
            if (!is_black(env)) {
                double w = 1.0;
                if (!prev_delta && env_sampler)
                    w = balance_weight(prev_bsdf_pdf, env_sampler->pdf(ray.dir));
                radiance += throughput * env * w;
            }
            break;
        }
        if (bounce == config.max_depth) break;

        const MaterialSpec &mat = scene.material(hit->material_id);
        Vec3 albedo = sample_pattern(mat, hit->uv);
        Vec3 wo = -ray.dir;
        Vec3 n = hit->shading_normal;
        bool transmissive = mat.bsdf == BsdfKind::Glass || mat.bsdf == BsdfKind::Translucent;
        if (!transmissive && dot(n, wo) < 0) n = -n;

        // Next-event estimation against the environment for lobes with a
        // solid-angle density; combined with BSDF sampling below via the
        // balance heuristic.
        if (env_sampler && !transmissive) {
            EnvDirSample light = env_sampler->sample(rng);
            Vec3 f = eval_bsdf(mat, albedo, light.dir, wo, n);
            if (!is_black(f) && light.pdf > 0 && !is_black(light.radiance)) {
                if (!scene.occluded(offset_origin(*hit, light.dir), light.dir)) {
                    double w = balance_weight(light.pdf, pdf_bsdf(mat, light.dir, wo, n));
                    radiance +=
                        throughput * f * light.radiance * (dot(light.dir, n) * w / light.pdf);
                }
            }
        }

        BsdfSample bs = sample_bsdf(mat, albedo, wo, n, rng);
        if (is_black(bs.weight)) break;
        throughput *= bs.weight;
        prev_delta = bs.delta;
        if (!bs.delta) {
            prev_bsdf_pdf = pdf_bsdf(mat, bs.wi, wo, n);
            if (prev_bsdf_pdf <= 0) break;
        }
        ray = {offset_origin(*hit, bs.wi), bs.wi};

        if (bounce + 1 >= kRouletteDepth) {
            double survival = std::clamp(throughput.max_component(), 0.05, 0.95);
            if (rng.next_double() >= survival) break;
            throughput *= 1.0 / survival;
        }
    }
    return radiance;
}

namespace {

int32_t primary_instance(const Scene &scene, const Camera &camera, int px, int py) {
    Ray ray = camera_ray(camera, px + 0.5, py + 0.5);
    auto hit = scene.intersect(ray.origin, ray.dir);
    return hit ? hit->instance_id : kBackgroundId;
}

}  // namespace

RenderOutput render(const Scene &scene, const Camera &camera, const RenderConfig &config) {
    config.validate();
    RenderOutput out;
    out.color = ImageRgb(config.width, config.height);
    out.instance_ids.assign(size_t(config.width) * config.height, kBackgroundId);

    // Row-based work queue; every pixel is an independent pure function of
    // (seed, pixel, sample), so decomposition cannot change the output.
    std::atomic<int> next_row{0};
    auto worker = [&]() {
        for (;;) {
            int y = next_row.fetch_add(1);
            if (y >= config.height) return;
            for (int x = 0; x < config.width; ++x) {
                Vec3 sum{};
                for (int s = 0; s < config.spp; ++s)
                    sum += trace_pixel(scene, camera, config, x, y, s);
                out.color.at(x, y) = sum / double(config.spp);
                out.instance_ids[size_t(y) * config.width + x] =
                    primary_instance(scene, camera, x, y);
            }
        }
    };

    int threads = std::min(config.threads, config.height);
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(size_t(threads));
        for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (auto &t : pool) t.join();
    }
    return out;
}

Image8 tonemap(const ImageRgb &linear, double exposure) {
    Image8 out(linear.width, linear.height);
    for (int y = 0; y < linear.height; ++y) {
        for (int x = 0; x < linear.width; ++x) {
            const Vec3 &c = linear.at(x, y);
            uint8_t *px = out.at(x, y);
            px[0] = linear_to_srgb8(c.x * exposure);
            px[1] = linear_to_srgb8(c.y * exposure);
            px[2] = linear_to_srgb8(c.z * exposure);
        }
    }
    return out;
}

}  // namespace airforge
