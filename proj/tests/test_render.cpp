#include <doctest.h>

#include <cmath>

#include "core/color.hpp"
#include "core/rng.hpp"
#include "render/render.hpp"
#include "support/oracles.hpp"
#include "support/test_util.hpp"

using namespace airforge;

namespace {

EnvMap uniform_env(double value, int width = 32) {
    EnvMap map(width, width / 2, "uniform");
    for (Vec3 &v : map.radiance) v = Vec3(value);
    return map;
}

// Smooth vertical-gradient environment; benign variance for the
// estimator-comparison tests.
EnvMap gradient_env(int width = 32) {
    EnvMap map(width, width / 2, "gradient");
    for (int y = 0; y < map.height; ++y)
        for (int x = 0; x < map.width; ++x) {
            Vec3 d = texel_direction(map, x, y);
            double t = 0.5 * (d.y + 1.0);
            map.at(x, y) = lerp(Vec3{0.15, 0.1, 0.08}, Vec3{0.9, 1.1, 1.4}, t);
        }
    return map;
}

TextureMixture simple_materials() {
    TextureMixture mix;
    MaterialSpec white;
    white.bsdf = BsdfKind::Diffuse;
    white.color_a = {1, 1, 1};
    white.id = 0;
    MaterialSpec gray;
    gray.bsdf = BsdfKind::Diffuse;
    gray.color_a = {0.6, 0.55, 0.5};
    gray.id = 1;
    MaterialSpec glossy;
    glossy.bsdf = BsdfKind::Glossy;
    glossy.color_a = {0.7, 0.7, 0.75};
    glossy.roughness = 0.25;
    glossy.id = 2;
    mix.entries = {white, gray, glossy};
    return mix;
}

Camera front_camera(double dist, int size, double fov = 45.0) {
    Camera camera;
    camera.pose = look_at({0, 0, dist}, {0, 0, 0}, {0, 1, 0});
    camera.hfov_deg = fov;
    camera.width = size;
    camera.height = size;
    return camera;
}

}  // namespace

TEST_CASE("single-triangle BVH has the triangle box at the root") {
    SceneTriangle tri;
    tri.p0 = {0, 0, 0};
    tri.p1 = {1, 0, 0};
    tri.p2 = {0, 2, -1};
    Bvh bvh = Bvh::build({tri});
    REQUIRE(bvh.nodes().size() >= 1);
    Aabb expected = tri.bounds();
    CHECK(bvh.nodes()[0].box.lo == expected.lo);
    CHECK(bvh.nodes()[0].box.hi == expected.hi);
    auto hit = bvh.intersect({0.2, 0.2, 5}, {0, 0, -1});
    CHECK(hit.has_value());
}

TEST_CASE("BVH agrees with the brute-force nearest intersection") {
    Rng rng(42);
    std::vector<SceneTriangle> tris(10000);
    for (SceneTriangle &tri : tris) {
        Vec3 base{rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)};
        tri.p0 = base;
        tri.p1 = base + Vec3{rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4)};
        tri.p2 = base + Vec3{rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4)};
    }
    Bvh bvh = Bvh::build(tris);
    const std::vector<SceneTriangle> &reordered = bvh.triangles();
    for (int r = 0; r < 1000; ++r) {
        Vec3 origin{rng.uniform(-8, 8), rng.uniform(-8, 8), rng.uniform(-8, 8)};
        Vec3 dir = normalize(Vec3{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)});
        auto fast = bvh.intersect(origin, dir);

        std::optional<TriangleHit> slow;
        double closest = 1e300;
        for (const SceneTriangle &tri : reordered) {
            if (auto hit = intersect_triangle(tri, origin, dir, closest)) {
                closest = hit->t;
                slow = hit;
            }
        }
        REQUIRE(fast.has_value() == slow.has_value());
        if (fast) REQUIRE(fast->t == doctest::Approx(slow->t).epsilon(1e-12));
    }
}

TEST_CASE("separated clusters split into disjoint root children") {
    Rng rng(3);
    std::vector<SceneTriangle> tris;
    for (int cluster = 0; cluster < 2; ++cluster) {
        Vec3 center{cluster * 100.0, 0, 0};
        for (int i = 0; i < 50; ++i) {
            SceneTriangle tri;
            Vec3 base = center + Vec3{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
            tri.p0 = base;
            tri.p1 = base + Vec3{0.2, 0, 0};
            tri.p2 = base + Vec3{0, 0.2, 0};
            tris.push_back(tri);
        }
    }
    Bvh bvh = Bvh::build(tris);
    const auto &root = bvh.nodes()[0];
    REQUIRE(root.count == 0);
    const auto &left = bvh.nodes()[1];
    const auto &right = bvh.nodes()[root.first];
    CHECK(!left.box.overlaps(right.box));
}

TEST_CASE("empty scene renders the environment exactly") {
    EnvMap env = uniform_env(2.0);
    Scene scene({}, nullptr, &env);
    RenderConfig config;
    config.width = 16;
    config.height = 16;
    config.spp = 8;
    RenderOutput out = render(scene, front_camera(4, 16), config);
    for (const Vec3 &p : out.color.pixels) CHECK(p == Vec3(2.0));
    for (int32_t id : out.instance_ids) CHECK(id == kBackgroundId);
}

TEST_CASE("black environment renders to zero") {
    EnvMap env(32, 16, "black");
    TextureMixture mats = simple_materials();
    Mesh sphere = test::make_uv_sphere({0, 0, 0}, 1.0, 8, 16);
    Scene scene({{&sphere, RigidTransform::identity(), 0, 0}}, &mats, &env);
    RenderConfig config;
    config.width = 16;
    config.height = 16;
    config.spp = 4;
    RenderOutput out = render(scene, front_camera(4, 16), config);
    for (const Vec3 &p : out.color.pixels) CHECK(p == Vec3{});
}

TEST_CASE("white furnace: unit-albedo sphere disappears into a unit environment") {
    EnvMap env = uniform_env(1.0);
    TextureMixture mats = simple_materials();
    Mesh sphere = test::make_uv_sphere({0, 0, 0}, 1.0, 12, 24);
    Scene scene({{&sphere, RigidTransform::identity(), 0, 0}}, &mats, &env);
    RenderConfig config;
    config.width = 64;
    config.height = 64;
    config.spp = 128;
    config.max_depth = 5;
    config.seed = 9;
    Camera camera = front_camera(4, 64);
    RenderOutput out = render(scene, camera, config);

    double sum = 0.0;
    int count = 0;
    for (int y = 0; y < 64; ++y)
        for (int x = 0; x < 64; ++x)
            if (out.instance_at(x, y) != kBackgroundId) {
                sum += (out.color.at(x, y).x + out.color.at(x, y).y + out.color.at(x, y).z) / 3.0;
                ++count;
            }
    REQUIRE(count > 200);
    CHECK(sum / count == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("render output is bitwise identical across thread counts and runs") {
    EnvMap env = gradient_env();
    TextureMixture mats = simple_materials();
    Mesh sphere = test::make_uv_sphere({0.2, -0.1, 0}, 0.9, 10, 20);
    Scene scene({{&sphere, RigidTransform::identity(), 2, 0}}, &mats, &env);
    RenderConfig config;
    config.width = 32;
    config.height = 32;
    config.spp = 16;
    config.seed = 4;

    config.threads = 1;
    RenderOutput a = render(scene, front_camera(4, 32), config);
    config.threads = 4;
    RenderOutput b = render(scene, front_camera(4, 32), config);
    RenderOutput c = render(scene, front_camera(4, 32), config);

    REQUIRE(a.color.pixels.size() == b.color.pixels.size());
    for (size_t i = 0; i < a.color.pixels.size(); ++i) {
        REQUIRE(a.color.pixels[i] == b.color.pixels[i]);
        REQUIRE(b.color.pixels[i] == c.color.pixels[i]);
    }
    CHECK(a.instance_ids == b.instance_ids);
}

TEST_CASE("centered sphere leaves a left-right symmetric id mask") {
    EnvMap env = uniform_env(1.0);
    TextureMixture mats = simple_materials();
    Mesh sphere = test::make_uv_sphere({0, 0, 0}, 1.0, 16, 32);
    Scene scene({{&sphere, RigidTransform::identity(), 0, 0}}, &mats, &env);
    RenderConfig config;
    config.width = 48;
    config.height = 48;
    config.spp = 1;
    RenderOutput out = render(scene, front_camera(5, 48), config);
    for (int y = 0; y < 48; ++y) {
        int min_x = 48, max_x = -1;
        for (int x = 0; x < 48; ++x)
            if (out.instance_at(x, y) != kBackgroundId) {
                min_x = std::min(min_x, x);
                max_x = std::max(max_x, x);
            }
        if (max_x >= 0) CHECK(std::abs(min_x - (47 - max_x)) <= 1);
    }
}

TEST_CASE("renderer matches the brute-force estimator in expectation") {
    EnvMap env = gradient_env();
    TextureMixture mats = simple_materials();
    Mesh sphere = test::make_uv_sphere({0, 0.2, 0}, 0.8, 8, 16);
    Mesh floor = test::make_box({0, -1.2, 0}, {1.6, 0.15, 1.6});
    std::vector<SceneObject> objects = {{&sphere, RigidTransform::identity(), 1, 0},
                                        {&floor, RigidTransform::identity(), 2, 1}};
    Scene scene(objects, &mats, &env);
    std::vector<SceneTriangle> tris = test::flatten_objects(objects);

    Camera camera = front_camera(4.5, 8, 50.0);
    RenderConfig config;
    config.width = 8;
    config.height = 8;
    config.spp = 1500;
    config.max_depth = 2;
    config.seed = 21;

    int checked = 0;
    for (int y = 0; y < 8; ++y) {
        for (int x = 0; x < 8; ++x) {
            Vec3 mean1{}, m2_1{};
            for (int s = 0; s < config.spp; ++s) {
                Vec3 v = trace_pixel(scene, camera, config, x, y, s);
                Vec3 delta = v - mean1;
                mean1 += delta * (1.0 / (s + 1));
                m2_1 += delta * (v - mean1);
            }
            Rng rng = Rng::keyed({99, uint64_t(y * 8 + x)});
            Vec3 mean2{}, m2_2{};
            for (int s = 0; s < config.spp; ++s) {
                Ray ray = camera_ray(camera, x + rng.next_double(), y + rng.next_double());
                Vec3 v = test::oracle_trace(tris, mats, env, ray.origin, ray.dir,
                                            config.max_depth, rng);
                Vec3 delta = v - mean2;
                mean2 += delta * (1.0 / (s + 1));
                m2_2 += delta * (v - mean2);
            }
            for (int c = 0; c < 3; ++c) {
                double var1 = m2_1[c] / (config.spp - 1);
                double var2 = m2_2[c] / (config.spp - 1);
                double sigma = std::sqrt(var1 / config.spp + var2 / config.spp);
                REQUIRE(std::abs(mean1[c] - mean2[c]) <= 3.0 * sigma + 1e-3);
                ++checked;
            }
        }
    }
    CHECK(checked == 8 * 8 * 3);
}

TEST_CASE("scaling the environment scales every pixel exactly") {
    EnvMap env = gradient_env();
    EnvMap half = env;
    for (Vec3 &v : half.radiance) v = v * 0.5;

    TextureMixture mats = simple_materials();
    Mesh sphere = test::make_uv_sphere({0, 0, 0}, 0.9, 10, 20);
    std::vector<SceneObject> objects = {{&sphere, RigidTransform::identity(), 1, 0}};
    Scene bright(objects, &mats, &env);
    Scene dim(objects, &mats, &half);

    RenderConfig config;
    config.width = 16;
    config.height = 16;
    config.spp = 8;
    config.seed = 5;
    RenderOutput a = render(bright, front_camera(4, 16), config);
    RenderOutput b = render(dim, front_camera(4, 16), config);
    for (size_t i = 0; i < a.color.pixels.size(); ++i)
        REQUIRE(b.color.pixels[i] == a.color.pixels[i] * 0.5);
}

TEST_CASE("tonemap hits the pinned byte values") {
    ImageRgb img(4, 1);
    img.at(0, 0) = Vec3(0.0);
    img.at(1, 0) = Vec3(1.0);
    img.at(2, 0) = Vec3(2.5);
    img.at(3, 0) = Vec3(0.5);
    Image8 out = tonemap(img, 1.0);
    CHECK(out.at(0, 0)[0] == 0);
    CHECK(out.at(1, 0)[0] == 255);
    CHECK(out.at(2, 0)[0] == 255);
    CHECK(out.at(3, 0)[0] == 188);

    // Independent transfer-function evaluation for 0.5.
    double srgb = 1.055 * std::pow(0.5, 1.0 / 2.4) - 0.055;
    CHECK(uint8_t(std::floor(srgb * 255.0 + 0.5)) == 188);

    ImageRgb quarter(1, 1);
    quarter.at(0, 0) = Vec3(0.25);
    ImageRgb half_img(1, 1);
    half_img.at(0, 0) = Vec3(0.5);
    CHECK(tonemap(quarter, 2.0).pixels == tonemap(half_img, 1.0).pixels);
}

TEST_CASE("pfm round-trips bit-exactly at float precision") {
    test::TempDir dir;
    Rng rng(6);
    ImageRgb img(7, 5);
    for (Vec3 &v : img.pixels) v = {rng.uniform(0, 10), rng.uniform(0, 10), rng.uniform(0, 10)};
    write_pfm(dir.file("x.pfm"), img);
    ImageRgb back = read_pfm(dir.file("x.pfm"));
    REQUIRE(back.width == 7);
    REQUIRE(back.height == 5);
    for (size_t i = 0; i < img.pixels.size(); ++i) {
        CHECK(float(back.pixels[i].x) == float(img.pixels[i].x));
        CHECK(float(back.pixels[i].y) == float(img.pixels[i].y));
        CHECK(float(back.pixels[i].z) == float(img.pixels[i].z));
    }
}

TEST_CASE("png write/read round-trips 8-bit data") {
    test::TempDir dir;
    Rng rng(12);
    Image8 img(9, 6);
    for (uint8_t &b : img.pixels) b = uint8_t(rng.next_below(256));
    write_png(dir.file("x.png"), img);
    Image8 back = read_png(dir.file("x.png"));
    REQUIRE(back.width == img.width);
    REQUIRE(back.height == img.height);
    CHECK(back.pixels == img.pixels);
}
