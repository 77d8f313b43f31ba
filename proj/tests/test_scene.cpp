#include <doctest.h>

#include <algorithm>

#include "core/rng.hpp"
#include "scene/mesh.hpp"
#include "scene/obj_io.hpp"
#include "scene/uav_factory.hpp"
#include "support/test_util.hpp"

using namespace airforge;
using test::TempDir;

namespace {

const char *kTriangleObj = "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\n";

const char *kCubeObj =
    "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\n"
    "v 0 0 1\nv 1 0 1\nv 1 1 1\nv 0 1 1\n"
    "f 1 3 2\nf 1 4 3\n"
    "f 5 6 7\nf 5 7 8\n"
    "f 1 2 6\nf 1 6 5\n"
    "f 2 3 7\nf 2 7 6\n"
    "f 3 4 8\nf 3 8 7\n"
    "f 4 1 5\nf 4 5 8\n";

bool near_vec(const Vec3 &a, const Vec3 &b, double tol) {
    return std::abs(a.x - b.x) <= tol && std::abs(a.y - b.y) <= tol && std::abs(a.z - b.z) <= tol;
}

}  // namespace

TEST_CASE("load_obj parses a single triangle") {
    TempDir dir;
    test::write_text_file(dir.file("tri.obj"), kTriangleObj);
    Mesh mesh = load_obj(dir.file("tri.obj"));
    CHECK(mesh.vertex_count() == 3);
    CHECK(mesh.triangle_count() == 1);
}

TEST_CASE("load_obj parses a unit cube") {
    TempDir dir;
    test::write_text_file(dir.file("cube.obj"), kCubeObj);
    Mesh mesh = load_obj(dir.file("cube.obj"));
    CHECK(mesh.triangle_count() == 12);
    Aabb box = mesh.bounds();
    CHECK(near_vec(box.lo, {0, 0, 0}, 1e-12));
    CHECK(near_vec(box.hi, {1, 1, 1}, 1e-12));
}

TEST_CASE("load_obj reports out-of-range face indices with the line number") {
    TempDir dir;
    test::write_text_file(dir.file("bad.obj"), "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 9\n");
    try {
        load_obj(dir.file("bad.obj"));
        FAIL("expected a parse error");
    } catch (const std::runtime_error &e) {
        std::string message = e.what();
        CHECK(message.find(":4") != std::string::npos);
        CHECK(message.find("9") != std::string::npos);
    }
}

TEST_CASE("load_obj rejects empty and non-finite input") {
    TempDir dir;
    test::write_text_file(dir.file("empty.obj"), "v 0 0 0\n");
    CHECK_THROWS(load_obj(dir.file("empty.obj")));
    test::write_text_file(dir.file("nan.obj"), "v nan 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\n");
    CHECK_THROWS(load_obj(dir.file("nan.obj")));
}

TEST_CASE("obj write/load round-trips counts and coordinates") {
    Mesh original = generate_uav_mesh(4, 0.34, 0.10, 0.11, 0.10, 5);
    TempDir dir;
    write_obj(dir.file("uav.obj"), original);
    Mesh reloaded = load_obj(dir.file("uav.obj"));
    REQUIRE(reloaded.vertex_count() == original.vertex_count());
    REQUIRE(reloaded.triangle_count() == original.triangle_count());
    for (size_t t = 0; t < original.triangles.size(); ++t)
        for (int k = 0; k < 3; ++k) {
            const Vec3 &a = original.positions[original.triangles[t][size_t(k)]];
            const Vec3 &b = reloaded.positions[reloaded.triangles[t][size_t(k)]];
            REQUIRE(near_vec(a, b, 1e-6));
        }
}

TEST_CASE("generate_uav_mesh is deterministic") {
    Mesh a = generate_uav_mesh(4, 0.34, 0.10, 0.11, 0.10, 7);
    Mesh b = generate_uav_mesh(4, 0.34, 0.10, 0.11, 0.10, 7);
    REQUIRE(a.positions.size() == b.positions.size());
    REQUIRE(a.triangles == b.triangles);
    for (size_t i = 0; i < a.positions.size(); ++i) CHECK(a.positions[i] == b.positions[i]);
}

TEST_CASE("generate_uav_mesh quad has a square horizontal footprint") {
    Mesh mesh = generate_uav_mesh(4, 0.34, 0.10, 0.11, 0.10, 3);
    Aabb box = mesh.bounds();
    CHECK(std::abs((box.hi.x - box.lo.x) - (box.hi.z - box.lo.z)) <= 1e-6);
}

TEST_CASE("generate_uav_mesh hexacopter has more triangles than quad") {
    Mesh quad = generate_uav_mesh(4, 0.34, 0.10, 0.11, 0.10, 3);
    Mesh hexa = generate_uav_mesh(6, 0.34, 0.10, 0.11, 0.10, 3);
    CHECK(hexa.triangle_count() > quad.triangle_count());
}

TEST_CASE("generate_uav_mesh rejects bad parameters") {
    CHECK_THROWS_AS(generate_uav_mesh(5, 0.3, 0.1, 0.1, 0.1, 0), std::invalid_argument);
    CHECK_THROWS_AS(generate_uav_mesh(4, -0.3, 0.1, 0.1, 0.1, 0), std::invalid_argument);
    CHECK_THROWS_AS(generate_uav_mesh(4, 0.05, 0.1, 0.1, 0.1, 0), std::invalid_argument);
}

TEST_CASE("uav vertex set is invariant under rotation by 360/n") {
    for (int arms : {4, 6}) {
        Mesh mesh = generate_uav_mesh(arms, 0.34, 0.10, 0.11, 0.10, 11);
        Mat3 rot = Mat3::rotation_y(2.0 * kPi / arms);
        for (size_t i = 0; i < mesh.positions.size(); i += 7) {  // sample supports
            Vec3 rotated = rot * mesh.positions[i];
            double best = 1e30;
            for (const Vec3 &p : mesh.positions)
                best = std::min(best, length_squared(p - rotated));
            REQUIRE(std::sqrt(best) <= 1e-6);
        }
    }
}

TEST_CASE("look_at canonical frame is the identity") {
    RigidTransform t = look_at({0, 0, 0}, {0, 0, -1}, {0, 1, 0});
    CHECK(near_vec(t.translation, {0, 0, 0}, 1e-12));
    CHECK(near_vec(t.rotation.col[0], {1, 0, 0}, 1e-12));
    CHECK(near_vec(t.rotation.col[1], {0, 1, 0}, 1e-12));
    CHECK(near_vec(t.rotation.col[2], {0, 0, 1}, 1e-12));
}

TEST_CASE("look_at points the forward axis at the target") {
    RigidTransform t = look_at({0, 0, 5}, {0, 0, 0}, {0, 1, 0});
    Vec3 forward = t.apply_vector({0, 0, -1});
    CHECK(near_vec(forward, {0, 0, -1}, 1e-12));
    CHECK(t.is_valid());
}

TEST_CASE("look_at rejects degenerate directions") {
    CHECK_THROWS_AS(look_at({1, 2, 3}, {1, 2, 3}, {0, 1, 0}), std::invalid_argument);
    CHECK_THROWS_AS(look_at({0, 0, 0}, {0, 1, 0}, {0, 1, 0}), std::invalid_argument);
}

TEST_CASE("project_point matches the pinhole examples") {
    Camera camera;  // identity pose at the origin, looking down -Z
    camera.hfov_deg = 90.0;
    camera.width = 100;
    camera.height = 100;

    auto center = project_point(camera, {0, 0, -5});
    REQUIRE(center.has_value());
    CHECK(center->pixel.x == doctest::Approx(50.0).epsilon(1e-12));
    CHECK(center->pixel.y == doctest::Approx(50.0).epsilon(1e-12));
    CHECK(center->depth == doctest::Approx(5.0));

    auto edge = project_point(camera, {5, 0, -5});
    REQUIRE(edge.has_value());
    CHECK(edge->pixel.x == doctest::Approx(100.0).epsilon(1e-12));
    CHECK(edge->pixel.y == doctest::Approx(50.0).epsilon(1e-12));

    CHECK(!project_point(camera, {0, 0, 1}).has_value());
}

TEST_CASE("look_at followed by project_point hits the image center") {
    Rng rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        Vec3 eye{rng.uniform(-10, 10), rng.uniform(-10, 10), rng.uniform(-10, 10)};
        Vec3 target{rng.uniform(-10, 10), rng.uniform(-10, 10), rng.uniform(-10, 10)};
        if (length(target - eye) < 1e-3) continue;
        Vec3 dir = normalize(target - eye);
        if (std::abs(dir.y) > 0.99) continue;
        Camera camera;
        camera.pose = look_at(eye, target, {0, 1, 0});
        camera.hfov_deg = 70.0;
        camera.width = 640;
        camera.height = 480;
        auto projected = project_point(camera, target);
        REQUIRE(projected.has_value());
        CHECK(std::abs(projected->pixel.x - 320.0) <= 1e-6);
        CHECK(std::abs(projected->pixel.y - 240.0) <= 1e-6);
    }
}

TEST_CASE("projected triangle interiors stay inside the vertex bbox") {
    Rng rng(4321);
    Camera camera;
    camera.hfov_deg = 80.0;
    camera.width = 320;
    camera.height = 240;
    for (int trial = 0; trial < 100; ++trial) {
        Vec3 v[3];
        for (Vec3 &p : v)
            p = {rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-8, -1)};
        std::vector<Vec2> projected;
        bool ok = true;
        for (const Vec3 &p : v) {
            auto proj = project_point(camera, p);
            ok = ok && proj.has_value();
            if (proj) projected.push_back(proj->pixel);
        }
        REQUIRE(ok);
        BBox2D box = bbox_of_points(projected);
        for (int s = 0; s < 20; ++s) {
            double a = rng.next_double(), b = rng.uniform(0.0, 1.0 - a);
            Vec3 p = v[0] * (1 - a - b) + v[1] * a + v[2] * b;
            auto proj = project_point(camera, p);
            REQUIRE(proj.has_value());
            CHECK(proj->pixel.x >= box.x_min - 1e-9);
            CHECK(proj->pixel.x <= box.x_max + 1e-9);
            CHECK(proj->pixel.y >= box.y_min - 1e-9);
            CHECK(proj->pixel.y <= box.y_max + 1e-9);
        }
    }
}

TEST_CASE("bbox_of_points computes componentwise extremes") {
    CHECK(bbox_of_points({{1, 2}}).x_min == 1);
    CHECK(bbox_of_points({{1, 2}}).y_max == 2);
    BBox2D box = bbox_of_points({{0, 0}, {3, 1}, {2, 5}});
    CHECK(box.x_min == 0);
    CHECK(box.y_min == 0);
    CHECK(box.x_max == 3);
    CHECK(box.y_max == 5);
    CHECK_THROWS_AS(bbox_of_points({}), std::invalid_argument);
}

TEST_CASE("mesh validate catches broken invariants") {
    Mesh mesh = test::make_box({0, 0, 0}, {1, 1, 1});
    CHECK_NOTHROW(mesh.validate());
    Mesh bad_index = mesh;
    bad_index.triangles[0][0] = 999;
    CHECK_THROWS(bad_index.validate());
    Mesh bad_normal = mesh;
    bad_normal.normals[0] = {0, 2, 0};
    CHECK_THROWS(bad_normal.validate());
    Mesh empty;
    CHECK_THROWS(empty.validate());
}
