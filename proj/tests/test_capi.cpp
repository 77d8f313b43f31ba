// Exercises the public C surface: opaque handles, status codes and the
// thread-local error message.

#include <doctest.h>

#include <cstring>
#include <string>

#include <nlohmann/json.hpp>

#include "airforge.h"
#include "support/test_util.hpp"

using test::TempDir;

namespace {

struct Str {
    char *ptr = nullptr;
    ~Str() { af_string_free(ptr); }
    std::string str() const { return ptr ? ptr : ""; }
};

}  // namespace

TEST_CASE("version string is exposed") {
    CHECK(std::string(af_version()) == "0.1.0");
}

TEST_CASE("mesh handles: generate, inspect, write, load, free") {
    af_mesh *mesh = nullptr;
    REQUIRE(af_mesh_generate_uav(4, 0.34, 0.10, 0.11, 0.10, 5, &mesh) == AF_OK);
    REQUIRE(mesh != nullptr);
    CHECK(af_mesh_vertex_count(mesh) > 100);
    CHECK(af_mesh_triangle_count(mesh) > 100);

    TempDir dir;
    CHECK(af_mesh_write_obj(mesh, dir.file("m.obj").c_str()) == AF_OK);

    af_mesh *loaded = nullptr;
    REQUIRE(af_mesh_load_obj(dir.file("m.obj").c_str(), &loaded) == AF_OK);
    CHECK(af_mesh_vertex_count(loaded) == af_mesh_vertex_count(mesh));
    CHECK(af_mesh_triangle_count(loaded) == af_mesh_triangle_count(mesh));
    af_mesh_free(loaded);
    af_mesh_free(mesh);
}

TEST_CASE("invalid arguments map to AF_ERROR_INVALID_ARGUMENT with a message") {
    af_mesh *mesh = nullptr;
    CHECK(af_mesh_generate_uav(5, 0.34, 0.10, 0.11, 0.10, 5, &mesh) ==
          AF_ERROR_INVALID_ARGUMENT);
    CHECK(mesh == nullptr);
    CHECK(std::strlen(af_last_error()) > 0);
    CHECK(af_mesh_generate_uav(4, 0.34, 0.10, 0.11, 0.10, 5, nullptr) ==
          AF_ERROR_INVALID_ARGUMENT);
}

TEST_CASE("missing files surface the path in the error message") {
    af_mesh *mesh = nullptr;
    CHECK(af_mesh_load_obj("/nonexistent/uav.obj", &mesh) != AF_OK);
    CHECK(std::string(af_last_error()).find("/nonexistent/uav.obj") != std::string::npos);
}

TEST_CASE("envmap handles: synthesize, write, load") {
    af_envmap *map = nullptr;
    REQUIRE(af_envmap_synthesize("clear_day", 40, 35, 64, 3, &map) == AF_OK);
    int w = 0, h = 0;
    af_envmap_size(map, &w, &h);
    CHECK(w == 64);
    CHECK(h == 32);

    TempDir dir;
    CHECK(af_envmap_write_hdr(map, dir.file("sky.hdr").c_str()) == AF_OK);
    af_envmap *loaded = nullptr;
    REQUIRE(af_envmap_load_hdr(dir.file("sky.hdr").c_str(), &loaded) == AF_OK);
    af_envmap_size(loaded, &w, &h);
    CHECK(w == 64);
    af_envmap_free(loaded);
    af_envmap_free(map);

    CHECK(af_envmap_synthesize("foggy", 0, 30, 64, 0, &map) == AF_ERROR_INVALID_ARGUMENT);
}

TEST_CASE("generate / validate / anchors / eval / perturb through the C API") {
    TempDir dir;
    std::string config_path = dir.file("config.json");
    test::write_text_file(config_path, R"json({
      "seed": 5,
      "textures": {"count": 1},
      "models": [{"id": "quad", "type": "uav", "arms": 4, "seed": 1}],
      "environments": [{"id": "sky", "type": "sky", "condition": "clear_day",
                        "sun_elevation": 45, "width": 64, "seed": 1}],
      "target_images": 2,
      "ranges": {"objects_per_image": [1, 1]},
      "render": {"width": 32, "height": 32, "spp": 2, "max_depth": 2}
    })json");

    Str summary;
    REQUIRE(af_plan_summary(config_path.c_str(), nullptr, &summary.ptr) == AF_OK);
    auto plan = nlohmann::json::parse(summary.str());
    CHECK(plan["target_images"] == 2);

    af_generate_options options{};
    options.workers = 2;
    options.limit_images = -1;
    std::string out_dir = dir.file("ds");
    Str report;
    REQUIRE(af_generate(config_path.c_str(), out_dir.c_str(), &options, &report.ptr) == AF_OK);
    auto rep = nlohmann::json::parse(report.str());
    CHECK(rep["rendered"] == 2);
    CHECK(rep["complete"] == true);

    Str validation;
    int64_t violations = -1;
    REQUIRE(af_validate(out_dir.c_str(), &validation.ptr, &violations) == AF_OK);
    CHECK(violations == 0);

    Str anchors;
    REQUIRE(af_anchors((out_dir + "/labels").c_str(), 1, "euclidean", 608, 0, &anchors.ptr) ==
            AF_OK);
    auto anc = nlohmann::json::parse(anchors.str());
    CHECK(anc["anchors_normalized"].size() == 1);
    CHECK(anc["boxes"].get<int>() >= 2);

    // Perfect detections straight from the ground truth.
    auto gt = nlohmann::json::parse(test::read_text_file(out_dir + "/annotations.json"));
    std::string det_lines;
    for (const auto &ann : gt["annotations"]) {
        double x = ann["bbox"][0], y = ann["bbox"][1], w = ann["bbox"][2], h = ann["bbox"][3];
        det_lines += std::to_string(ann["image_id"].get<int64_t>()) + " 0 0.9 " +
                     std::to_string(x) + " " + std::to_string(y) + " " + std::to_string(x + w) +
                     " " + std::to_string(y + h) + "\n";
    }
    std::string det_path = dir.file("dets.txt");
    test::write_text_file(det_path, det_lines);
    Str eval;
    REQUIRE(af_eval((out_dir + "/annotations.json").c_str(), det_path.c_str(), 0.5, &eval.ptr) ==
            AF_OK);
    auto ev = nlohmann::json::parse(eval.str());
    CHECK(ev["map"].get<double>() == doctest::Approx(1.0));

    Str perturb;
    REQUIRE(af_perturb((out_dir + "/images").c_str(), "overexposed", 0.0, &perturb.ptr) == AF_OK);
    auto per = nlohmann::json::parse(perturb.str());
    CHECK(per["outputs"].size() == 2);
    CHECK(per["strength"].get<double>() == doctest::Approx(2.5));
}

TEST_CASE("validate on a missing dataset is an error, not a crash") {
    Str report;
    int64_t violations = 0;
    CHECK(af_validate("/nonexistent/dataset", &report.ptr, &violations) != AF_OK);
    CHECK(std::strlen(af_last_error()) > 0);
}

TEST_CASE("builtin asset pack writes through the C API") {
    TempDir dir;
    Str report;
    REQUIRE(af_write_builtin_assets(dir.file("assets").c_str(), &report.ptr) == AF_OK);
    auto rep = nlohmann::json::parse(report.str());
    CHECK(rep["models"].size() == 10);
    CHECK(rep["environments"].size() == 10);
}
