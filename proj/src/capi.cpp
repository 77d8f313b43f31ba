#include "airforge.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "core/image.hpp"
#include "env/hdr_io.hpp"
#include "eval/anchors.hpp"
#include "eval/illum.hpp"
#include "eval/metrics.hpp"
#include "label/formats.hpp"
#include "pipeline/run.hpp"
#include "scene/obj_io.hpp"
#include "scene/uav_factory.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

struct af_mesh {
    airforge::Mesh mesh;
};

struct af_envmap {
    airforge::EnvMap map;
};

namespace {

thread_local std::string t_last_error;

char *dup_string(const std::string &s) {
    char *out = static_cast<char *>(std::malloc(s.size() + 1));
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

af_status classify(const std::string &message) {
    auto has = [&](const char *needle) { return message.find(needle) != std::string::npos; };
    if (has("cannot open") || has("write failed") || has("missing manifest")) return AF_ERROR_IO;
    if (has("parse") || has("JSON") || has("bad magic") || has("expected")) return AF_ERROR_PARSE;
    return AF_ERROR_RUNTIME;
}

template <typename Fn>
af_status guarded(Fn &&fn) {
    try {
        fn();
        return AF_OK;
    } catch (const std::invalid_argument &e) {
        t_last_error = e.what();
        return AF_ERROR_INVALID_ARGUMENT;
    } catch (const std::exception &e) {
        t_last_error = e.what();
        return classify(t_last_error);
    } catch (...) {
        t_last_error = "unknown error";
        return AF_ERROR_RUNTIME;
    }
}

af_status require(bool ok, const char *message) {
    if (ok) return AF_OK;
    t_last_error = message;
    return AF_ERROR_INVALID_ARGUMENT;
}

airforge::RunOptions run_options_from(const af_generate_options *options) {
    airforge::RunOptions run;
    if (options) {
        run.workers = options->workers > 0 ? options->workers : 1;
        run.limit_images = options->limit_images;
    }
    return run;
}

airforge::PipelineConfig config_with_overrides(const char *config_path,
                                               const af_generate_options *options) {
    airforge::PipelineConfig config = airforge::load_config(config_path);
    if (options && options->has_seed_override) {
        config.seed = options->seed_override;
        config.texture_seed = options->seed_override;
    }
    return config;
}

std::vector<airforge::Vec2> collect_boxes(const std::string &path, int grid_size) {
    std::vector<airforge::Vec2> boxes;  // normalized (w, h)
    fs::path p(path);
    if (fs::is_directory(p)) {
        std::vector<fs::path> files;
        for (const auto &entry : fs::directory_iterator(p))
            if (entry.path().extension() == ".txt") files.push_back(entry.path());
        std::sort(files.begin(), files.end());
        for (const fs::path &file : files)
            for (const airforge::YoloRecord &rec : airforge::load_yolo(file.string()))
                boxes.push_back({rec.w, rec.h});
    } else if (p.extension() == ".json") {
        airforge::CocoDataset coco = airforge::load_coco(path);
        std::map<int64_t, const airforge::CocoImage *> by_id;
        for (const airforge::CocoImage &img : coco.images) by_id[img.id] = &img;
        for (const airforge::Annotation &ann : coco.annotations) {
            auto it = by_id.find(ann.image_id);
            double w = it != by_id.end() && it->second->width > 0 ? it->second->width : grid_size;
            double h = it != by_id.end() && it->second->height > 0 ? it->second->height : grid_size;
            boxes.push_back({ann.bbox.width() / w, ann.bbox.height() / h});
        }
    } else {
        for (const airforge::YoloRecord &rec : airforge::load_yolo(path))
            boxes.push_back({rec.w, rec.h});
    }
    return boxes;
}

}  // namespace

extern "C" {

const char *af_version(void) { return airforge::kToolVersion; }

const char *af_last_error(void) { return t_last_error.c_str(); }

void af_string_free(char *s) { std::free(s); }

/* ---- meshes ----------------------------------------------------------- */

af_status af_mesh_generate_uav(int arms, double arm_length, double body_radius,
                               double rotor_radius, double gear_height, uint64_t seed,
                               af_mesh **out) {
    if (af_status s = require(out != nullptr, "out must not be null")) return s;
    return guarded([&] {
        *out = new af_mesh{airforge::generate_uav_mesh(arms, arm_length, body_radius,
                                                       rotor_radius, gear_height, seed)};
    });
}

af_status af_mesh_load_obj(const char *path, af_mesh **out) {
    if (af_status s = require(path && out, "path and out must not be null")) return s;
    return guarded([&] { *out = new af_mesh{airforge::load_obj(path)}; });
}

af_status af_mesh_write_obj(const af_mesh *mesh, const char *path) {
    if (af_status s = require(mesh && path, "mesh and path must not be null")) return s;
    return guarded([&] { airforge::write_obj(path, mesh->mesh); });
}

size_t af_mesh_vertex_count(const af_mesh *mesh) { return mesh ? mesh->mesh.vertex_count() : 0; }

size_t af_mesh_triangle_count(const af_mesh *mesh) {
    return mesh ? mesh->mesh.triangle_count() : 0;
}

void af_mesh_free(af_mesh *mesh) { delete mesh; }

/* ---- environment maps -------------------------------------------------- */

af_status af_envmap_synthesize(const char *condition, double sun_azimuth_deg,
                               double sun_elevation_deg, int width, uint64_t seed,
                               af_envmap **out) {
    if (af_status s = require(condition && out, "condition and out must not be null")) return s;
    return guarded([&] {
        *out = new af_envmap{airforge::synthesize_sky(
            airforge::sky_condition_from_string(condition), sun_azimuth_deg, sun_elevation_deg,
            width, seed)};
    });
}

af_status af_envmap_load_hdr(const char *path, af_envmap **out) {
    if (af_status s = require(path && out, "path and out must not be null")) return s;
    return guarded([&] { *out = new af_envmap{airforge::load_hdr(path)}; });
}

af_status af_envmap_write_hdr(const af_envmap *map, const char *path) {
    if (af_status s = require(map && path, "map and path must not be null")) return s;
    return guarded([&] { airforge::write_hdr(path, map->map); });
}

void af_envmap_size(const af_envmap *map, int *width, int *height) {
    if (width) *width = map ? map->map.width : 0;
    if (height) *height = map ? map->map.height : 0;
}

void af_envmap_free(af_envmap *map) { delete map; }

/* ---- dataset generation ------------------------------------------------ */

af_status af_plan_summary(const char *config_path, const af_generate_options *options,
                          char **summary_json) {
    if (af_status s = require(config_path && summary_json, "config_path and summary_json required"))
        return s;
    return guarded([&] {
        airforge::PipelineConfig config = config_with_overrides(config_path, options);
        *summary_json = dup_string(airforge::plan_summary(config).dump(2));
    });
}

af_status af_generate(const char *config_path, const char *output_dir,
                      const af_generate_options *options, char **report_json) {
    if (af_status s = require(config_path && output_dir, "config_path and output_dir required"))
        return s;
    return guarded([&] {
        airforge::PipelineConfig config = config_with_overrides(config_path, options);
        airforge::RunReport run = airforge::run_pipeline(config, output_dir,
                                                         run_options_from(options));
        ordered_json report;
        report["output_dir"] = output_dir;
        report["total"] = run.total;
        report["rendered"] = run.rendered;
        report["skipped"] = run.skipped;
        report["complete"] = run.complete;
        report["plan"] = run.manifest["plan"];
        if (report_json) *report_json = dup_string(report.dump(2));
    });
}

af_status af_validate(const char *dataset_dir, char **report_json, int64_t *violation_count) {
    if (af_status s = require(dataset_dir != nullptr, "dataset_dir required")) return s;
    return guarded([&] {
        airforge::ValidationReport result = airforge::validate_dataset(dataset_dir);
        if (violation_count) *violation_count = int64_t(result.violations.size());
        ordered_json report;
        report["dataset_dir"] = dataset_dir;
        report["images_checked"] = result.images_checked;
        report["violations"] = result.violations;
        report["ok"] = result.ok();
        if (report_json) *report_json = dup_string(report.dump(2));
    });
}

/* ---- evaluation toolkit ------------------------------------------------- */

af_status af_eval(const char *gt_path, const char *detections_path, double iou_threshold,
                  char **report_json) {
    if (af_status s = require(gt_path && detections_path, "gt_path and detections_path required"))
        return s;
    return guarded([&] {
        airforge::CocoDataset gt = airforge::load_coco(gt_path);
        std::vector<airforge::GroundTruthBox> truths;
        std::set<int64_t> known_images;
        for (const airforge::CocoImage &img : gt.images) known_images.insert(img.id);
        for (const airforge::Annotation &ann : gt.annotations)
            truths.push_back({ann.image_id, ann.class_id, ann.bbox});

        std::vector<airforge::DetectionRecord> detections =
            airforge::load_detections(detections_path);
        std::vector<std::string> warnings;
        std::set<int64_t> unknown;
        for (const airforge::DetectionRecord &det : detections)
            if (!known_images.count(det.image_id)) unknown.insert(det.image_id);
        for (int64_t id : unknown)
            warnings.push_back("detection references unknown image_id " + std::to_string(id) +
                               "; counted as false positive");

        airforge::EvalReport eval = airforge::evaluate(detections, truths, iou_threshold);
        ordered_json report;
        report["map"] = eval.map;
        report["iou_threshold"] = iou_threshold;
        report["classes"] = ordered_json::array();
        for (const auto &[class_id, ap] : eval.per_class) {
            ordered_json cls;
            cls["class_id"] = class_id;
            cls["ap"] = ap.ap;
            cls["tp"] = ap.tp;
            cls["fp"] = ap.fp;
            cls["fn"] = ap.fn;
            cls["curve"] = ordered_json::array();
            for (const airforge::PrPoint &p : ap.curve.points)
                cls["curve"].push_back(
                    {{"recall", p.recall}, {"precision", p.precision}, {"threshold", p.threshold}});
            report["classes"].push_back(std::move(cls));
        }
        report["warnings"] = warnings;
        if (report_json) *report_json = dup_string(report.dump(2));
    });
}

af_status af_anchors(const char *labels_path, int k, const char *distance, int grid_size,
                     uint64_t seed, char **anchors_json) {
    if (af_status s = require(labels_path && distance, "labels_path and distance required"))
        return s;
    return guarded([&] {
        int grid = grid_size > 0 ? grid_size : 608;
        std::vector<airforge::Vec2> boxes = collect_boxes(labels_path, grid);
        airforge::AnchorSet anchors = airforge::cluster_anchors(
            boxes, k, airforge::anchor_distance_from_string(distance), seed);
        ordered_json report;
        report["k"] = k;
        report["distance"] = distance;
        report["grid"] = grid;
        report["boxes"] = boxes.size();
        report["objective"] = anchors.objective;
        report["anchors_normalized"] = ordered_json::array();
        report["anchors_grid"] = ordered_json::array();
        for (const airforge::Vec2 &c : anchors.centroids) {
            report["anchors_normalized"].push_back({c.x, c.y});
            report["anchors_grid"].push_back({c.x * grid, c.y * grid});
        }
        if (anchors_json) *anchors_json = dup_string(report.dump(2));
    });
}

af_status af_perturb(const char *image_path, const char *mode, double strength,
                     char **report_json) {
    if (af_status s = require(image_path && mode, "image_path and mode required")) return s;
    return guarded([&] {
        airforge::IllumMode illum = airforge::illum_mode_from_string(mode);
        double factor = strength > 0 ? strength : airforge::default_illum_strength(illum);

        std::vector<fs::path> inputs;
        fs::path p(image_path);
        if (fs::is_directory(p)) {
            for (const auto &entry : fs::directory_iterator(p)) {
                std::string name = entry.path().filename().string();
                bool already = name.find(".overexposed.") != std::string::npos ||
                               name.find(".underexposed.") != std::string::npos;
                if (entry.path().extension() == ".png" && !already) inputs.push_back(entry.path());
            }
            std::sort(inputs.begin(), inputs.end());
        } else if (fs::exists(p)) {
            inputs.push_back(p);
        } else {
            throw std::runtime_error("perturb: cannot open '" + std::string(image_path) + "'");
        }

        ordered_json written = ordered_json::array();
        for (const fs::path &input : inputs) {
            airforge::Image8 image = airforge::read_png(input.string());
            airforge::Image8 out = airforge::perturb_illumination(image, illum, factor);
            fs::path target = input.parent_path() /
                              (input.stem().string() + "." + airforge::to_string(illum) + ".png");
            airforge::write_png(target.string(), out);
            written.push_back(target.string());
        }
        ordered_json report;
        report["mode"] = airforge::to_string(illum);
        report["strength"] = factor;
        report["outputs"] = written;
        if (report_json) *report_json = dup_string(report.dump(2));
    });
}

af_status af_write_builtin_assets(const char *out_dir, char **report_json) {
    if (af_status s = require(out_dir != nullptr, "out_dir required")) return s;
    return guarded([&] {
        fs::path root(out_dir);
        fs::create_directories(root / "models");
        fs::create_directories(root / "envs");
        ordered_json models = ordered_json::array();
        ordered_json envs = ordered_json::array();
        for (const airforge::ModelConfig &m : airforge::builtin_models()) {
            fs::path path = root / "models" / (m.id + ".obj");
            airforge::write_obj(path.string(), airforge::materialize_model(m));
            models.push_back(path.string());
        }
        for (const airforge::EnvironmentConfig &e : airforge::builtin_environments()) {
            fs::path path = root / "envs" / (e.id + ".hdr");
            airforge::write_hdr(path.string(), airforge::materialize_environment(e));
            envs.push_back(path.string());
        }
        ordered_json report;
        report["models"] = models;
        report["environments"] = envs;
        if (report_json) *report_json = dup_string(report.dump(2));
    });
}

} /* extern "C" */
