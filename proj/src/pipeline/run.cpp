#include "pipeline/run.hpp"

#include <atomic>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>

#include "core/rng.hpp"
#include "label/formats.hpp"
#include "render/render.hpp"

namespace airforge {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

std::string image_name(int64_t id) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%06" PRId64, id);
    return buf;
}

struct MaterializedAssets {
    std::vector<Mesh> meshes;
    std::vector<EnvMap> environments;
    TextureMixture mixture;
};

MaterializedAssets materialize(const PipelineConfig &config) {
    MaterializedAssets assets;
    for (const ModelConfig &m : config.models) assets.meshes.push_back(materialize_model(m));
    for (const EnvironmentConfig &e : config.environments)
        assets.environments.push_back(materialize_environment(e));
    assets.mixture = build_mixture(config.texture_count, config.texture_seed);
    return assets;
}

DatasetPlan plan_for(const PipelineConfig &config, const MaterializedAssets &assets) {
    std::vector<std::string> model_ids, env_ids;
    for (const ModelConfig &m : config.models) model_ids.push_back(m.id);
    for (const EnvironmentConfig &e : config.environments) env_ids.push_back(e.id);
    int64_t base = int64_t(model_ids.size()) * int64_t(env_ids.size()) * config.texture_count;
    int64_t target = config.target_images > 0 ? config.target_images : base;

    DatasetPlan plan = make_plan(std::move(model_ids), std::move(env_ids), config.texture_count,
                                 target, config.ranges, config.seed);
    plan.geometry.fov_deg = config.render.fov_deg;
    plan.geometry.aspect = double(config.render.width) / double(config.render.height);
    double radius = 0.0, xz = 0.0, half_h = 0.0;
    for (const Mesh &mesh : assets.meshes) {
        radius = std::max(radius, mesh.bounding_radius());
        for (const Vec3 &p : mesh.positions) {
            xz = std::max(xz, std::sqrt(p.x * p.x + p.z * p.z));
            half_h = std::max(half_h, std::abs(p.y));
        }
    }
    plan.geometry.object_radius = radius;
    plan.geometry.object_xz_radius = xz;
    plan.geometry.object_half_height = half_h;
    return plan;
}

ordered_json summary_of(const DatasetPlan &plan) {
    ordered_json s;
    s["models"] = plan.models;
    s["environments"] = plan.environments;
    s["textures"] = plan.mixture_size;
    s["poses_per_combo"] = plan.poses_per_combo;
    s["yaw_steps"] = plan.yaw_steps;
    s["target_images"] = plan.target_images;
    s["requested_images"] = plan.requested_images;
    s["rounded_up"] = plan.target_images != plan.requested_images;
    return s;
}

ordered_json record_of(const DatasetPlan &plan, const SceneSample &sample, int annotation_count) {
    ordered_json rec;
    rec["image_id"] = sample.image_id;
    rec["file"] = "images/" + image_name(sample.image_id) + ".png";
    rec["label"] = "labels/" + image_name(sample.image_id) + ".txt";
    rec["model"] = plan.models[size_t(sample.model_index)];
    rec["environment"] = plan.environments[size_t(sample.environment_index)];
    rec["material"] = sample.material_id;
    rec["pitch"] = sample.pitch_deg;
    rec["roll"] = sample.roll_deg;
    rec["yaw"] = sample.yaw_deg;
    rec["distance"] = sample.distance_m;
    rec["object_count"] = sample.object_count;
    rec["annotations"] = annotation_count;
    return rec;
}

// Completed-image records from a previous run, if any.
std::map<int64_t, ordered_json> read_progress(const fs::path &path, const std::string &hash) {
    std::map<int64_t, ordered_json> records;
    std::ifstream in(path);
    if (!in) return records;
    std::string line;
    bool header_ok = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ordered_json doc = ordered_json::parse(line, nullptr, false);
        if (doc.is_discarded()) continue;  // torn tail line from an interrupt
        if (!header_ok) {
            header_ok = doc.value("config_hash", "") == hash;
            if (!header_ok) return records;  // different config: start over
            continue;
        }
        if (doc.contains("image_id")) records[doc["image_id"].get<int64_t>()] = doc;
    }
    return records;
}

}  // namespace

ordered_json plan_summary(const PipelineConfig &config) {
    MaterializedAssets assets = materialize(config);
    return summary_of(plan_for(config, assets));
}

RunReport run_pipeline(const PipelineConfig &config, const std::string &output_dir,
                       const RunOptions &options) {
    if (options.workers < 1) throw std::invalid_argument("run_pipeline: workers must be >= 1");
    config.validate();

    fs::path root(output_dir);
    fs::create_directories(root / "images");
    fs::create_directories(root / "labels");

    MaterializedAssets assets = materialize(config);
    DatasetPlan plan = plan_for(config, assets);
    std::vector<SceneSample> samples = draw_samples(plan);
    std::string hash = config.config_hash();

    // Deterministic metadata pass: annotations and manifest records for
    // every sample, independent of what gets rendered below.
    int64_t total = int64_t(samples.size());
    std::vector<std::vector<Annotation>> annotations(samples.size());
    std::vector<ordered_json> records(samples.size());
    std::vector<Camera> cameras(samples.size());
    for (size_t i = 0; i < samples.size(); ++i) {
        cameras[i] = sample_camera(samples[i], config.render.fov_deg, config.render.width,
                                   config.render.height);
        annotations[i] =
            annotate(samples[i], cameras[i], assets.meshes[size_t(samples[i].model_index)]);
        records[i] = record_of(plan, samples[i], int(annotations[i].size()));
    }

    std::map<int64_t, ordered_json> previous = read_progress(root / "progress.jsonl", hash);
    std::vector<char> completed(samples.size(), 0);
    int64_t skipped = 0;
    for (size_t i = 0; i < samples.size(); ++i) {
        auto it = previous.find(samples[i].image_id);
        if (it == previous.end() || it->second != records[i]) continue;
        if (!fs::exists(root / "images" / (image_name(samples[i].image_id) + ".png")) ||
            !fs::exists(root / "labels" / (image_name(samples[i].image_id) + ".txt")))
            continue;
        completed[i] = 1;
        ++skipped;
    }

    // Schedule pending images, honoring the render budget.
    std::vector<size_t> pending;
    for (size_t i = 0; i < samples.size(); ++i)
        if (!completed[i]) pending.push_back(i);
    size_t budget = options.limit_images < 0
                        ? pending.size()
                        : std::min(pending.size(), size_t(options.limit_images));

    std::ofstream progress(root / "progress.jsonl", std::ios::binary | std::ios::trunc);
    if (!progress)
        throw std::runtime_error("run_pipeline: cannot write " +
                                 (root / "progress.jsonl").string());
    progress << ordered_json{{"config_hash", hash}, {"tool_version", kToolVersion}}.dump() << "\n";
    progress.flush();

    std::mutex flush_mutex;
    size_t flush_cursor = 0;
    int64_t done_count = 0;
    auto flush_completed = [&]() {  // call with flush_mutex held
        while (flush_cursor < samples.size() && completed[flush_cursor]) {
            progress << records[flush_cursor].dump() << "\n";
            ++flush_cursor;
        }
        progress.flush();
    };

    {
        // Records skipped by the resume check re-enter the fresh progress
        // log up front, so a rerun after this one still sees them.
        std::lock_guard<std::mutex> lock(flush_mutex);
        flush_completed();
    }

    std::atomic<size_t> next_job{0};
    std::atomic<bool> failed{false};
    std::string failure;
    std::mutex failure_mutex;

    auto worker = [&]() {
        for (;;) {
            size_t job = next_job.fetch_add(1);
            if (job >= budget || failed.load()) return;
            size_t i = pending[job];
            const SceneSample &sample = samples[i];
            try {
                std::vector<SceneObject> objects;
                const Mesh &mesh = assets.meshes[size_t(sample.model_index)];
                for (size_t k = 0; k < sample.placements.size(); ++k)
                    objects.push_back({&mesh, sample.placements[k], sample.material_id, int(k)});
                Scene scene(objects, &assets.mixture,
                            &assets.environments[size_t(sample.environment_index)]);

                RenderConfig rc;
                rc.width = config.render.width;
                rc.height = config.render.height;
                rc.spp = config.render.spp;
                rc.max_depth = config.render.max_depth;
                rc.exposure = config.render.exposure;
                rc.threads = 1;  // parallelism lives at the image level here
                rc.seed = hash_combine(config.seed, uint64_t(sample.image_id));

                RenderOutput out = render(scene, cameras[i], rc);
                write_png((root / "images" / (image_name(sample.image_id) + ".png")).string(),
                          tonemap(out.color, config.render.exposure));
                write_yolo((root / "labels" / (image_name(sample.image_id) + ".txt")).string(),
                           annotations[i], config.render.width, config.render.height);

                std::lock_guard<std::mutex> lock(flush_mutex);
                completed[i] = 1;
                ++done_count;
                flush_completed();
                if (options.on_progress) options.on_progress(done_count, int64_t(budget));
            } catch (const std::exception &e) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failed.exchange(true)) failure = e.what();
                return;
            }
        }
    };

    int workers = int(std::min<size_t>(size_t(options.workers), std::max<size_t>(budget, 1)));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto &t : pool) t.join();
    }
    if (failed.load())
        throw std::runtime_error("run_pipeline: " + failure + " (partial progress flushed)");

    RunReport report;
    report.total = total;
    report.skipped = skipped;
    report.rendered = int64_t(budget);
    bool all_done = true;
    for (char c : completed) all_done = all_done && c;
    report.complete = all_done;

    // Manifest and the COCO document describe the full plan; they are only
    // final once every image is on disk.
    ordered_json manifest;
    manifest["tool_version"] = kToolVersion;
    manifest["config_hash"] = hash;
    manifest["seed"] = config.seed;
    manifest["complete"] = report.complete;
    manifest["plan"] = summary_of(plan);
    manifest["images"] = ordered_json::array();
    for (size_t i = 0; i < samples.size(); ++i)
        if (completed[i]) manifest["images"].push_back(records[i]);
    report.manifest = manifest;

    {
        std::ofstream mf(root / "manifest.json", std::ios::binary | std::ios::trunc);
        mf << manifest.dump(2) << "\n";
        if (!mf) throw std::runtime_error("run_pipeline: cannot write manifest.json");
    }

    if (report.complete) {
        CocoDataset coco;
        for (size_t i = 0; i < samples.size(); ++i) {
            coco.images.push_back({samples[i].image_id,
                                   "images/" + image_name(samples[i].image_id) + ".png",
                                   config.render.width, config.render.height});
            for (const Annotation &ann : annotations[i]) coco.annotations.push_back(ann);
        }
        write_coco((root / "annotations.json").string(), coco);
    }
    return report;
}

namespace {

void check_record(const fs::path &root, const ordered_json &rec, int width, int height,
                  std::vector<std::string> &violations) {
    std::string file = rec.value("file", "");
    std::string label = rec.value("label", "");
    if (file.empty() || !fs::exists(root / file)) {
        violations.push_back("missing image file: " + file);
        return;
    }
    if (label.empty() || !fs::exists(root / label)) {
        violations.push_back("missing label file: " + label);
        return;
    }
    try {
        std::vector<YoloRecord> boxes = load_yolo((root / label).string());
        if (int64_t(boxes.size()) != rec.value("annotations", int64_t(-1)))
            violations.push_back(label + ": annotation count disagrees with manifest");
        for (const YoloRecord &b : boxes) {
            bool in01 = b.cx >= 0 && b.cx <= 1 && b.cy >= 0 && b.cy <= 1 && b.w >= 0 &&
                        b.w <= 1 && b.h >= 0 && b.h <= 1;
            if (!in01) {
                violations.push_back(label + ": normalized field outside [0,1]");
                break;
            }
            BBox2D box = yolo_to_bbox(b, width, height);
            // Half a quantization step of slack: fields carry 6 decimals.
            double eps = 1e-6 * std::max(width, height) + 1e-9;
            if (box.x_min < -eps || box.y_min < -eps || box.x_max > width + eps ||
                box.y_max > height + eps) {
                violations.push_back(label + ": box exceeds image bounds");
                break;
            }
        }
    } catch (const std::exception &e) {
        violations.push_back(std::string(e.what()));
    }
}

}  // namespace

ValidationReport validate_dataset(const std::string &dataset_dir) {
    fs::path root(dataset_dir);
    ValidationReport report;
    if (!fs::exists(root / "manifest.json"))
        throw std::runtime_error("validate: missing manifest.json in '" + dataset_dir + "'");

    ordered_json manifest;
    {
        std::ifstream in(root / "manifest.json");
        manifest = ordered_json::parse(in, nullptr, false);
        if (manifest.is_discarded()) {
            report.violations.push_back("manifest.json is not valid JSON");
            return report;
        }
    }
    if (!manifest.value("complete", false))
        report.violations.push_back("manifest marks the dataset incomplete");

    const ordered_json &plan = manifest["plan"];
    int64_t expected = plan.value("target_images", int64_t(-1));
    const ordered_json &images = manifest["images"];
    if (int64_t(images.size()) != expected)
        report.violations.push_back("manifest has " + std::to_string(images.size()) +
                                    " images, plan expects " + std::to_string(expected));

    int64_t per_combo = int64_t(plan.value("poses_per_combo", 0)) * plan.value("yaw_steps", 0);
    std::map<std::string, int64_t> combo_counts;
    int width = 0, height = 0;

    // Image dimensions come from the COCO document (the manifest does not
    // repeat them).
    CocoDataset coco;
    bool have_coco = false;
    if (fs::exists(root / "annotations.json")) {
        try {
            coco = load_coco((root / "annotations.json").string());
            have_coco = true;
            if (!coco.images.empty()) {
                width = coco.images.front().width;
                height = coco.images.front().height;
            }
        } catch (const std::exception &e) {
            report.violations.push_back(std::string("annotations.json: ") + e.what());
        }
    } else {
        report.violations.push_back("missing annotations.json");
    }

    int64_t manifest_annotations = 0;
    for (const ordered_json &rec : images) {
        check_record(root, rec, width, height, report.violations);
        combo_counts[rec.value("model", "") + "|" + rec.value("environment", "") + "|" +
                     std::to_string(rec.value("material", -1))]++;
        manifest_annotations += rec.value("annotations", int64_t(0));
        report.images_checked++;
    }
    for (const auto &[combo, count] : combo_counts)
        if (count != per_combo)
            report.violations.push_back("combination " + combo + " has " + std::to_string(count) +
                                        " images, plan expects " + std::to_string(per_combo));

    if (have_coco) {
        if (int64_t(coco.annotations.size()) != manifest_annotations)
            report.violations.push_back("annotations.json has " +
                                        std::to_string(coco.annotations.size()) +
                                        " boxes, manifest counts " +
                                        std::to_string(manifest_annotations));
        for (const Annotation &ann : coco.annotations) {
            if (ann.bbox.x_min < 0 || ann.bbox.y_min < 0 || ann.bbox.x_max > width ||
                ann.bbox.y_max > height || ann.bbox.area() <= 0) {
                report.violations.push_back("annotations.json: box out of bounds for image " +
                                            std::to_string(ann.image_id));
                break;
            }
        }
        if (int64_t(coco.images.size()) != int64_t(images.size()))
            report.violations.push_back("annotations.json image count disagrees with manifest");
    }
    return report;
}

}  // namespace airforge
