// airforge command line: dataset generation and the evaluation toolkit,
// driven entirely through the public C API.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "airforge.h"

namespace {

using nlohmann::json;

struct OwnedString {
    char *ptr = nullptr;
    ~OwnedString() { af_string_free(ptr); }
    std::string str() const { return ptr ? ptr : ""; }
};

int fail(af_status status, const std::string &what) {
    std::cerr << "error: " << what << ": " << af_last_error() << " (status " << int(status)
              << ")\n";
    return 1;
}

int workers_default() {
    if (const char *env = std::getenv("AIRFORGE_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    return 1;
}

void write_text(const std::string &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"airforge - synthetic aerial dataset engine and evaluation toolkit"};
    app.require_subcommand(1);

    // generate
    auto *generate = app.add_subcommand("generate", "Render a dataset from a config file");
    std::string gen_config, gen_output = "dataset";
    uint64_t gen_seed = 0;
    int gen_workers = workers_default();
    int64_t gen_limit = -1;
    generate->add_option("-c,--config", gen_config, "Config file (JSON)")->required();
    generate->add_option("-o,--output", gen_output, "Output directory")
        ->capture_default_str();
    generate->add_option("--seed", gen_seed, "Override the config seed");
    generate->add_option("-j,--workers", gen_workers,
                         "Worker threads (default: AIRFORGE_THREADS or 1)");
    generate->add_option("--limit-images", gen_limit,
                         "Render at most N pending images, then stop (resume later)");

    // assets
    auto *assets = app.add_subcommand("assets", "Write the built-in model and sky asset pack");
    std::string assets_output = "assets";
    assets->add_option("-o,--output", assets_output, "Output directory")->capture_default_str();

    // validate
    auto *validate = app.add_subcommand("validate", "Check a generated dataset for consistency");
    std::string val_dir;
    std::string val_report;
    validate->add_option("dataset", val_dir, "Dataset directory")->required();
    validate->add_option("--report", val_report, "Also write the JSON report here");

    // eval
    auto *eval = app.add_subcommand("eval", "Score detections against ground truth (mAP@IoU)");
    std::string eval_gt, eval_det, eval_report = "eval_report.json", eval_csv;
    double eval_iou = 0.5;
    eval->add_option("--gt", eval_gt, "Ground truth (COCO annotations JSON)")->required();
    eval->add_option("--detections", eval_det,
                     "Detections (COCO results JSON or plain text lines)")
        ->required();
    eval->add_option("--iou-threshold", eval_iou, "IoU threshold for a match")
        ->capture_default_str();
    eval->add_option("--report", eval_report, "JSON report path")->capture_default_str();
    eval->add_option("--curve-csv", eval_csv, "Also write PR curve points as CSV");

    // anchors
    auto *anchors = app.add_subcommand("anchors", "Cluster ground-truth box sizes into anchors");
    std::string anc_labels, anc_distance = "iou";
    int anc_k = 9, anc_grid = 608;
    uint64_t anc_seed = 0;
    anchors->add_option("--labels", anc_labels,
                        "Label source: YOLO label dir/file or COCO JSON")
        ->required();
    anchors->add_option("-k", anc_k, "Number of anchors")->capture_default_str();
    anchors->add_option("--distance", anc_distance, "Cluster distance: iou or euclidean")
        ->capture_default_str();
    anchors->add_option("--grid", anc_grid, "Target grid for scaled anchors")
        ->capture_default_str();
    anchors->add_option("--seed", anc_seed, "Clustering seed")->capture_default_str();

    // perturb
    auto *perturb = app.add_subcommand("perturb", "Simulate difficult illumination on images");
    std::string per_input, per_mode;
    double per_strength = 0.0;
    perturb->add_option("--input", per_input, "PNG file or directory of PNGs")->required();
    perturb->add_option("--mode", per_mode, "overexposed or underexposed")->required();
    perturb->add_option("--strength", per_strength,
                        "Linear exposure factor (default 2.5 over / 0.4 under)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*generate) {
            af_generate_options options{};
            options.workers = gen_workers;
            options.has_seed_override = generate->count("--seed") > 0 ? 1 : 0;
            options.seed_override = gen_seed;
            options.limit_images = gen_limit;

            OwnedString summary;
            if (af_status s = af_plan_summary(gen_config.c_str(), &options, &summary.ptr))
                return fail(s, "plan");
            json plan = json::parse(summary.str());
            std::cout << "plan: " << plan["models"].size() << " models x "
                      << plan["environments"].size() << " environments x "
                      << plan["textures"].get<int>() << " textures x "
                      << plan["poses_per_combo"].get<int>() << " poses x "
                      << plan["yaw_steps"].get<int>() << " yaw steps = "
                      << plan["target_images"].get<int64_t>() << " images";
            if (plan["rounded_up"].get<bool>())
                std::cout << " (requested " << plan["requested_images"].get<int64_t>()
                          << ", rounded up)";
            std::cout << std::endl;

            OwnedString report;
            if (af_status s = af_generate(gen_config.c_str(), gen_output.c_str(), &options,
                                          &report.ptr))
                return fail(s, "generate");
            json result = json::parse(report.str());
            std::cout << "rendered " << result["rendered"].get<int64_t>() << ", skipped "
                      << result["skipped"].get<int64_t>() << " of "
                      << result["total"].get<int64_t>() << " images -> " << gen_output
                      << (result["complete"].get<bool>() ? "" : " (incomplete)") << std::endl;
            return 0;
        }

        if (*assets) {
            OwnedString report;
            if (af_status s = af_write_builtin_assets(assets_output.c_str(), &report.ptr))
                return fail(s, "assets");
            json result = json::parse(report.str());
            std::cout << "wrote " << result["models"].size() << " models and "
                      << result["environments"].size() << " environment maps under "
                      << assets_output << std::endl;
            return 0;
        }

        if (*validate) {
            OwnedString report;
            int64_t violations = 0;
            if (af_status s = af_validate(val_dir.c_str(), &report.ptr, &violations))
                return fail(s, "validate");
            json result = json::parse(report.str());
            if (!val_report.empty()) write_text(val_report, report.str() + "\n");
            for (const auto &v : result["violations"])
                std::cout << "violation: " << v.get<std::string>() << "\n";
            std::cout << "checked " << result["images_checked"].get<int64_t>() << " images, "
                      << violations << " violations" << std::endl;
            return violations == 0 ? 0 : 1;
        }

        if (*eval) {
            OwnedString report;
            if (af_status s = af_eval(eval_gt.c_str(), eval_det.c_str(), eval_iou, &report.ptr))
                return fail(s, "eval");
            json result = json::parse(report.str());
            write_text(eval_report, report.str() + "\n");
            for (const auto &w : result["warnings"])
                std::cerr << "warning: " << w.get<std::string>() << "\n";
            if (!eval_csv.empty()) {
                std::string csv = "class_id,recall,precision,threshold\n";
                for (const auto &cls : result["classes"])
                    for (const auto &p : cls["curve"])
                        csv += std::to_string(cls["class_id"].get<int>()) + "," +
                               std::to_string(p["recall"].get<double>()) + "," +
                               std::to_string(p["precision"].get<double>()) + "," +
                               std::to_string(p["threshold"].get<double>()) + "\n";
                write_text(eval_csv, csv);
            }
            char line[256];
            for (const auto &cls : result["classes"]) {
                std::snprintf(line, sizeof(line), "class %d: AP %.3f (TP %lld, FP %lld, FN %lld)",
                              cls["class_id"].get<int>(), cls["ap"].get<double>(),
                              static_cast<long long>(cls["tp"].get<int64_t>()),
                              static_cast<long long>(cls["fp"].get<int64_t>()),
                              static_cast<long long>(cls["fn"].get<int64_t>()));
                std::cout << line << "\n";
            }
            std::snprintf(line, sizeof(line), "mAP@%.2f %.3f", eval_iou,
                          result["map"].get<double>());
            std::cout << line << std::endl;
            return 0;
        }

        if (*anchors) {
            OwnedString report;
            if (af_status s = af_anchors(anc_labels.c_str(), anc_k, anc_distance.c_str(),
                                         anc_grid, anc_seed, &report.ptr))
                return fail(s, "anchors");
            json result = json::parse(report.str());
            std::cout << result["boxes"].get<int64_t>() << " boxes, k=" << anc_k << " ("
                      << anc_distance << " distance)\n";
            char line[128];
            for (size_t i = 0; i < result["anchors_normalized"].size(); ++i) {
                const auto &n = result["anchors_normalized"][i];
                const auto &g = result["anchors_grid"][i];
                std::snprintf(line, sizeof(line), "%.6f,%.6f  (%.1f,%.1f @ %d)",
                              n[0].get<double>(), n[1].get<double>(), g[0].get<double>(),
                              g[1].get<double>(), anc_grid);
                std::cout << line << "\n";
            }
            std::cout.flush();
            return 0;
        }

        if (*perturb) {
            OwnedString report;
            if (af_status s = af_perturb(per_input.c_str(), per_mode.c_str(), per_strength,
                                         &report.ptr))
                return fail(s, "perturb");
            json result = json::parse(report.str());
            std::cout << "wrote " << result["outputs"].size() << " image(s), mode "
                      << result["mode"].get<std::string>() << ", strength "
                      << result["strength"].get<double>() << std::endl;
            return 0;
        }
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
