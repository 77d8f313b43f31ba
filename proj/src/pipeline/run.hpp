#pragma once

#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pipeline/config.hpp"

namespace airforge {

struct RunOptions {
    int workers = 1;
    // Render at most this many pending images, then stop without writing
    // the final manifest (mimics an interrupted run); -1 = no limit.
    int64_t limit_images = -1;
    std::function<void(int64_t done, int64_t total)> on_progress;
};

struct RunReport {
    int64_t total = 0;
    int64_t rendered = 0;
    int64_t skipped = 0;
    bool complete = false;
    nlohmann::ordered_json manifest;
};

// Resolved plan arithmetic for a config, for printing before a run.
nlohmann::ordered_json plan_summary(const PipelineConfig &config);

// Executes the full plan: sample, render, tonemap, annotate, write. Files
// land under output_dir as images/NNNNNN.png, labels/NNNNNN.txt,
// annotations.json and manifest.json; progress.jsonl carries per-image
// records in completion (= image id) order and makes reruns resume: an
// image is skipped when its files exist and its recorded metadata matches.
// Every output byte is a function of (config, seed) alone.
RunReport run_pipeline(const PipelineConfig &config, const std::string &output_dir,
                       const RunOptions &options = {});

struct ValidationReport {
    std::vector<std::string> violations;
    int64_t images_checked = 0;
    bool ok() const { return violations.empty(); }
};

// Cross-checks manifest, files, label formats, bbox bounds and the plan
// arithmetic of a generated dataset directory.
ValidationReport validate_dataset(const std::string &dataset_dir);

}  // namespace airforge
