#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scene/mesh.hpp"

namespace airforge {

struct DetectionRecord {
    int64_t image_id = 0;
    int class_id = 0;
    BBox2D bbox;
    double confidence = 0.0;  // in [0,1]
};

struct GroundTruthBox {
    int64_t image_id = 0;
    int class_id = 0;
    BBox2D bbox;
};

// area(a and b) / area(a or b); zero when the union is empty.
double iou(const BBox2D &a, const BBox2D &b);

// Greedy confidence-ordered matching. Detections are sorted by descending
// confidence (ties broken by ascending image_id, then input order); each
// one claims the unmatched same-image same-class ground truth with the
// highest IoU at or above the threshold.
struct MatchResult {
    std::vector<size_t> order;       // indices into the input detections, sorted
    std::vector<bool> is_tp;        // aligned with `order`
    std::vector<bool> gt_matched;   // aligned with the input ground truth
};

MatchResult match_detections(const std::vector<DetectionRecord> &detections,
                             const std::vector<GroundTruthBox> &ground_truth,
                             double iou_threshold);

struct PrPoint {
    double recall = 0.0;
    double precision = 0.0;
    double threshold = 0.0;  // confidence producing this point
};

struct PrCurve {
    std::vector<PrPoint> points;  // recall non-decreasing
};

struct ApResult {
    double ap = 0.0;
    PrCurve curve;
    int64_t tp = 0, fp = 0, fn = 0;
};

// All-point interpolated average precision at the given IoU threshold.
// Throws when the ground truth for the class is empty.
ApResult average_precision(const std::vector<DetectionRecord> &detections,
                           const std::vector<GroundTruthBox> &ground_truth,
                           double iou_threshold = 0.5);

struct EvalReport {
    double map = 0.0;
    std::vector<std::pair<int, ApResult>> per_class;  // class id -> result
};

// Mean over classes that have ground truth.
EvalReport evaluate(const std::vector<DetectionRecord> &detections,
                    const std::vector<GroundTruthBox> &ground_truth, double iou_threshold = 0.5);

// Detection ingestion: COCO-results JSON (`[{image_id, category_id,
// bbox: [x,y,w,h], score}]`) or plain text lines
// `image_id class conf x_min y_min x_max y_max`.
std::vector<DetectionRecord> parse_detections(const std::string &text,
                                              const std::string &source_name = "");
std::vector<DetectionRecord> load_detections(const std::string &path);

}  // namespace airforge
