#include "eval/metrics.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace airforge {

double iou(const BBox2D &a, const BBox2D &b) {
    double ix = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
    double iy = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
    double inter = std::max(0.0, ix) * std::max(0.0, iy);
    double uni = a.area() + b.area() - inter;
    return uni > 0.0 ? inter / uni : 0.0;
}

MatchResult match_detections(const std::vector<DetectionRecord> &detections,
                             const std::vector<GroundTruthBox> &ground_truth,
                             double iou_threshold) {
    MatchResult result;
    result.order.resize(detections.size());
    std::iota(result.order.begin(), result.order.end(), size_t(0));
    // Stable sort keeps input order as the final tie-breaker.
    std::stable_sort(result.order.begin(), result.order.end(), [&](size_t a, size_t b) {
        if (detections[a].confidence != detections[b].confidence)
            return detections[a].confidence > detections[b].confidence;
        return detections[a].image_id < detections[b].image_id;
    });

    result.is_tp.assign(detections.size(), false);
    result.gt_matched.assign(ground_truth.size(), false);

    for (size_t rank = 0; rank < result.order.size(); ++rank) {
        const DetectionRecord &det = detections[result.order[rank]];
        double best_iou = 0.0;
        int best_gt = -1;
        for (size_t g = 0; g < ground_truth.size(); ++g) {
            const GroundTruthBox &gt = ground_truth[g];
            if (result.gt_matched[g] || gt.image_id != det.image_id ||
                gt.class_id != det.class_id)
                continue;
            double overlap = iou(det.bbox, gt.bbox);
            if (overlap >= iou_threshold && overlap > best_iou) {
                best_iou = overlap;
                best_gt = int(g);
            }
        }
        if (best_gt >= 0) {
            result.gt_matched[size_t(best_gt)] = true;
            result.is_tp[rank] = true;
        }
    }
    return result;
}

ApResult average_precision(const std::vector<DetectionRecord> &detections,
                           const std::vector<GroundTruthBox> &ground_truth,
                           double iou_threshold) {
    if (ground_truth.empty())
        throw std::invalid_argument("average_precision: no ground-truth boxes");

    MatchResult match = match_detections(detections, ground_truth, iou_threshold);
    int64_t total_gt = int64_t(ground_truth.size());

    ApResult result;
    int64_t tp = 0, fp = 0;
    for (size_t rank = 0; rank < match.order.size(); ++rank) {
        (match.is_tp[rank] ? tp : fp) += 1;
        PrPoint point;
        point.recall = double(tp) / double(total_gt);
        point.precision = double(tp) / double(tp + fp);
        point.threshold = detections[match.order[rank]].confidence;
        result.curve.points.push_back(point);
    }
    result.tp = tp;
    result.fp = fp;
    result.fn = total_gt - tp;

    // All-point interpolation: make precision non-increasing from the right,
    // then accumulate the area over recall steps.
    std::vector<PrPoint> pts = result.curve.points;
    double envelope = 0.0;
    for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
        envelope = std::max(envelope, it->precision);
        it->precision = envelope;
    }
    double ap = 0.0, prev_recall = 0.0;
    for (const PrPoint &p : pts) {
        ap += (p.recall - prev_recall) * p.precision;
        prev_recall = p.recall;
    }
    result.ap = ap;
    return result;
}

EvalReport evaluate(const std::vector<DetectionRecord> &detections,
                    const std::vector<GroundTruthBox> &ground_truth, double iou_threshold) {
    std::map<int, std::vector<GroundTruthBox>> gt_by_class;
    for (const GroundTruthBox &gt : ground_truth) gt_by_class[gt.class_id].push_back(gt);
    if (gt_by_class.empty()) throw std::invalid_argument("evaluate: no ground-truth boxes");

    std::map<int, std::vector<DetectionRecord>> det_by_class;
    for (const DetectionRecord &det : detections) det_by_class[det.class_id].push_back(det);

    EvalReport report;
    double sum = 0.0;
    for (const auto &[class_id, gts] : gt_by_class) {
        auto it = det_by_class.find(class_id);
        static const std::vector<DetectionRecord> kNone;
        ApResult ap = average_precision(it == det_by_class.end() ? kNone : it->second, gts,
                                        iou_threshold);
        sum += ap.ap;
        report.per_class.emplace_back(class_id, std::move(ap));
    }
    report.map = sum / double(report.per_class.size());
    return report;
}

namespace {

std::vector<DetectionRecord> parse_detection_lines(const std::string &text,
                                                   const std::string &source_name) {
    std::vector<DetectionRecord> records;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        DetectionRecord rec;
        std::istringstream ls(line);
        double x0, y0, x1, y1;
        if (!(ls >> rec.image_id >> rec.class_id >> rec.confidence >> x0 >> y0 >> x1 >> y1))
            throw std::runtime_error("parse_detections: " + source_name + ":" +
                                     std::to_string(line_no) +
                                     ": expected 'image_id class conf x_min y_min x_max y_max'");
        rec.bbox = {x0, y0, x1, y1};
        records.push_back(rec);
    }
    return records;
}

}  // namespace

std::vector<DetectionRecord> parse_detections(const std::string &text,
                                              const std::string &source_name) {
    size_t first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '[') {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(text);
        } catch (const std::exception &e) {
            throw std::runtime_error("parse_detections: " + source_name + ": invalid JSON: " +
                                     e.what());
        }
        std::vector<DetectionRecord> records;
        for (const auto &entry : doc) {
            DetectionRecord rec;
            rec.image_id = entry.at("image_id").get<int64_t>();
            rec.class_id = entry.at("category_id").get<int>() - 1;
            rec.confidence = entry.at("score").get<double>();
            const auto &b = entry.at("bbox");
            if (!b.is_array() || b.size() != 4)
                throw std::runtime_error("parse_detections: bbox must be [x, y, w, h]");
            double x = b[0].get<double>(), y = b[1].get<double>();
            rec.bbox = {x, y, x + b[2].get<double>(), y + b[3].get<double>()};
            records.push_back(rec);
        }
        return records;
    }
    return parse_detection_lines(text, source_name);
}

std::vector<DetectionRecord> load_detections(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_detections: cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_detections(buf.str(), path);
}

}  // namespace airforge
