#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/math.hpp"

namespace airforge {

enum class AnchorDistance { Iou, Euclidean };

AnchorDistance anchor_distance_from_string(const std::string &name);

struct AnchorSet {
    std::vector<Vec2> centroids;     // (w, h), sorted by area ascending
    std::vector<int> assignment;     // input box -> centroid index
    double objective = 0.0;          // sum of distances to assigned centroids
    int iterations = 0;
};

// k-means++ seeding (D^2 weighting) followed by Lloyd iterations until the
// assignment reaches a fixpoint or 300 iterations. The iou distance is
// 1 - IoU of boxes co-anchored at the origin. An update that would raise
// the objective is rolled back and iteration stops, so the objective is
// non-increasing in every run. Deterministic for a fixed seed.
AnchorSet cluster_anchors(const std::vector<Vec2> &boxes, int k, AnchorDistance distance,
                          uint64_t seed);

// Objective trace for the same run; used by the monotonicity checks.
AnchorSet cluster_anchors(const std::vector<Vec2> &boxes, int k, AnchorDistance distance,
                          uint64_t seed, std::vector<double> *objective_trace);

}  // namespace airforge
