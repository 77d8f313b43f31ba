#include "eval/anchors.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

#include "core/rng.hpp"

namespace airforge {

AnchorDistance anchor_distance_from_string(const std::string &name) {
    if (name == "iou") return AnchorDistance::Iou;
    if (name == "euclidean") return AnchorDistance::Euclidean;
    throw std::invalid_argument("unknown anchor distance '" + name + "' (want iou|euclidean)");
}

namespace {

// Squared Euclidean for the euclidean metric (the mean is its exact
// minimizer), 1 - IoU of origin-anchored boxes for the iou metric.
double box_distance(const Vec2 &a, const Vec2 &b, AnchorDistance metric) {
    if (metric == AnchorDistance::Euclidean) {
        double dw = a.x - b.x, dh = a.y - b.y;
        return dw * dw + dh * dh;
    }
    double inter = std::min(a.x, b.x) * std::min(a.y, b.y);
    double uni = a.x * a.y + b.x * b.y - inter;
    return uni > 0.0 ? 1.0 - inter / uni : 1.0;
}

int nearest_centroid(const Vec2 &box, const std::vector<Vec2> &centroids, AnchorDistance metric,
                     double *distance_out = nullptr) {
    int best = 0;
    double best_d = box_distance(box, centroids[0], metric);
    for (int c = 1; c < int(centroids.size()); ++c) {
        double d = box_distance(box, centroids[size_t(c)], metric);
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    if (distance_out) *distance_out = best_d;
    return best;
}

}  // namespace

AnchorSet cluster_anchors(const std::vector<Vec2> &boxes, int k, AnchorDistance metric,
                          uint64_t seed) {
    return cluster_anchors(boxes, k, metric, seed, nullptr);
}

AnchorSet cluster_anchors(const std::vector<Vec2> &boxes, int k, AnchorDistance metric,
                          uint64_t seed, std::vector<double> *objective_trace) {
    if (boxes.empty()) throw std::invalid_argument("cluster_anchors: empty input");
    if (k < 1) throw std::invalid_argument("cluster_anchors: k must be >= 1");
    std::set<std::pair<double, double>> distinct;
    for (const Vec2 &b : boxes) distinct.emplace(b.x, b.y);
    if (size_t(k) > distinct.size())
        throw std::invalid_argument("cluster_anchors: k = " + std::to_string(k) +
                                    " exceeds the " + std::to_string(distinct.size()) +
                                    " distinct boxes");

    Rng rng = Rng::keyed({0x616e6368u, seed});  // 'anch'
    size_t n = boxes.size();

    // k-means++ seeding: each next seed drawn with probability proportional
    // to its distance from the nearest seed so far.
    std::vector<Vec2> centroids;
    centroids.push_back(boxes[rng.next_below(n)]);
    std::vector<double> min_dist(n);
    while (int(centroids.size()) < k) {
        double total = 0.0;
        for (size_t i = 0; i < n; ++i) {
            nearest_centroid(boxes[i], centroids, metric, &min_dist[i]);
            total += min_dist[i];
        }
        size_t pick = 0;
        if (total > 0.0) {
            double target = rng.next_double() * total;
            double acc = 0.0;
            pick = n - 1;
            for (size_t i = 0; i < n; ++i) {
                acc += min_dist[i];
                if (acc >= target && min_dist[i] > 0.0) {
                    pick = i;
                    break;
                }
            }
        } else {
            pick = rng.next_below(n);
        }
        centroids.push_back(boxes[pick]);
    }

    auto assign = [&](const std::vector<Vec2> &cents, std::vector<int> &assignment) {
        double objective = 0.0;
        for (size_t i = 0; i < n; ++i) {
            double d;
            assignment[i] = nearest_centroid(boxes[i], cents, metric, &d);
            objective += d;
        }
        return objective;
    };

    std::vector<int> assignment(n);
    double objective = assign(centroids, assignment);
    if (objective_trace) objective_trace->push_back(objective);

    int iterations = 0;
    for (; iterations < 300; ++iterations) {
        // Mean update; an emptied cluster grabs the point farthest from its
        // current centroid.
        std::vector<Vec2> next(centroids.size(), Vec2{0, 0});
        std::vector<int> counts(centroids.size(), 0);
        for (size_t i = 0; i < n; ++i) {
            next[size_t(assignment[i])] = next[size_t(assignment[i])] + boxes[i];
            counts[size_t(assignment[i])]++;
        }
        for (size_t c = 0; c < next.size(); ++c) {
            if (counts[c] > 0) {
                next[c] = next[c] * (1.0 / counts[c]);
            } else {
                size_t farthest = 0;
                double worst = -1.0;
                for (size_t i = 0; i < n; ++i) {
                    double d = box_distance(boxes[i], centroids[size_t(assignment[i])], metric);
                    if (d > worst) {
                        worst = d;
                        farthest = i;
                    }
                }
                next[c] = boxes[farthest];
            }
        }

        std::vector<int> next_assignment(n);
        double next_objective = assign(next, next_assignment);
        if (next_objective > objective + 1e-12) break;  // roll back, keep monotone

        bool converged = next_assignment == assignment && next_objective >= objective - 1e-15;
        centroids = std::move(next);
        objective = next_objective;
        assignment = std::move(next_assignment);
        if (objective_trace) objective_trace->push_back(objective);
        if (converged) break;
    }

    // Report anchors small to large.
    std::vector<int> order(centroids.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return centroids[size_t(a)].x * centroids[size_t(a)].y <
               centroids[size_t(b)].x * centroids[size_t(b)].y;
    });
    std::vector<int> rank(centroids.size());
    for (size_t i = 0; i < order.size(); ++i) rank[size_t(order[i])] = int(i);

    AnchorSet result;
    result.centroids.resize(centroids.size());
    for (size_t c = 0; c < centroids.size(); ++c)
        result.centroids[size_t(rank[c])] = centroids[c];
    result.assignment.resize(n);
    for (size_t i = 0; i < n; ++i) result.assignment[i] = rank[size_t(assignment[i])];
    result.objective = objective;
    result.iterations = iterations;
    return result;
}

}  // namespace airforge
