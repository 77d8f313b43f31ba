#include "sampler/plan.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "core/rng.hpp"

namespace airforge {

void ParamRanges::validate() const {
    auto check = [](const Interval &iv, const char *name) {
        if (!(iv.lo <= iv.hi))
            throw std::invalid_argument(std::string("range ") + name + ": low must be <= high");
    };
    check(pitch, "pitch");
    check(roll, "roll");
    check(yaw, "yaw");
    check(distance, "distance");
    if (objects_per_image.lo < 1 || objects_per_image.lo > objects_per_image.hi)
        throw std::invalid_argument("range objects_per_image: need 1 <= low <= high");
    if (!(distance.lo > 0)) throw std::invalid_argument("range distance: must be positive");
}

void DatasetPlan::validate() const {
    if (models.empty() || environments.empty() || mixture_size < 1)
        throw std::invalid_argument("plan needs at least one model, environment and texture");
    if (poses_per_combo < 1 || yaw_steps < 1)
        throw std::invalid_argument("plan pose/yaw counts must be >= 1");
    if (target_images != combos() * poses_per_combo * yaw_steps)
        throw std::invalid_argument("plan target_images does not match its factors");
    ranges.validate();
}

DatasetPlan make_plan(std::vector<std::string> models, std::vector<std::string> environments,
                      int mixture_size, int64_t target_images, const ParamRanges &ranges,
                      uint64_t seed) {
    if (models.empty() || environments.empty() || mixture_size < 1)
        throw std::invalid_argument("make_plan: needs at least one model, environment and texture");
    ranges.validate();

    int64_t base = int64_t(models.size()) * int64_t(environments.size()) * mixture_size;
    if (target_images < base)
        throw std::invalid_argument(
            "make_plan: target of " + std::to_string(target_images) +
            " is below one image per combination (" + std::to_string(base) + ")");

    // Round the per-combination count up to cover the request, then split it
    // into poses x yaw steps with the yaw count as close to 10 as the
    // divisors allow.
    int64_t per_combo = (target_images + base - 1) / base;
    int best_yaw = 1;
    for (int64_t d = 1; d * d <= per_combo; ++d) {
        if (per_combo % d != 0) continue;
        for (int64_t yaw : {d, per_combo / d}) {
            if (yaw > int64_t(1) << 30) continue;
            if (std::abs(yaw - 10) < std::abs(int64_t(best_yaw) - 10)) best_yaw = int(yaw);
        }
    }

    DatasetPlan plan;
    plan.models = std::move(models);
    plan.environments = std::move(environments);
    plan.mixture_size = mixture_size;
    plan.yaw_steps = best_yaw;
    plan.poses_per_combo = int(per_combo / best_yaw);
    plan.seed = seed;
    plan.requested_images = target_images;
    plan.target_images = base * per_combo;
    plan.ranges = ranges;
    plan.validate();
    return plan;
}

std::vector<double> yaw_schedule(int steps, const Interval &range) {
    if (steps < 1) throw std::invalid_argument("yaw_schedule: steps must be >= 1");
    std::vector<double> angles(static_cast<size_t>(steps));
    double step = (range.hi - range.lo) / double(steps);
    for (int i = 0; i < steps; ++i) angles[size_t(i)] = range.lo + step * i;
    return angles;
}

namespace {

// Conservative framing predicate: a point at radius rho from the orbit
// center stays at angular offset asin(rho/d) or less from the view axis for
// every orbit position, and its depth never drops below d - rho. The 0.62
// margin factor leaves headroom over the required 0.5 x projected radius.
bool framed_for_all_yaws(double rho, double distance, double object_radius,
                         double tan_half_min) {
    if (rho >= distance * 0.9) return false;
    double ndc_center = (rho / std::sqrt(distance * distance - rho * rho)) / tan_half_min;
    double depth_min = distance - rho;
    if (depth_min <= object_radius * 1.5) return false;
    double ndc_radius = (object_radius / depth_min) / tan_half_min;
    return ndc_center + 0.62 * ndc_radius <= 0.97;
}

double max_framed_radius(double distance, double object_radius, double tan_half_min) {
    double lo = 0.0, hi = distance;
    if (!framed_for_all_yaws(0.0, distance, object_radius, tan_half_min)) return -1.0;
    for (int i = 0; i < 40; ++i) {
        double mid = 0.5 * (lo + hi);
        (framed_for_all_yaws(mid, distance, object_radius, tan_half_min) ? lo : hi) = mid;
    }
    return lo;
}

bool boxes_separated(const Vec3 &a, const Vec3 &b, double xz_radius, double half_height) {
    return std::abs(a.x - b.x) >= 2.0 * xz_radius || std::abs(a.z - b.z) >= 2.0 * xz_radius ||
           std::abs(a.y - b.y) >= 2.0 * half_height;
}

// Draws object offsets around the origin: objects are layered vertically
// (half-height separation is cheap to satisfy) with random horizontal
// spread inside the framing radius.
std::vector<Vec3> draw_placement_offsets(int count, double distance,
                                         const PlacementGeometry &geom, double tan_half_min,
                                         Rng &rng) {
    double rho_max = max_framed_radius(distance, geom.object_radius, tan_half_min);
    if (rho_max < 0.0)
        throw std::runtime_error("placement failure: object does not fit the frustum at distance " +
                                 std::to_string(distance));

    for (int attempt = 0; attempt < 100; ++attempt) {
        double gap = 2.0 * geom.object_half_height * 1.15;
        double span = gap * (count - 1);
        std::vector<int> slot(static_cast<size_t>(count));
        std::iota(slot.begin(), slot.end(), 0);
        for (int i = count - 1; i > 0; --i)
            std::swap(slot[size_t(i)], slot[rng.next_below(uint64_t(i + 1))]);

        std::vector<Vec3> offsets(static_cast<size_t>(count));
        bool ok = true;
        for (int k = 0; k < count && ok; ++k) {
            double y = -span * 0.5 + gap * slot[size_t(k)] +
                       rng.uniform(-0.1, 0.1) * geom.object_half_height;
            double horiz_max = rho_max * rho_max - y * y;
            if (horiz_max <= 0.0) {
                ok = false;
                break;
            }
            horiz_max = std::sqrt(horiz_max);
            double r = horiz_max * std::sqrt(rng.next_double());
            double theta = rng.uniform(0.0, 2.0 * kPi);
            offsets[size_t(k)] = {r * std::cos(theta), y, r * std::sin(theta)};
        }
        if (!ok) continue;

        for (int i = 0; i < count && ok; ++i)
            for (int j = i + 1; j < count; ++j)
                if (!boxes_separated(offsets[size_t(i)], offsets[size_t(j)], geom.object_xz_radius,
                                     geom.object_half_height)) {
                    ok = false;
                    break;
                }
        if (!ok) continue;

        // Final check against the true orbit center (the offsets' centroid).
        Vec3 centroid{};
        for (const Vec3 &o : offsets) centroid += o;
        centroid = centroid / double(count);
        for (int k = 0; k < count && ok; ++k)
            if (!framed_for_all_yaws(length(offsets[size_t(k)] - centroid), distance,
                                     geom.object_radius, tan_half_min))
                ok = false;
        if (ok) return offsets;
    }
    throw std::runtime_error("placement failure: no feasible arrangement of " +
                             std::to_string(count) + " objects at distance " +
                             std::to_string(distance) + " after 100 attempts");
}

}  // namespace

std::vector<SceneSample> draw_samples(const DatasetPlan &plan) {
    plan.validate();
    double tan_half_h = std::tan(radians(plan.geometry.fov_deg) * 0.5);
    double tan_half_min = tan_half_h * std::min(1.0, 1.0 / plan.geometry.aspect);
    std::vector<double> yaws = yaw_schedule(plan.yaw_steps, plan.ranges.yaw);

    std::vector<SceneSample> samples;
    samples.reserve(size_t(plan.target_images));

    int64_t image_id = 0;
    int64_t combo_index = 0;
    for (int model = 0; model < int(plan.models.size()); ++model) {
        for (int env = 0; env < int(plan.environments.size()); ++env) {
            for (int mat = 0; mat < plan.mixture_size; ++mat, ++combo_index) {
                for (int pose = 0; pose < plan.poses_per_combo; ++pose) {
                    Rng rng = Rng::keyed({plan.seed, uint64_t(combo_index), uint64_t(pose)});
                    double pitch = rng.uniform(plan.ranges.pitch.lo, plan.ranges.pitch.hi);
                    double roll = rng.uniform(plan.ranges.roll.lo, plan.ranges.roll.hi);
                    double distance = rng.uniform(plan.ranges.distance.lo, plan.ranges.distance.hi);
                    int count = rng.uniform_int(plan.ranges.objects_per_image.lo,
                                                plan.ranges.objects_per_image.hi);

                    std::vector<Vec3> offsets =
                        draw_placement_offsets(count, distance, plan.geometry, tan_half_min, rng);
                    std::vector<RigidTransform> placements(static_cast<size_t>(count));
                    for (int k = 0; k < count; ++k) {
                        double heading = rng.uniform(0.0, 2.0 * kPi);
                        placements[size_t(k)] = {Mat3::rotation_y(heading), offsets[size_t(k)]};
                    }

                    for (double yaw : yaws) {
                        SceneSample s;
                        s.image_id = image_id++;
                        s.model_index = model;
                        s.environment_index = env;
                        s.material_id = mat;
                        s.pitch_deg = pitch;
                        s.roll_deg = roll;
                        s.yaw_deg = yaw;
                        s.distance_m = distance;
                        s.object_count = count;
                        s.placements = placements;
                        samples.push_back(std::move(s));
                    }
                }
            }
        }
    }
    return samples;
}

Vec3 cluster_centroid(const SceneSample &sample) {
    Vec3 c{};
    for (const RigidTransform &p : sample.placements) c += p.translation;
    return sample.placements.empty() ? c : c / double(sample.placements.size());
}

Camera sample_camera(const SceneSample &sample, double fov_deg, int width, int height) {
    Vec3 center = cluster_centroid(sample);
    double yaw = radians(sample.yaw_deg);
    double pitch = radians(sample.pitch_deg);
    Vec3 orbit_dir{std::cos(pitch) * std::cos(yaw), std::sin(pitch),
                   std::cos(pitch) * std::sin(yaw)};
    Vec3 eye = center + orbit_dir * sample.distance_m;
    RigidTransform pose = look_at(eye, center, {0, 1, 0});
    pose.rotation = pose.rotation * Mat3::rotation_z(radians(sample.roll_deg));
    Camera camera;
    camera.pose = pose;
    camera.hfov_deg = fov_deg;
    camera.width = width;
    camera.height = height;
    camera.validate();
    return camera;
}

}  // namespace airforge
