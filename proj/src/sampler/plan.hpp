#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scene/mesh.hpp"

namespace airforge {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

struct IntInterval {
    int lo = 0;
    int hi = 0;
};

// Scene-parameter ranges the sampler draws from.
struct ParamRanges {
    Interval pitch{-45.0, 45.0};
    Interval roll{-45.0, 45.0};
    Interval yaw{0.0, 360.0};
    Interval distance{2.0, 20.0};
    IntInterval objects_per_image{1, 3};

    void validate() const;
};

// Geometry the placement logic needs to keep objects framed: camera
// intrinsics plus conservative object size bounds (horizontal radius and
// half height cover any heading rotation).
struct PlacementGeometry {
    double fov_deg = 60.0;
    double aspect = 1.0;  // width / height
    double object_radius = 0.5;
    double object_xz_radius = 0.45;
    double object_half_height = 0.2;
};

// A fully resolved rendering schedule. target_images always satisfies
// models * environments * mixture_size * poses_per_combo * yaw_steps; when
// the requested count is not factorable it is rounded up and the original
// request kept in requested_images.
struct DatasetPlan {
    std::vector<std::string> models;
    std::vector<std::string> environments;
    int mixture_size = 1;
    int poses_per_combo = 1;
    int yaw_steps = 1;
    uint64_t seed = 0;
    int64_t target_images = 1;
    int64_t requested_images = 1;
    ParamRanges ranges;
    PlacementGeometry geometry;

    int64_t combos() const {
        return int64_t(models.size()) * int64_t(environments.size()) * mixture_size;
    }
    void validate() const;
};

DatasetPlan make_plan(std::vector<std::string> models, std::vector<std::string> environments,
                      int mixture_size, int64_t target_images, const ParamRanges &ranges,
                      uint64_t seed);

// Uniform grid over [lo, hi), endpoint excluded (so a full turn never
// duplicates its first angle).
std::vector<double> yaw_schedule(int steps, const Interval &range);

// One fully determined rendering configuration.
struct SceneSample {
    int64_t image_id = 0;
    int model_index = 0;
    int environment_index = 0;
    int material_id = 0;
    double pitch_deg = 0.0;
    double roll_deg = 0.0;
    double yaw_deg = 0.0;
    double distance_m = 0.0;
    int object_count = 1;
    std::vector<RigidTransform> placements;  // world poses of the objects
};

// Exhaustive model x environment x material enumeration, poses_per_combo
// pose draws per combination, each crossed with the yaw schedule. Pure
// function of the plan; placements keep objects inside the camera frustum
// for every yaw of the orbit and keep their boxes disjoint. Throws when a
// feasible placement is not found within 100 attempts.
std::vector<SceneSample> draw_samples(const DatasetPlan &plan);

// Centroid of the sample's object placements; the point the camera orbits.
Vec3 cluster_centroid(const SceneSample &sample);

// Camera pose for a sample: orbit position from (yaw, pitch, distance)
// around the cluster centroid, then roll about the view axis.
Camera sample_camera(const SceneSample &sample, double fov_deg, int width, int height);

}  // namespace airforge
