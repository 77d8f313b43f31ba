#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "env/envmap.hpp"
#include "sampler/plan.hpp"
#include "scene/uav_factory.hpp"

namespace airforge {

inline constexpr const char *kToolVersion = "0.1.0";

struct ModelConfig {
    enum class Type { Uav, Obj };
    std::string id;
    Type type = Type::Uav;
    UavParams uav;
    std::string obj_path;  // Type::Obj only
};

struct EnvironmentConfig {
    enum class Type { Sky, Hdr };
    std::string id;
    Type type = Type::Sky;
    SkyCondition condition = SkyCondition::ClearDay;
    double sun_azimuth_deg = 40.0;
    double sun_elevation_deg = 35.0;
    int width = 256;
    uint64_t seed = 0;
    std::string hdr_path;  // Type::Hdr only
};

struct RenderSettings {
    int width = 608;
    int height = 608;
    int spp = 512;
    int max_depth = 5;
    double exposure = 1.0;
    double fov_deg = 60.0;
};

// Everything a generate run needs. Omitted sections fall back to the
// built-in asset pack (one quadcopter model, the ten synthesized skies,
// 32 textures, one image per combination).
struct PipelineConfig {
    uint64_t seed = 1;
    int texture_count = 32;
    uint64_t texture_seed = 1;
    std::vector<ModelConfig> models;
    std::vector<EnvironmentConfig> environments;
    int64_t target_images = 0;  // 0 = one image per combination
    ParamRanges ranges;
    RenderSettings render;

    void validate() const;

    // Normalized form with defaults applied and keys sorted; the basis of
    // config_hash, so semantically equal configs hash equally.
    nlohmann::json canonical_json() const;
    std::string config_hash() const;
};

// The built-in asset pack: ten parametric quad/hexacopters and ten
// synthesized lighting conditions (five conditions, two sun geometries).
std::vector<ModelConfig> builtin_models();
std::vector<EnvironmentConfig> builtin_environments();

PipelineConfig config_from_json(const nlohmann::json &doc, const std::string &base_dir = "");
PipelineConfig load_config(const std::string &path);

Mesh materialize_model(const ModelConfig &model);
EnvMap materialize_environment(const EnvironmentConfig &env);

}  // namespace airforge
