#include "pipeline/config.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <stdexcept>

#include "env/hdr_io.hpp"
#include "scene/obj_io.hpp"

namespace airforge {

namespace fs = std::filesystem;
using nlohmann::json;

void PipelineConfig::validate() const {
    if (texture_count < 1) throw std::invalid_argument("config: textures.count must be >= 1");
    if (target_images < 0) throw std::invalid_argument("config: target_images must be >= 0");
    if (render.width < 16 || render.height < 16)
        throw std::invalid_argument("config: render size must be at least 16x16");
    if (render.spp < 1 || render.max_depth < 1)
        throw std::invalid_argument("config: render.spp and render.max_depth must be >= 1");
    if (!(render.exposure > 0)) throw std::invalid_argument("config: render.exposure must be > 0");
    if (!(render.fov_deg > 0) || !(render.fov_deg < 180))
        throw std::invalid_argument("config: render.fov_deg must be in (0,180)");
    ranges.validate();
    std::set<std::string> ids;
    for (const ModelConfig &m : models)
        if (!ids.insert("m:" + m.id).second)
            throw std::invalid_argument("config: duplicate model id '" + m.id + "'");
    for (const EnvironmentConfig &e : environments)
        if (!ids.insert("e:" + e.id).second)
            throw std::invalid_argument("config: duplicate environment id '" + e.id + "'");
}

std::vector<ModelConfig> builtin_models() {
    // Ten stand-in airframes: six quadcopters, four hexacopters, spanning
    // roughly 0.7 m to 1.1 m tip to tip.
    std::vector<ModelConfig> models;
    struct Row {
        int arms;
        double arm, body, rotor, gear;
    };
    static const Row rows[10] = {
        {4, 0.34, 0.100, 0.110, 0.10}, {4, 0.30, 0.085, 0.095, 0.09},
        {4, 0.38, 0.110, 0.125, 0.12}, {4, 0.27, 0.080, 0.090, 0.08},
        {4, 0.42, 0.120, 0.130, 0.13}, {4, 0.32, 0.095, 0.105, 0.11},
        {6, 0.34, 0.105, 0.095, 0.10}, {6, 0.30, 0.090, 0.085, 0.09},
        {6, 0.40, 0.120, 0.105, 0.12}, {6, 0.36, 0.110, 0.100, 0.11},
    };
    for (int i = 0; i < 10; ++i) {
        ModelConfig m;
        m.id = (rows[i].arms == 4 ? "uav_quad_" : "uav_hexa_") + std::to_string(i);
        m.type = ModelConfig::Type::Uav;
        m.uav = {rows[i].arms, rows[i].arm, rows[i].body, rows[i].rotor, rows[i].gear,
                 uint64_t(100 + i)};
        models.push_back(std::move(m));
    }
    return models;
}

std::vector<EnvironmentConfig> builtin_environments() {
    std::vector<EnvironmentConfig> envs;
    static const SkyCondition conditions[5] = {SkyCondition::ClearDay, SkyCondition::PartlyCloudy,
                                               SkyCondition::Overcast, SkyCondition::Twilight,
                                               SkyCondition::DuskWarm};
    // Two sun geometries per condition: high noon-ish and low-angle.
    struct Sun {
        double azimuth, elevation;
    };
    static const Sun suns[2] = {{40.0, 52.0}, {210.0, 14.0}};
    int index = 0;
    for (SkyCondition condition : conditions) {
        for (int g = 0; g < 2; ++g) {
            EnvironmentConfig e;
            e.id = std::string(to_string(condition)) + "_" + std::to_string(g);
            e.type = EnvironmentConfig::Type::Sky;
            e.condition = condition;
            e.sun_azimuth_deg = suns[g].azimuth;
            e.sun_elevation_deg = suns[g].elevation;
            e.width = 256;
            e.seed = uint64_t(500 + index);
            envs.push_back(std::move(e));
            ++index;
        }
    }
    return envs;
}

namespace {

[[noreturn]] void config_fail(const std::string &what) {
    throw std::runtime_error("config: " + what);
}

Interval interval_from(const json &v, const char *name) {
    if (!v.is_array() || v.size() != 2) config_fail(std::string("ranges.") + name + " must be [lo, hi]");
    return {v[0].get<double>(), v[1].get<double>()};
}

std::string resolve_path(const std::string &path, const std::string &base_dir) {
    if (path.empty() || base_dir.empty()) return path;
    fs::path p(path);
    return p.is_absolute() ? path : (fs::path(base_dir) / p).string();
}

void check_keys(const json &obj, std::initializer_list<const char *> known,
                const std::string &where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char *k : known) ok = ok || it.key() == k;
        if (!ok) config_fail("unknown key '" + it.key() + "' in " + where);
    }
}

}  // namespace

PipelineConfig config_from_json(const json &doc, const std::string &base_dir) {
    if (!doc.is_object()) config_fail("top-level document must be an object");
    check_keys(doc, {"seed", "textures", "models", "environments", "target_images", "ranges",
                     "render"},
               "config");

    PipelineConfig config;
    config.seed = doc.value("seed", uint64_t(1));
    config.texture_seed = config.seed;

    if (doc.contains("textures")) {
        const json &t = doc.at("textures");
        check_keys(t, {"count", "seed"}, "textures");
        config.texture_count = t.value("count", 32);
        config.texture_seed = t.value("seed", config.seed);
    }

    if (doc.contains("models")) {
        for (const json &m : doc.at("models")) {
            check_keys(m, {"id", "type", "arms", "arm_length", "body_radius", "rotor_radius",
                           "gear_height", "seed", "path"},
                       "models[]");
            ModelConfig model;
            model.id = m.value("id", "model_" + std::to_string(config.models.size()));
            std::string type = m.value("type", m.contains("path") ? "obj" : "uav");
            if (type == "uav") {
                model.type = ModelConfig::Type::Uav;
                model.uav.arms = m.value("arms", 4);
                model.uav.arm_length = m.value("arm_length", 0.34);
                model.uav.body_radius = m.value("body_radius", 0.10);
                model.uav.rotor_radius = m.value("rotor_radius", 0.11);
                model.uav.gear_height = m.value("gear_height", 0.10);
                model.uav.seed = m.value("seed", uint64_t(config.models.size()));
            } else if (type == "obj") {
                model.type = ModelConfig::Type::Obj;
                if (!m.contains("path")) config_fail("models[] of type obj needs a path");
                model.obj_path = resolve_path(m.at("path").get<std::string>(), base_dir);
            } else {
                config_fail("models[].type must be uav or obj, got '" + type + "'");
            }
            config.models.push_back(std::move(model));
        }
    }
    if (config.models.empty()) config.models = {builtin_models()[0]};

    if (doc.contains("environments")) {
        for (const json &e : doc.at("environments")) {
            check_keys(e, {"id", "type", "condition", "sun_azimuth", "sun_elevation", "width",
                           "seed", "path"},
                       "environments[]");
            EnvironmentConfig env;
            env.id = e.value("id", "env_" + std::to_string(config.environments.size()));
            std::string type = e.value("type", e.contains("path") ? "hdr" : "sky");
            if (type == "sky") {
                env.type = EnvironmentConfig::Type::Sky;
                env.condition = sky_condition_from_string(e.value("condition", "clear_day"));
                env.sun_azimuth_deg = e.value("sun_azimuth", 40.0);
                env.sun_elevation_deg = e.value("sun_elevation", 35.0);
                env.width = e.value("width", 256);
                env.seed = e.value("seed", uint64_t(config.environments.size()));
            } else if (type == "hdr") {
                env.type = EnvironmentConfig::Type::Hdr;
                if (!e.contains("path")) config_fail("environments[] of type hdr needs a path");
                env.hdr_path = resolve_path(e.at("path").get<std::string>(), base_dir);
            } else {
                config_fail("environments[].type must be sky or hdr, got '" + type + "'");
            }
            config.environments.push_back(std::move(env));
        }
    }
    if (config.environments.empty()) config.environments = builtin_environments();

    config.target_images = doc.value("target_images", int64_t(0));

    if (doc.contains("ranges")) {
        const json &r = doc.at("ranges");
        check_keys(r, {"pitch", "roll", "yaw", "distance", "objects_per_image"}, "ranges");
        if (r.contains("pitch")) config.ranges.pitch = interval_from(r.at("pitch"), "pitch");
        if (r.contains("roll")) config.ranges.roll = interval_from(r.at("roll"), "roll");
        if (r.contains("yaw")) config.ranges.yaw = interval_from(r.at("yaw"), "yaw");
        if (r.contains("distance"))
            config.ranges.distance = interval_from(r.at("distance"), "distance");
        if (r.contains("objects_per_image")) {
            const json &o = r.at("objects_per_image");
            if (!o.is_array() || o.size() != 2)
                config_fail("ranges.objects_per_image must be [lo, hi]");
            config.ranges.objects_per_image = {o[0].get<int>(), o[1].get<int>()};
        }
    }

    if (doc.contains("render")) {
        const json &r = doc.at("render");
        check_keys(r, {"width", "height", "spp", "max_depth", "exposure", "fov_deg"}, "render");
        config.render.width = r.value("width", 608);
        config.render.height = r.value("height", 608);
        config.render.spp = r.value("spp", 512);
        config.render.max_depth = r.value("max_depth", 5);
        config.render.exposure = r.value("exposure", 1.0);
        config.render.fov_deg = r.value("fov_deg", 60.0);
    }

    config.validate();
    return config;
}

PipelineConfig load_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error &e) {
        throw std::runtime_error("config: " + path + ": " + e.what());
    }
    try {
        return config_from_json(doc, fs::path(path).parent_path().string());
    } catch (const std::exception &e) {
        throw std::runtime_error(std::string(e.what()) + " (in " + path + ")");
    }
}

json PipelineConfig::canonical_json() const {
    json doc;  // json object keys serialize sorted, which is the canon order
    doc["seed"] = seed;
    doc["textures"] = {{"count", texture_count}, {"seed", texture_seed}};
    doc["target_images"] = target_images;
    doc["ranges"] = {{"pitch", {ranges.pitch.lo, ranges.pitch.hi}},
                     {"roll", {ranges.roll.lo, ranges.roll.hi}},
                     {"yaw", {ranges.yaw.lo, ranges.yaw.hi}},
                     {"distance", {ranges.distance.lo, ranges.distance.hi}},
                     {"objects_per_image",
                      {ranges.objects_per_image.lo, ranges.objects_per_image.hi}}};
    doc["render"] = {{"width", render.width},   {"height", render.height},
                     {"spp", render.spp},       {"max_depth", render.max_depth},
                     {"exposure", render.exposure}, {"fov_deg", render.fov_deg}};
    doc["models"] = json::array();
    for (const ModelConfig &m : models) {
        if (m.type == ModelConfig::Type::Uav) {
            doc["models"].push_back({{"id", m.id},
                                     {"type", "uav"},
                                     {"arms", m.uav.arms},
                                     {"arm_length", m.uav.arm_length},
                                     {"body_radius", m.uav.body_radius},
                                     {"rotor_radius", m.uav.rotor_radius},
                                     {"gear_height", m.uav.gear_height},
                                     {"seed", m.uav.seed}});
        } else {
            doc["models"].push_back({{"id", m.id}, {"type", "obj"}, {"path", m.obj_path}});
        }
    }
    doc["environments"] = json::array();
    for (const EnvironmentConfig &e : environments) {
        if (e.type == EnvironmentConfig::Type::Sky) {
            doc["environments"].push_back({{"id", e.id},
                                           {"type", "sky"},
                                           {"condition", to_string(e.condition)},
                                           {"sun_azimuth", e.sun_azimuth_deg},
                                           {"sun_elevation", e.sun_elevation_deg},
                                           {"width", e.width},
                                           {"seed", e.seed}});
        } else {
            doc["environments"].push_back({{"id", e.id}, {"type", "hdr"}, {"path", e.hdr_path}});
        }
    }
    return doc;
}

std::string PipelineConfig::config_hash() const {
    std::string canon = canonical_json().dump();
    // FNV-1a, 64 bit.
    uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : canon) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Mesh materialize_model(const ModelConfig &model) {
    if (model.type == ModelConfig::Type::Uav) return generate_uav_mesh(model.uav);
    return load_obj(model.obj_path);
}

EnvMap materialize_environment(const EnvironmentConfig &env) {
    if (env.type == EnvironmentConfig::Type::Sky)
        return synthesize_sky(env.condition, env.sun_azimuth_deg, env.sun_elevation_deg, env.width,
                              env.seed);
    return load_hdr(env.hdr_path);
}

}  // namespace airforge
