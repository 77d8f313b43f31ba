#include "env/envmap.hpp"

#include <cmath>
#include <stdexcept>

#include "core/rng.hpp"

namespace airforge {

EnvMap::EnvMap(int w, int h, std::string name_)
    : width(w), height(h), radiance(size_t(w) * size_t(h)), name(std::move(name_)) {
    if (w <= 0 || h <= 0) throw std::invalid_argument("envmap dimensions must be positive");
    if (w != 2 * h) throw std::invalid_argument("equirectangular map requires width = 2 * height");
}

void EnvMap::validate() const {
    if (width != 2 * height || width <= 0)
        throw std::invalid_argument("equirectangular map requires width = 2 * height");
    if (radiance.size() != size_t(width) * size_t(height))
        throw std::invalid_argument("envmap texel count does not match dimensions");
    for (const Vec3 &v : radiance)
        if (!is_finite(v) || v.x < 0 || v.y < 0 || v.z < 0)
            throw std::invalid_argument("envmap radiance must be finite and >= 0");
}

Vec3 texel_direction(const EnvMap &map, int x, int y) {
    double u = (double(x) + 0.5) / map.width;
    double v = (double(y) + 0.5) / map.height;
    double phi = (u - 0.5) * 2.0 * kPi;
    double theta = v * kPi;
    double st = std::sin(theta);
    return {st * std::cos(phi), std::cos(theta), st * std::sin(phi)};
}

double texel_solid_angle(const EnvMap &map, int y) {
    double theta0 = kPi * double(y) / map.height;
    double theta1 = kPi * double(y + 1) / map.height;
    return (2.0 * kPi / map.width) * (std::cos(theta0) - std::cos(theta1));
}

Vec3 env_lookup(const EnvMap &map, const Vec3 &dir) {
    double phi = std::atan2(dir.z, dir.x);
    double theta = std::acos(std::clamp(dir.y, -1.0, 1.0));
    double u = phi / (2.0 * kPi) + 0.5;
    double v = theta / kPi;

    double tx = u * map.width - 0.5;
    double ty = v * map.height - 0.5;
    int x0 = int(std::floor(tx));
    int y0 = int(std::floor(ty));
    double fx = tx - x0;
    double fy = ty - y0;

    auto wrap_x = [&](int x) {
        x %= map.width;
        return x < 0 ? x + map.width : x;
    };
    auto clamp_y = [&](int y) { return std::clamp(y, 0, map.height - 1); };

    const Vec3 &c00 = map.at(wrap_x(x0), clamp_y(y0));
    const Vec3 &c10 = map.at(wrap_x(x0 + 1), clamp_y(y0));
    const Vec3 &c01 = map.at(wrap_x(x0), clamp_y(y0 + 1));
    const Vec3 &c11 = map.at(wrap_x(x0 + 1), clamp_y(y0 + 1));
    return lerp(lerp(c00, c10, fx), lerp(c01, c11, fx), fy);
}

const char *to_string(SkyCondition condition) {
    switch (condition) {
        case SkyCondition::ClearDay: return "clear_day";
        case SkyCondition::PartlyCloudy: return "partly_cloudy";
        case SkyCondition::Overcast: return "overcast";
        case SkyCondition::Twilight: return "twilight";
        case SkyCondition::DuskWarm: return "dusk_warm";
    }
    return "clear_day";
}

SkyCondition sky_condition_from_string(const std::string &name) {
    if (name == "clear_day") return SkyCondition::ClearDay;
    if (name == "partly_cloudy") return SkyCondition::PartlyCloudy;
    if (name == "overcast") return SkyCondition::Overcast;
    if (name == "twilight") return SkyCondition::Twilight;
    if (name == "dusk_warm") return SkyCondition::DuskWarm;
    throw std::invalid_argument("unknown sky condition '" + name + "'");
}

namespace {

double hash01_3(uint64_t key, int64_t x, int64_t y, int64_t z) {
    uint64_t h = hash_combine(hash_combine(hash_combine(key, uint64_t(x)), uint64_t(y)), uint64_t(z));
    return double(h >> 11) * 0x1.0p-53;
}

double smoothstep01(double t) { return t * t * (3.0 - 2.0 * t); }

// Trilinear value noise on the direction sphere; seam-free by construction.
double value_noise3(const Vec3 &p, uint64_t key) {
    double fx = std::floor(p.x), fy = std::floor(p.y), fz = std::floor(p.z);
    int64_t ix = int64_t(fx), iy = int64_t(fy), iz = int64_t(fz);
    double tx = smoothstep01(p.x - fx), ty = smoothstep01(p.y - fy), tz = smoothstep01(p.z - fz);
    double acc = 0.0;
    for (int dz = 0; dz <= 1; ++dz)
        for (int dy = 0; dy <= 1; ++dy)
            for (int dx = 0; dx <= 1; ++dx) {
                double w = (dx ? tx : 1 - tx) * (dy ? ty : 1 - ty) * (dz ? tz : 1 - tz);
                acc += w * hash01_3(key, ix + dx, iy + dy, iz + dz);
            }
    return acc;
}

double fbm3(const Vec3 &p, uint64_t key, int octaves) {
    double sum = 0.0, amp = 0.5, freq = 1.0, norm = 0.0;
    for (int o = 0; o < octaves; ++o) {
        sum += amp * value_noise3(p * freq, key + uint64_t(o));
        norm += amp;
        amp *= 0.5;
        freq *= 2.0;
    }
    return sum / norm;
}

struct SkyRecipe {
    Vec3 zenith, horizon, ground;
    double sun_intensity;
    double glow;        // forward-scatter halo strength
    double cloudiness;  // 0 = none
};

SkyRecipe recipe_for(SkyCondition condition) {
    switch (condition) {
        case SkyCondition::ClearDay:
            return {{0.22, 0.42, 0.95}, {0.80, 0.88, 1.05}, {0.28, 0.25, 0.20}, 30000.0, 12.0, 0.0};
        case SkyCondition::PartlyCloudy:
            return {{0.30, 0.45, 0.85}, {0.75, 0.80, 0.92}, {0.26, 0.24, 0.20}, 18000.0, 10.0, 0.55};
        case SkyCondition::Overcast:
            return {{0.45, 0.47, 0.52}, {0.60, 0.62, 0.66}, {0.20, 0.20, 0.19}, 250.0, 4.0, 0.85};
        case SkyCondition::Twilight:
            return {{0.015, 0.025, 0.08}, {0.16, 0.10, 0.12}, {0.03, 0.03, 0.035}, 900.0, 6.0, 0.0};
        case SkyCondition::DuskWarm:
            return {{0.10, 0.09, 0.22}, {0.95, 0.45, 0.18}, {0.10, 0.07, 0.06}, 6000.0, 14.0, 0.2};
    }
    return recipe_for(SkyCondition::ClearDay);
}

constexpr double kSunAngularRadius = 0.27 * kPi / 180.0;

}  // namespace

EnvMap synthesize_sky(SkyCondition condition, double sun_azimuth_deg, double sun_elevation_deg,
                      int width, uint64_t seed) {
    if (width < 64 || width % 2 != 0)
        throw std::invalid_argument("synthesize_sky: width must be even and >= 64");
    if (sun_elevation_deg < -10.0 || sun_elevation_deg > 90.0)
        throw std::invalid_argument("synthesize_sky: sun elevation out of [-10, 90]");

    SkyRecipe recipe = recipe_for(condition);
    double az = radians(sun_azimuth_deg), el = radians(sun_elevation_deg);
    Vec3 sun_dir{std::cos(el) * std::cos(az), std::sin(el), std::cos(el) * std::sin(az)};
    uint64_t noise_key = hash_combine(0x736b79u, seed);  // 'sky'

    std::string name = std::string(to_string(condition)) + "_" + std::to_string(seed);
    EnvMap map(width, width / 2, name);
    for (int y = 0; y < map.height; ++y) {
        for (int x = 0; x < map.width; ++x) {
            Vec3 dir = texel_direction(map, x, y);
            double cos_sun = std::clamp(dot(dir, sun_dir), -1.0, 1.0);
            double sun_angle = std::acos(cos_sun);
            Vec3 c;
            if (dir.y >= 0.0) {
                double t = std::pow(dir.y, 0.55);  // horizon -> zenith
                c = lerp(recipe.horizon, recipe.zenith, t);
                if (recipe.cloudiness > 0.0) {
                    double cov = fbm3(dir * 3.5, noise_key, 4);
                    double mask = smoothstep01(std::clamp(
                        (cov - (0.62 - 0.35 * recipe.cloudiness)) * 4.0, 0.0, 1.0));
                    Vec3 cloud = lerp(recipe.horizon * 1.15, recipe.zenith * 0.9 + Vec3(0.35), 0.4);
                    c = lerp(c, cloud, mask * recipe.cloudiness);
                }
            } else {
                double t = std::min(1.0, -dir.y * 4.0);
                c = lerp(recipe.horizon * 0.55, recipe.ground, t);
            }
            // Sun disc and halo light the ground side too (low elevations).
            double halo = std::exp(-sun_angle * sun_angle * 180.0);
            c += lerp(recipe.horizon, Vec3(1.0), 0.5) * (recipe.glow * halo);
            if (sun_angle < kSunAngularRadius && sun_elevation_deg >= 0.0)
                c += Vec3(1.0, 0.98, 0.92) * recipe.sun_intensity;
            map.at(x, y) = max(c, Vec3{});
        }
    }
    map.validate();
    return map;
}

}  // namespace airforge
