#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/math.hpp"

namespace airforge {

// Equirectangular radiance map, row 0 at the zenith. Longitude phi maps to
// u = phi/2pi + 0.5 with phi = atan2(z, x); latitude theta (from +Y) maps
// to v = theta/pi. Linear radiance, arbitrary units, >= 0.
struct EnvMap {
    int width = 0;
    int height = 0;
    std::vector<Vec3> radiance;
    std::string name;

    EnvMap() = default;
    EnvMap(int w, int h, std::string name_ = "");

    Vec3 &at(int x, int y) { return radiance[size_t(y) * width + x]; }
    const Vec3 &at(int x, int y) const { return radiance[size_t(y) * width + x]; }

    void validate() const;
};

// Bilinear lookup with longitudinal wraparound and latitudinal clamping.
Vec3 env_lookup(const EnvMap &map, const Vec3 &dir);

// Direction of the center of texel (x, y).
Vec3 texel_direction(const EnvMap &map, int x, int y);

// Solid angle subtended by texel row y (same for every column).
double texel_solid_angle(const EnvMap &map, int y);

enum class SkyCondition { ClearDay, PartlyCloudy, Overcast, Twilight, DuskWarm };

const char *to_string(SkyCondition condition);
SkyCondition sky_condition_from_string(const std::string &name);

// Procedural gradient sky with a 0.27 degree sun disc, optional cloud
// luminance and a matte ground band. Deterministic for fixed arguments.
// width must be even and >= 64; sun elevation in [-10, 90] degrees.
EnvMap synthesize_sky(SkyCondition condition, double sun_azimuth_deg, double sun_elevation_deg,
                      int width, uint64_t seed);

}  // namespace airforge
