#pragma once

#include "core/rng.hpp"
#include "env/envmap.hpp"

namespace airforge {

struct EnvDirSample {
    Vec3 dir;       // unit
    Vec3 radiance;  // env_lookup(map, dir)
    double pdf;     // per steradian, > 0
};

// Importance sampler over an environment map. Texels are weighted by
// luminance times their solid angle (that is the sin-latitude Jacobian
// integrated over the row band), so a uniform map yields the uniform
// sphere density 1/4pi exactly. Immutable after construction.
class EnvSampler {
public:
    // Throws std::invalid_argument when the map has no positive luminance.
    explicit EnvSampler(const EnvMap &map);

    EnvDirSample sample(Rng &rng) const;

    // Density the sampler assigns to a direction; matches sample() texel by
    // texel. Used as the light-side pdf in multiple importance sampling.
    double pdf(const Vec3 &dir) const;

    const EnvMap &map() const { return *map_; }

private:
    const EnvMap *map_;
    std::vector<double> row_cdf_;           // size height
    std::vector<double> cond_cdf_;          // size width*height, per-row cdf
    std::vector<double> texel_probability_;  // size width*height
};

}  // namespace airforge
