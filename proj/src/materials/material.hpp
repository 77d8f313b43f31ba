#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/math.hpp"
#include "core/rng.hpp"

namespace airforge {

enum class BsdfKind { Diffuse, Glossy, Glass, Translucent };
enum class PatternKind {
    Solid,
    Checker,
    Stripes,
    PolkaDots,
    VoronoiTiles,
    FbmNoise,
    WoodRings,
    CarbonWeave
};

const char *to_string(BsdfKind kind);
const char *to_string(PatternKind kind);
BsdfKind bsdf_kind_from_string(const std::string &name);
PatternKind pattern_kind_from_string(const std::string &name);

// One entry of a texture mixture: a scattering model plus surface pattern.
// roughness is present iff the BSDF is Glossy, ior iff Glass.
struct MaterialSpec {
    BsdfKind bsdf = BsdfKind::Diffuse;
    PatternKind pattern = PatternKind::Solid;
    Vec3 color_a{0.8, 0.8, 0.8};
    Vec3 color_b{0.2, 0.2, 0.2};
    double scale = 4.0;  // pattern frequency
    std::optional<double> roughness;
    std::optional<double> ior;
    int id = 0;

    void validate() const;
};

// The per-dataset set of materials objects get dressed with. Exactly one
// entry is the realistic carbon texture, kept in the pool as just another
// variation; the rest are split between solid-color shader materials and
// diffuse patterned ones.
struct TextureMixture {
    std::vector<MaterialSpec> entries;
    uint64_t seed = 0;

    void validate() const;
};

inline constexpr double kDefaultGlossyRoughness = 0.2;
inline constexpr double kDefaultGlassIor = 1.45;

// Deterministic for fixed (count, seed). Of the count entries: one carbon
// weave; of the remainder, half (rounded up) are Solid with a uniformly
// drawn BSDF kind, the rest Diffuse with a uniformly drawn non-solid
// pattern. All colors are uniform in [0,1]^3.
TextureMixture build_mixture(int count, uint64_t seed);

// Pure pattern evaluation; uv is wrapped modulo 1. Output in [0,1]^3.
Vec3 sample_pattern(const MaterialSpec &spec, Vec2 uv);

// Per-steradian reflectance f(wi, wo). Delta and transmissive lobes (Glass,
// Translucent) evaluate to zero; their transport happens in sample_bsdf.
// All direction arguments must be unit length (checked to 1e-3).
Vec3 eval_bsdf(const MaterialSpec &spec, const Vec3 &albedo, const Vec3 &wi, const Vec3 &wo,
               const Vec3 &n);

// Solid-angle density of sample_bsdf for the non-delta lobes; zero for
// Glass/Translucent. Used for multiple importance sampling.
double pdf_bsdf(const MaterialSpec &spec, const Vec3 &wi, const Vec3 &wo, const Vec3 &n);

struct BsdfSample {
    Vec3 wi;          // sampled incoming direction, unit
    Vec3 weight;      // f * cos / pdf, componentwise in [0, 1.05]
    bool delta = false;  // true when the lobe admits no solid-angle pdf
};

// Draws an incoming direction from the lobe and returns the throughput
// weight. Total internal reflection in Glass falls back to reflection.
BsdfSample sample_bsdf(const MaterialSpec &spec, const Vec3 &albedo, const Vec3 &wo, const Vec3 &n,
                       Rng &rng);

}  // namespace airforge
