#include "materials/material.hpp"

#include <cmath>
#include <stdexcept>

namespace airforge {

const char *to_string(BsdfKind kind) {
    switch (kind) {
        case BsdfKind::Diffuse: return "diffuse";
        case BsdfKind::Glossy: return "glossy";
        case BsdfKind::Glass: return "glass";
        case BsdfKind::Translucent: return "translucent";
    }
    return "diffuse";
}

const char *to_string(PatternKind kind) {
    switch (kind) {
        case PatternKind::Solid: return "solid";
        case PatternKind::Checker: return "checker";
        case PatternKind::Stripes: return "stripes";
        case PatternKind::PolkaDots: return "polka_dots";
        case PatternKind::VoronoiTiles: return "voronoi_tiles";
        case PatternKind::FbmNoise: return "fbm_noise";
        case PatternKind::WoodRings: return "wood_rings";
        case PatternKind::CarbonWeave: return "carbon_weave";
    }
    return "solid";
}

BsdfKind bsdf_kind_from_string(const std::string &name) {
    if (name == "diffuse") return BsdfKind::Diffuse;
    if (name == "glossy") return BsdfKind::Glossy;
    if (name == "glass") return BsdfKind::Glass;
    if (name == "translucent") return BsdfKind::Translucent;
    throw std::invalid_argument("unknown bsdf kind '" + name + "'");
}

PatternKind pattern_kind_from_string(const std::string &name) {
    if (name == "solid") return PatternKind::Solid;
    if (name == "checker") return PatternKind::Checker;
    if (name == "stripes") return PatternKind::Stripes;
    if (name == "polka_dots") return PatternKind::PolkaDots;
    if (name == "voronoi_tiles") return PatternKind::VoronoiTiles;
    if (name == "fbm_noise") return PatternKind::FbmNoise;
    if (name == "wood_rings") return PatternKind::WoodRings;
    if (name == "carbon_weave") return PatternKind::CarbonWeave;
    throw std::invalid_argument("unknown pattern kind '" + name + "'");
}

void MaterialSpec::validate() const {
    auto in01 = [](const Vec3 &c) {
        return c.x >= 0 && c.x <= 1 && c.y >= 0 && c.y <= 1 && c.z >= 0 && c.z <= 1;
    };
    if (!in01(color_a) || !in01(color_b))
        throw std::invalid_argument("material colors must be in [0,1]^3");
    if (!(scale > 0)) throw std::invalid_argument("pattern scale must be positive");
    if ((bsdf == BsdfKind::Glossy) != roughness.has_value())
        throw std::invalid_argument("roughness must be present iff the bsdf is glossy");
    if ((bsdf == BsdfKind::Glass) != ior.has_value())
        throw std::invalid_argument("ior must be present iff the bsdf is glass");
    if (roughness && (*roughness < 0 || *roughness > 1))
        throw std::invalid_argument("roughness out of [0,1]");
    if (ior && (*ior <= 1 || *ior > 3)) throw std::invalid_argument("ior out of (1,3]");
}

void TextureMixture::validate() const {
    int carbon = 0;
    for (size_t i = 0; i < entries.size(); ++i) {
        if (entries[i].id != int(i)) throw std::invalid_argument("mixture ids must be 0..len-1");
        entries[i].validate();
        if (entries[i].pattern == PatternKind::CarbonWeave) {
            ++carbon;
            if (entries[i].bsdf != BsdfKind::Diffuse)
                throw std::invalid_argument("carbon weave entry must be diffuse");
        }
    }
    if (carbon != 1) throw std::invalid_argument("mixture must have exactly one carbon entry");
}

TextureMixture build_mixture(int count, uint64_t seed) {
    if (count < 1) throw std::invalid_argument("build_mixture: count must be >= 1");
    Rng rng = Rng::keyed({0x6d697874u, seed});  // 'mixt'

    auto draw_color = [&rng]() { return Vec3{rng.next_double(), rng.next_double(), rng.next_double()}; };

    int rest = count - 1;
    int solid_count = (rest + 1) / 2;
    int patterned_count = rest - solid_count;

    static const BsdfKind kShaderKinds[4] = {BsdfKind::Diffuse, BsdfKind::Glossy, BsdfKind::Glass,
                                             BsdfKind::Translucent};
    static const PatternKind kPatternKinds[6] = {PatternKind::Checker,     PatternKind::Stripes,
                                                 PatternKind::PolkaDots,   PatternKind::VoronoiTiles,
                                                 PatternKind::FbmNoise,    PatternKind::WoodRings};

    TextureMixture mix;
    mix.seed = seed;
    mix.entries.reserve(size_t(count));

    for (int i = 0; i < solid_count; ++i) {
        MaterialSpec m;
        m.bsdf = kShaderKinds[rng.next_below(4)];
        m.pattern = PatternKind::Solid;
        m.color_a = draw_color();
        m.color_b = draw_color();
        m.scale = 1.0;
        if (m.bsdf == BsdfKind::Glossy) m.roughness = kDefaultGlossyRoughness;
        if (m.bsdf == BsdfKind::Glass) m.ior = kDefaultGlassIor;
        mix.entries.push_back(m);
    }
    for (int i = 0; i < patterned_count; ++i) {
        MaterialSpec m;
        m.bsdf = BsdfKind::Diffuse;
        m.pattern = kPatternKinds[rng.next_below(6)];
        m.color_a = draw_color();
        m.color_b = draw_color();
        m.scale = rng.uniform(2.0, 10.0);
        mix.entries.push_back(m);
    }
    // The realistic carbon texture joins the pool as one more variation.
    {
        MaterialSpec m;
        m.bsdf = BsdfKind::Diffuse;
        m.pattern = PatternKind::CarbonWeave;
        m.color_a = {0.032, 0.032, 0.038};
        m.color_b = {0.085, 0.085, 0.095};
        m.scale = 48.0;
        mix.entries.push_back(m);
    }
    for (size_t i = 0; i < mix.entries.size(); ++i) mix.entries[i].id = int(i);
    mix.validate();
    return mix;
}

// ---------------------------------------------------------------------------
// Procedural patterns
// ---------------------------------------------------------------------------

namespace {

double hash01(uint64_t a, uint64_t b, uint64_t c) {
    uint64_t h = hash_combine(hash_combine(mix64(a), b), c);
    return double(h >> 11) * 0x1.0p-53;
}

double smoothstep01(double t) { return t * t * (3.0 - 2.0 * t); }

// Bilinear value noise over a hashed integer lattice, output in [0,1].
double value_noise(double x, double y, uint64_t key) {
    double fx = std::floor(x), fy = std::floor(y);
    int64_t ix = int64_t(fx), iy = int64_t(fy);
    double tx = smoothstep01(x - fx), ty = smoothstep01(y - fy);
    double v00 = hash01(key, uint64_t(ix), uint64_t(iy));
    double v10 = hash01(key, uint64_t(ix + 1), uint64_t(iy));
    double v01 = hash01(key, uint64_t(ix), uint64_t(iy + 1));
    double v11 = hash01(key, uint64_t(ix + 1), uint64_t(iy + 1));
    double a = v00 + (v10 - v00) * tx;
    double b = v01 + (v11 - v01) * tx;
    return a + (b - a) * ty;
}

double fbm(double x, double y, uint64_t key, int octaves) {
    double sum = 0.0, amp = 0.5, freq = 1.0, norm = 0.0;
    for (int o = 0; o < octaves; ++o) {
        sum += amp * value_noise(x * freq, y * freq, key + uint64_t(o));
        norm += amp;
        amp *= 0.5;
        freq *= 2.0;
    }
    return sum / norm;
}

int64_t ifloor(double v) { return int64_t(std::floor(v)); }

}  // namespace

Vec3 sample_pattern(const MaterialSpec &spec, Vec2 uv) {
    double u = uv.x - std::floor(uv.x);
    double v = uv.y - std::floor(uv.y);
    double sx = u * spec.scale, sy = v * spec.scale;
    uint64_t key = hash_combine(0x70617474u, uint64_t(spec.id));  // 'patt'

    switch (spec.pattern) {
        case PatternKind::Solid:
            return spec.color_a;
        case PatternKind::Checker:
            return ((ifloor(sx) + ifloor(sy)) & 1) == 0 ? spec.color_a : spec.color_b;
        case PatternKind::Stripes:
            return (ifloor(sx) & 1) == 0 ? spec.color_a : spec.color_b;
        case PatternKind::PolkaDots: {
            double fx = sx - std::floor(sx) - 0.5, fy = sy - std::floor(sy) - 0.5;
            return fx * fx + fy * fy < 0.32 * 0.32 ? spec.color_b : spec.color_a;
        }
        case PatternKind::VoronoiTiles: {
            int64_t cx = ifloor(sx), cy = ifloor(sy);
            double best = 1e30;
            uint64_t best_hash = 0;
            for (int64_t dy = -1; dy <= 1; ++dy) {
                for (int64_t dx = -1; dx <= 1; ++dx) {
                    int64_t gx = cx + dx, gy = cy + dy;
                    double px = double(gx) + hash01(key, uint64_t(gx), uint64_t(gy) * 2 + 1);
                    double py = double(gy) + hash01(key, uint64_t(gx), uint64_t(gy) * 2);
                    double d = (sx - px) * (sx - px) + (sy - py) * (sy - py);
                    if (d < best) {
                        best = d;
                        best_hash = hash_combine(key, uint64_t(gx * 73856093 + gy * 19349663));
                    }
                }
            }
            return (best_hash & 1) == 0 ? spec.color_a : spec.color_b;
        }
        case PatternKind::FbmNoise: {
            double t = fbm(sx, sy, key, 4);
            return lerp(spec.color_a, spec.color_b, std::clamp(t, 0.0, 1.0));
        }
        case PatternKind::WoodRings: {
            double rx = (u - 0.5) * spec.scale, ry = (v - 0.5) * spec.scale;
            double r = std::sqrt(rx * rx + ry * ry);
            r += 0.35 * fbm(sx, sy, key, 3);
            double phase = r - std::floor(r);
            double t = phase < 0.5 ? phase * 2.0 : (1.0 - phase) * 2.0;  // triangle wave
            return lerp(spec.color_a, spec.color_b, smoothstep01(t));
        }
        case PatternKind::CarbonWeave: {
            // 2x2 twill: each tow crosses over two, under two, shifting one
            // column per row.
            int64_t ix = ifloor(sx), iy = ifloor(sy);
            int64_t k = ((ix - iy) % 4 + 4) % 4;
            return k < 2 ? spec.color_a : spec.color_b;
        }
    }
    return spec.color_a;
}

// ---------------------------------------------------------------------------
// BSDF lobes
// ---------------------------------------------------------------------------

namespace {

void check_unit(const Vec3 &v, const char *what) {
    if (std::abs(length(v) - 1.0) > 1e-3)
        throw std::invalid_argument(std::string(what) + " must be unit length");
}

// Orthonormal basis with n as the z-axis (Duff et al. 2017).
void basis_from_normal(const Vec3 &n, Vec3 &t, Vec3 &b) {
    double sign = std::copysign(1.0, n.z);
    double a = -1.0 / (sign + n.z);
    double c = n.x * n.y * a;
    t = {1.0 + sign * n.x * n.x * a, sign * c, -sign * n.x};
    b = {c, sign + n.y * n.y * a, -n.y};
}

double ggx_alpha(const MaterialSpec &spec) {
    double r = spec.roughness.value_or(kDefaultGlossyRoughness);
    return std::max(1e-4, r * r);
}

double ggx_ndf(double alpha, double cos_h) {
    double a2 = alpha * alpha;
    double d = cos_h * cos_h * (a2 - 1.0) + 1.0;
    return a2 / (kPi * d * d);
}

double smith_lambda(double alpha, double cos_v) {
    double c2 = cos_v * cos_v;
    double tan2 = c2 > 0 ? (1.0 - c2) / c2 : 1e30;
    return 0.5 * (-1.0 + std::sqrt(1.0 + alpha * alpha * tan2));
}

double smith_g1(double alpha, double cos_v) { return 1.0 / (1.0 + smith_lambda(alpha, cos_v)); }

double smith_g2(double alpha, double cos_i, double cos_o) {
    return 1.0 / (1.0 + smith_lambda(alpha, cos_i) + smith_lambda(alpha, cos_o));
}

Vec3 schlick_fresnel(const Vec3 &f0, double cos_theta) {
    double m = std::clamp(1.0 - cos_theta, 0.0, 1.0);
    double m2 = m * m;
    return f0 + (Vec3{1, 1, 1} - f0) * (m2 * m2 * m);
}

double fresnel_dielectric(double cos_i, double eta) {
    // eta = ior_transmitted / ior_incident; cos_i >= 0.
    double sin2_t = (1.0 - cos_i * cos_i) / (eta * eta);
    if (sin2_t >= 1.0) return 1.0;  // total internal reflection
    double cos_t = std::sqrt(1.0 - sin2_t);
    double rs = (cos_i - eta * cos_t) / (cos_i + eta * cos_t);
    double rp = (eta * cos_i - cos_t) / (eta * cos_i + cos_t);
    return 0.5 * (rs * rs + rp * rp);
}

Vec3 cosine_sample_hemisphere(const Vec3 &n, Rng &rng) {
    double u1 = rng.next_double(), u2 = rng.next_double();
    double r = std::sqrt(u1);
    double phi = 2.0 * kPi * u2;
    double z = std::sqrt(std::max(0.0, 1.0 - u1));
    Vec3 t, b;
    basis_from_normal(n, t, b);
    return normalize(t * (r * std::cos(phi)) + b * (r * std::sin(phi)) + n * z);
}

// Heitz 2018 VNDF sampling of the GGX distribution of visible normals.
Vec3 sample_ggx_vndf(const Vec3 &wo_local, double alpha, double u1, double u2) {
    Vec3 vh = normalize(Vec3{alpha * wo_local.x, alpha * wo_local.y, wo_local.z});
    double lensq = vh.x * vh.x + vh.y * vh.y;
    Vec3 T1 = lensq > 1e-18 ? Vec3{-vh.y, vh.x, 0.0} / std::sqrt(lensq) : Vec3{1, 0, 0};
    Vec3 T2 = cross(vh, T1);
    double r = std::sqrt(u1);
    double phi = 2.0 * kPi * u2;
    double t1 = r * std::cos(phi);
    double t2 = r * std::sin(phi);
    double s = 0.5 * (1.0 + vh.z);
    t2 = (1.0 - s) * std::sqrt(std::max(0.0, 1.0 - t1 * t1)) + s * t2;
    Vec3 nh = T1 * t1 + T2 * t2 + vh * std::sqrt(std::max(0.0, 1.0 - t1 * t1 - t2 * t2));
    return normalize(Vec3{alpha * nh.x, alpha * nh.y, std::max(1e-9, nh.z)});
}

Vec3 refract_dir(const Vec3 &wo, const Vec3 &n, double inv_eta) {
    // wo points away from the surface on the n side; inv_eta = eta_i/eta_t.
    double cos_i = dot(wo, n);
    double sin2_t = inv_eta * inv_eta * std::max(0.0, 1.0 - cos_i * cos_i);
    if (sin2_t >= 1.0) return reflect(-wo, n);  // TIR fallback
    double cos_t = std::sqrt(1.0 - sin2_t);
    return normalize(-wo * inv_eta + n * (inv_eta * cos_i - cos_t));
}

}  // namespace

Vec3 eval_bsdf(const MaterialSpec &spec, const Vec3 &albedo, const Vec3 &wi, const Vec3 &wo,
               const Vec3 &n) {
    check_unit(wi, "wi");
    check_unit(wo, "wo");
    check_unit(n, "n");
    double cos_i = dot(wi, n), cos_o = dot(wo, n);
    switch (spec.bsdf) {
        case BsdfKind::Diffuse:
            if (cos_i <= 0 || cos_o <= 0) return Vec3{};
            return albedo * (1.0 / kPi);
        case BsdfKind::Glossy: {
            if (cos_i <= 0 || cos_o <= 0) return Vec3{};
            Vec3 h = normalize(wi + wo);
            double alpha = ggx_alpha(spec);
            double d = ggx_ndf(alpha, dot(n, h));
            double g = smith_g2(alpha, cos_i, cos_o);
            Vec3 f = schlick_fresnel(albedo, dot(wo, h));
            return f * (d * g / (4.0 * cos_i * cos_o));
        }
        case BsdfKind::Glass:
        case BsdfKind::Translucent:
            return Vec3{};  // delta / transport lobes, handled in sampling
    }
    return Vec3{};
}

double pdf_bsdf(const MaterialSpec &spec, const Vec3 &wi, const Vec3 &wo, const Vec3 &n) {
    double cos_i = dot(wi, n), cos_o = dot(wo, n);
    switch (spec.bsdf) {
        case BsdfKind::Diffuse:
            if (cos_i <= 0 || cos_o <= 0) return 0.0;
            return cos_i / kPi;
        case BsdfKind::Glossy: {
            if (cos_i <= 0 || cos_o <= 0) return 0.0;
            Vec3 h = normalize(wi + wo);
            double alpha = ggx_alpha(spec);
            return smith_g1(alpha, cos_o) * ggx_ndf(alpha, dot(n, h)) / (4.0 * cos_o);
        }
        case BsdfKind::Glass:
        case BsdfKind::Translucent:
            return 0.0;
    }
    return 0.0;
}

BsdfSample sample_bsdf(const MaterialSpec &spec, const Vec3 &albedo, const Vec3 &wo, const Vec3 &n,
                       Rng &rng) {
    check_unit(wo, "wo");
    check_unit(n, "n");
    switch (spec.bsdf) {
        case BsdfKind::Diffuse: {
            // Cosine sampling cancels f*cos/pdf down to the albedo.
            Vec3 wi = cosine_sample_hemisphere(n, rng);
            return {wi, albedo, false};
        }
        case BsdfKind::Glossy: {
            double cos_o = dot(wo, n);
            if (cos_o <= 0) return {reflect(-wo, n), Vec3{}, false};
            Vec3 t, b;
            basis_from_normal(n, t, b);
            Vec3 wo_local{dot(wo, t), dot(wo, b), cos_o};
            double alpha = ggx_alpha(spec);
            Vec3 h_local = sample_ggx_vndf(wo_local, alpha, rng.next_double(), rng.next_double());
            Vec3 h = t * h_local.x + b * h_local.y + n * h_local.z;
            Vec3 wi = reflect(-wo, h);
            double cos_i = dot(wi, n);
            if (cos_i <= 0) return {wi, Vec3{}, false};
            // VNDF sampling: weight reduces to F * G2/G1(wo), <= 1.
            Vec3 f = schlick_fresnel(albedo, dot(wo, h));
            double w = smith_g2(alpha, cos_i, cos_o) * (1.0 + smith_lambda(alpha, cos_o));
            return {wi, f * std::min(w, 1.05), false};
        }
        case BsdfKind::Glass: {
            double ior = spec.ior.value_or(kDefaultGlassIor);
            double cos_o = dot(wo, n);
            Vec3 n_fwd = cos_o >= 0 ? n : -n;
            double eta = cos_o >= 0 ? ior : 1.0 / ior;  // transmitted / incident
            double fr = fresnel_dielectric(std::abs(cos_o), eta);
            if (rng.next_double() < fr) return {reflect(-wo, n_fwd), albedo, true};
            return {refract_dir(wo, n_fwd, 1.0 / eta), albedo, true};
        }
        case BsdfKind::Translucent: {
            // Cosine lobe on the far side of the surface.
            Vec3 n_fwd = dot(wo, n) >= 0 ? n : -n;
            Vec3 wi = cosine_sample_hemisphere(-n_fwd, rng);
            return {wi, albedo, true};
        }
    }
    return {n, Vec3{}, false};
}

}  // namespace airforge
