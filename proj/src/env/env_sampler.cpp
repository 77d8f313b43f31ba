#include "env/env_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "core/color.hpp"

namespace airforge {

EnvSampler::EnvSampler(const EnvMap &map) : map_(&map) {
    map.validate();
    int w = map.width, h = map.height;
    texel_probability_.assign(size_t(w) * h, 0.0);
    cond_cdf_.assign(size_t(w) * h, 0.0);
    row_cdf_.assign(size_t(h), 0.0);

    std::vector<double> row_sum(size_t(h), 0.0);
    double total = 0.0;
    for (int y = 0; y < h; ++y) {
        double omega = texel_solid_angle(map, y);
        double acc = 0.0;
        for (int x = 0; x < w; ++x) {
            double wgt = luminance(map.at(x, y)) * omega;
            texel_probability_[size_t(y) * w + x] = wgt;
            acc += wgt;
            cond_cdf_[size_t(y) * w + x] = acc;
        }
        row_sum[size_t(y)] = acc;
        total += acc;
    }
    if (!(total > 0.0))
        throw std::invalid_argument("EnvSampler: map has no positive luminance to sample");

    double acc = 0.0;
    for (int y = 0; y < h; ++y) {
        acc += row_sum[size_t(y)];
        row_cdf_[size_t(y)] = acc / total;
        if (row_sum[size_t(y)] > 0.0) {
            double inv = 1.0 / row_sum[size_t(y)];
            for (int x = 0; x < w; ++x) cond_cdf_[size_t(y) * w + x] *= inv;
        }
        cond_cdf_[size_t(y) * w + (w - 1)] = 1.0;
    }
    row_cdf_[size_t(h) - 1] = 1.0;
    for (double &p : texel_probability_) p /= total;
}

EnvDirSample EnvSampler::sample(Rng &rng) const {
    const EnvMap &map = *map_;
    int w = map.width, h = map.height;

    double u1 = rng.next_double();
    int y = int(std::lower_bound(row_cdf_.begin(), row_cdf_.end(), u1) - row_cdf_.begin());
    y = std::min(y, h - 1);
    const double *row = &cond_cdf_[size_t(y) * w];
    double u2 = rng.next_double();
    int x = int(std::lower_bound(row, row + w, u2) - row);
    x = std::min(x, w - 1);

    // Uniform in longitude within the texel; latitude sampled with the
    // sin(theta) density so the per-texel pdf is exactly constant.
    double u = (double(x) + rng.next_double()) / w;
    double cos0 = std::cos(kPi * double(y) / h);
    double cos1 = std::cos(kPi * double(y + 1) / h);
    double ct = cos0 + (cos1 - cos0) * rng.next_double();
    double theta = std::acos(std::clamp(ct, -1.0, 1.0));
    double phi = (u - 0.5) * 2.0 * kPi;
    double st = std::sin(theta);
    Vec3 dir{st * std::cos(phi), ct, st * std::sin(phi)};

    double density = texel_probability_[size_t(y) * w + x] / texel_solid_angle(map, y);
    return {dir, env_lookup(map, dir), density};
}

double EnvSampler::pdf(const Vec3 &dir) const {
    const EnvMap &map = *map_;
    double phi = std::atan2(dir.z, dir.x);
    double theta = std::acos(std::clamp(dir.y, -1.0, 1.0));
    double u = phi / (2.0 * kPi) + 0.5;
    double v = theta / kPi;
    int x = std::clamp(int(u * map.width), 0, map.width - 1);
    int y = std::clamp(int(v * map.height), 0, map.height - 1);
    return texel_probability_[size_t(y) * map.width + x] / texel_solid_angle(map, y);
}

}  // namespace airforge
