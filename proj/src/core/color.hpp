#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "core/math.hpp"

namespace airforge {

// IEC 61966-2-1 transfer function, linear -> nonlinear, both in [0,1].
inline double srgb_encode(double linear) {
    linear = std::clamp(linear, 0.0, 1.0);
    if (linear <= 0.0031308) return 12.92 * linear;
    return 1.055 * std::pow(linear, 1.0 / 2.4) - 0.055;
}

inline double srgb_decode(double encoded) {
    encoded = std::clamp(encoded, 0.0, 1.0);
    if (encoded <= 0.04045) return encoded / 12.92;
    return std::pow((encoded + 0.055) / 1.055, 2.4);
}

// Round half up to an 8-bit channel value.
inline uint8_t quantize8(double encoded01) {
    double v = std::clamp(encoded01, 0.0, 1.0) * 255.0;
    return uint8_t(std::min(255.0, std::floor(v + 0.5)));
}

inline uint8_t linear_to_srgb8(double linear) { return quantize8(srgb_encode(linear)); }

inline double srgb8_to_linear(uint8_t byte) { return srgb_decode(double(byte) / 255.0); }

// Rec. 709 luma weights on linear values.
inline double luminance(const Vec3 &rgb) {
    return 0.2126 * rgb.x + 0.7152 * rgb.y + 0.0722 * rgb.z;
}

}  // namespace airforge
