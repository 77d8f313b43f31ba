#pragma once

#include <string>

#include "core/image.hpp"

namespace airforge {

enum class IllumMode { Overexposed, Underexposed };

IllumMode illum_mode_from_string(const std::string &name);
const char *to_string(IllumMode mode);

inline constexpr double kDefaultOverexposeStrength = 2.5;
inline constexpr double kDefaultUnderexposeStrength = 0.4;
double default_illum_strength(IllumMode mode);

// Exposure scaling in linear light: decode sRGB, multiply by strength,
// clamp and re-encode. Deterministic and monotone in the pixel values.
Image8 perturb_illumination(const Image8 &image, IllumMode mode, double strength);

}  // namespace airforge
