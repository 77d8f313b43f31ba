#include "eval/illum.hpp"

#include <array>
#include <stdexcept>

#include "core/color.hpp"

namespace airforge {

IllumMode illum_mode_from_string(const std::string &name) {
    if (name == "overexposed") return IllumMode::Overexposed;
    if (name == "underexposed") return IllumMode::Underexposed;
    throw std::invalid_argument("unknown illumination mode '" + name +
                                "' (want overexposed|underexposed)");
}

const char *to_string(IllumMode mode) {
    return mode == IllumMode::Overexposed ? "overexposed" : "underexposed";
}

double default_illum_strength(IllumMode mode) {
    return mode == IllumMode::Overexposed ? kDefaultOverexposeStrength
                                          : kDefaultUnderexposeStrength;
}

Image8 perturb_illumination(const Image8 &image, IllumMode mode, double strength) {
    (void)mode;  // the mode picks defaults and file suffixes; the transform is the scale
    if (!(strength > 0))
        throw std::invalid_argument("perturb_illumination: strength must be positive");

    // The transform only depends on the input byte, so one 256-entry table
    // covers the whole image.
    std::array<uint8_t, 256> map;
    for (int v = 0; v < 256; ++v)
        map[size_t(v)] = linear_to_srgb8(srgb8_to_linear(uint8_t(v)) * strength);

    Image8 out(image.width, image.height);
    for (size_t i = 0; i < image.pixels.size(); ++i) out.pixels[i] = map[image.pixels[i]];
    return out;
}

}  // namespace airforge
