#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/math.hpp"

namespace airforge {

// Linear-light RGB grid, row-major, row 0 at the top.
struct ImageRgb {
    int width = 0;
    int height = 0;
    std::vector<Vec3> pixels;

    ImageRgb() = default;
    ImageRgb(int w, int h, Vec3 fill = Vec3{}) : width(w), height(h), pixels(size_t(w) * h, fill) {}

    Vec3 &at(int x, int y) { return pixels[size_t(y) * width + x]; }
    const Vec3 &at(int x, int y) const { return pixels[size_t(y) * width + x]; }
};

// 8-bit sRGB image, interleaved RGB.
struct Image8 {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> pixels;

    Image8() = default;
    Image8(int w, int h) : width(w), height(h), pixels(size_t(w) * h * 3, 0) {}

    uint8_t *at(int x, int y) { return &pixels[(size_t(y) * width + x) * 3]; }
    const uint8_t *at(int x, int y) const { return &pixels[(size_t(y) * width + x) * 3]; }
};

void write_png(const std::string &path, const Image8 &image);
Image8 read_png(const std::string &path);

// Portable float map, 'PF' header, little-endian (scale -1), bottom-up rows.
void write_pfm(const std::string &path, const ImageRgb &image);
ImageRgb read_pfm(const std::string &path);

}  // namespace airforge
