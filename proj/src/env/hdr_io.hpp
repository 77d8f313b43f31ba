#pragma once

#include <string>

#include "env/envmap.hpp"

namespace airforge {

// Radiance HDR (RGBE) reader. Accepts `-Y h +X w` orientation only; handles
// adaptive-RLE and flat scanlines. Error messages distinguish bad magic,
// unsupported layout and truncated data.
EnvMap load_hdr(const std::string &path);

// Writes adaptive-RLE scanlines (the common encoding) for widths in
// [8, 32767], flat RGBE otherwise.
void write_hdr(const std::string &path, const EnvMap &map);

}  // namespace airforge
