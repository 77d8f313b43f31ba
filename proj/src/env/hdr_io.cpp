#include "env/hdr_io.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace airforge {

namespace {

using Rgbe = std::array<uint8_t, 4>;

Rgbe float_to_rgbe(const Vec3 &c) {
    double v = std::max(c.x, std::max(c.y, c.z));
    if (v < 1e-32) return {0, 0, 0, 0};
    int e = 0;
    double f = std::frexp(v, &e);  // v = f * 2^e, f in [0.5, 1)
    double scale = f * 256.0 / v;
    auto m = [&](double x) { return uint8_t(std::min(255.0, std::floor(x * scale + 0.5))); };
    return {m(c.x), m(c.y), m(c.z), uint8_t(e + 128)};
}

Vec3 rgbe_to_float(const Rgbe &p) {
    if (p[3] == 0) return {};
    double f = std::ldexp(1.0, int(p[3]) - (128 + 8));
    return {p[0] * f, p[1] * f, p[2] * f};
}

[[noreturn]] void truncated(const std::string &path) {
    throw std::runtime_error("load_hdr: truncated scanline data in '" + path + "'");
}

std::string file_stem(const std::string &path) {
    size_t slash = path.find_last_of("/\\");
    std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    size_t dot = base.find_last_of('.');
    return dot == std::string::npos ? base : base.substr(0, dot);
}

}  // namespace

EnvMap load_hdr(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_hdr: cannot open '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("load_hdr: empty file '" + path + "'");
    if (line.rfind("#?RADIANCE", 0) != 0 && line.rfind("#?RGBE", 0) != 0)
        throw std::runtime_error("load_hdr: bad magic in '" + path + "' (not a Radiance HDR file)");

    bool format_ok = false;
    while (std::getline(in, line) && !line.empty()) {
        if (line.rfind("FORMAT=", 0) == 0) {
            if (line != "FORMAT=32-bit_rle_rgbe")
                throw std::runtime_error("load_hdr: unsupported format '" + line + "'");
            format_ok = true;
        }
        // EXPOSURE and comment lines are ignored.
    }
    if (!format_ok) throw std::runtime_error("load_hdr: missing FORMAT line in '" + path + "'");

    if (!std::getline(in, line))
        throw std::runtime_error("load_hdr: missing resolution line in '" + path + "'");
    int w = 0, h = 0;
    if (std::sscanf(line.c_str(), "-Y %d +X %d", &h, &w) != 2 || w <= 0 || h <= 0)
        throw std::runtime_error("load_hdr: unsupported layout '" + line + "' (want '-Y h +X w')");

    std::vector<Rgbe> row(static_cast<size_t>(w));
    EnvMap map(w, h, file_stem(path));
    for (int y = 0; y < h; ++y) {
        Rgbe head;
        if (!in.read(reinterpret_cast<char *>(head.data()), 4)) truncated(path);
        if (head[0] == 2 && head[1] == 2 && ((int(head[2]) << 8) | head[3]) == w && w >= 8) {
            // Adaptive RLE: four channel planes, each run-length coded.
            for (int ch = 0; ch < 4; ++ch) {
                int x = 0;
                while (x < w) {
                    int code = in.get();
                    if (code == EOF) truncated(path);
                    if (code > 128) {  // run
                        int count = code - 128;
                        int value = in.get();
                        if (value == EOF || x + count > w) truncated(path);
                        for (int i = 0; i < count; ++i) row[size_t(x++)][size_t(ch)] = uint8_t(value);
                    } else {  // literal block
                        int count = code;
                        if (count == 0 || x + count > w) truncated(path);
                        for (int i = 0; i < count; ++i) {
                            int value = in.get();
                            if (value == EOF) truncated(path);
                            row[size_t(x++)][size_t(ch)] = uint8_t(value);
                        }
                    }
                }
            }
        } else if (head[0] == 1 && head[1] == 1 && head[2] == 1) {
            throw std::runtime_error("load_hdr: old-style RLE scanlines not supported in '" + path +
                                     "'");
        } else {
            // Flat scanline; the peeked 4 bytes are pixel 0.
            row[0] = head;
            for (int x = 1; x < w; ++x)
                if (!in.read(reinterpret_cast<char *>(row[size_t(x)].data()), 4)) truncated(path);
        }
        for (int x = 0; x < w; ++x) map.at(x, y) = rgbe_to_float(row[size_t(x)]);
    }
    map.validate();
    return map;
}

namespace {

void write_rle_channel(std::ofstream &out, const std::vector<Rgbe> &row, int ch) {
    int w = int(row.size());
    int x = 0;
    while (x < w) {
        // Find the next run of at least 4 identical bytes.
        int run_start = x;
        int run_len = 0;
        while (run_start < w) {
            run_len = 1;
            while (run_start + run_len < w && run_len < 127 &&
                   row[size_t(run_start + run_len)][size_t(ch)] == row[size_t(run_start)][size_t(ch)])
                ++run_len;
            if (run_len >= 4) break;
            run_start += run_len;
        }
        if (run_start >= w || run_len < 4) run_start = w;

        // Literal bytes up to the run.
        int lit = x;
        while (lit < run_start) {
            int count = std::min(128, run_start - lit);
            out.put(char(count));
            for (int i = 0; i < count; ++i) out.put(char(row[size_t(lit + i)][size_t(ch)]));
            lit += count;
        }
        if (run_start < w) {
            out.put(char(128 + run_len));
            out.put(char(row[size_t(run_start)][size_t(ch)]));
            x = run_start + run_len;
        } else {
            x = w;
        }
    }
}

}  // namespace

void write_hdr(const std::string &path, const EnvMap &map) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_hdr: cannot open '" + path + "' for writing");
    out << "#?RADIANCE\nFORMAT=32-bit_rle_rgbe\n\n-Y " << map.height << " +X " << map.width << "\n";

    std::vector<Rgbe> row(static_cast<size_t>(map.width));
    bool rle = map.width >= 8 && map.width <= 32767;
    for (int y = 0; y < map.height; ++y) {
        for (int x = 0; x < map.width; ++x) row[size_t(x)] = float_to_rgbe(map.at(x, y));
        if (rle) {
            out.put(char(2));
            out.put(char(2));
            out.put(char((map.width >> 8) & 0xff));
            out.put(char(map.width & 0xff));
            for (int ch = 0; ch < 4; ++ch) write_rle_channel(out, row, ch);
        } else {
            for (int x = 0; x < map.width; ++x)
                out.write(reinterpret_cast<const char *>(row[size_t(x)].data()), 4);
        }
    }
    if (!out) throw std::runtime_error("write_hdr: write failed for '" + path + "'");
}

}  // namespace airforge
