#pragma once

#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "core/math.hpp"
#include "scene/mesh.hpp"

namespace airforge::test {

namespace fs = std::filesystem;

// Self-deleting temp directory per test.
struct TempDir {
    fs::path path;

    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() /
               ("airforge_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string str() const { return path.string(); }
    std::string file(const std::string &name) const { return (path / name).string(); }
};

inline void write_text_file(const std::string &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

inline std::string read_text_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Latitude/longitude sphere, outward normals, unit UVs.
inline Mesh make_uv_sphere(const Vec3 &center, double radius, int stacks = 24, int slices = 48) {
    Mesh mesh;
    for (int i = 0; i <= stacks; ++i) {
        double theta = kPi * double(i) / stacks;
        for (int j = 0; j <= slices; ++j) {
            double phi = 2.0 * kPi * double(j) / slices;
            Vec3 n{std::sin(theta) * std::cos(phi), std::cos(theta),
                   std::sin(theta) * std::sin(phi)};
            mesh.positions.push_back(center + n * radius);
            mesh.normals.push_back(n);
            mesh.uvs.push_back({double(j) / slices, double(i) / stacks});
        }
    }
    int stride = slices + 1;
    for (int i = 0; i < stacks; ++i) {
        for (int j = 0; j < slices; ++j) {
            uint32_t a = uint32_t(i * stride + j), b = a + 1;
            uint32_t c = uint32_t((i + 1) * stride + j), d = c + 1;
            if (i > 0) mesh.triangles.push_back({a, b, c});
            if (i + 1 < stacks) mesh.triangles.push_back({b, d, c});
        }
    }
    return mesh;
}

// Axis-aligned box mesh centered at `center`.
inline Mesh make_box(const Vec3 &center, const Vec3 &half_extent) {
    Mesh mesh;
    for (int f = 0; f < 6; ++f) {
        int axis = f / 2;
        double sgn = f % 2 == 0 ? 1.0 : -1.0;
        Vec3 n{}, u{}, v{};
        (axis == 0 ? n.x : axis == 1 ? n.y : n.z) = sgn;
        int ua = (axis + 1) % 3, va = (axis + 2) % 3;
        (ua == 0 ? u.x : ua == 1 ? u.y : u.z) = 1.0;
        (va == 0 ? v.x : va == 1 ? v.y : v.z) = 1.0;
        double hn = half_extent[axis], hu = half_extent[ua], hv = half_extent[va];
        uint32_t base = uint32_t(mesh.positions.size());
        for (int corner = 0; corner < 4; ++corner) {
            double su = corner == 1 || corner == 2 ? 1.0 : -1.0;
            double sv = corner >= 2 ? 1.0 : -1.0;
            mesh.positions.push_back(center + n * hn + u * (su * hu) + v * (sv * hv));
            mesh.normals.push_back(n);
            mesh.uvs.push_back({0.5 + 0.5 * su, 0.5 + 0.5 * sv});
        }
        if (sgn > 0) {
            mesh.triangles.push_back({base, base + 1, base + 2});
            mesh.triangles.push_back({base, base + 2, base + 3});
        } else {
            mesh.triangles.push_back({base, base + 2, base + 1});
            mesh.triangles.push_back({base, base + 3, base + 2});
        }
    }
    return mesh;
}

}  // namespace airforge::test
