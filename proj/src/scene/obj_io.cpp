#include "scene/obj_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace airforge {

namespace {

[[noreturn]] void parse_fail(const std::string &path, int line, const std::string &what) {
    throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

// "a", "a/b", "a//c", "a/b/c" -> (v, vt, vn), 0 meaning absent.
std::tuple<long, long, long> parse_face_corner(const std::string &token, const std::string &path,
                                               int line) {
    long idx[3] = {0, 0, 0};
    size_t field = 0, pos = 0;
    while (pos <= token.size() && field < 3) {
        size_t slash = token.find('/', pos);
        std::string part = token.substr(pos, slash == std::string::npos ? slash : slash - pos);
        if (!part.empty()) {
            try {
                idx[field] = std::stol(part);
            } catch (const std::exception &) {
                parse_fail(path, line, "bad face index '" + token + "'");
            }
        }
        if (slash == std::string::npos) break;
        pos = slash + 1;
        ++field;
    }
    if (idx[0] == 0) parse_fail(path, line, "face corner missing a vertex index");
    return {idx[0], idx[1], idx[2]};
}

long resolve_index(long idx, size_t count, const std::string &path, int line) {
    long resolved = idx > 0 ? idx - 1 : long(count) + idx;
    if (resolved < 0 || resolved >= long(count))
        parse_fail(path, line,
                   "index " + std::to_string(idx) + " out of range (have " +
                       std::to_string(count) + ")");
    return resolved;
}

}  // namespace

Mesh load_obj(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_obj: cannot open '" + path + "'");

    std::vector<Vec3> positions, normals;
    std::vector<Vec2> uvs;
    struct Corner {
        long v, vt, vn;
    };
    std::vector<std::array<Corner, 3>> faces;

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag) || tag[0] == '#') continue;
        if (tag == "v" || tag == "vn") {
            double x, y, z;
            if (!(ls >> x >> y >> z)) parse_fail(path, line_no, "expected three coordinates");
            if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z))
                parse_fail(path, line_no, "non-finite coordinate");
            (tag == "v" ? positions : normals).push_back({x, y, z});
        } else if (tag == "vt") {
            double u, v;
            if (!(ls >> u >> v)) parse_fail(path, line_no, "expected two coordinates");
            if (!std::isfinite(u) || !std::isfinite(v))
                parse_fail(path, line_no, "non-finite coordinate");
            uvs.push_back({u, v});
        } else if (tag == "f") {
            std::vector<Corner> poly;
            std::string token;
            while (ls >> token) {
                auto [v, vt, vn] = parse_face_corner(token, path, line_no);
                poly.push_back({resolve_index(v, positions.size(), path, line_no),
                                vt == 0 ? -1 : resolve_index(vt, uvs.size(), path, line_no),
                                vn == 0 ? -1 : resolve_index(vn, normals.size(), path, line_no)});
            }
            if (poly.size() < 3) parse_fail(path, line_no, "face with fewer than 3 corners");
            for (size_t i = 2; i < poly.size(); ++i)
                faces.push_back({poly[0], poly[i - 1], poly[i]});
        }
        // Unknown record tags (o, g, s, mtllib, usemtl, ...) are skipped.
    }

    if (faces.empty()) throw std::runtime_error("load_obj: '" + path + "' contains no faces");

    // Unify the separate OBJ index spaces: one output vertex per distinct
    // (v, vt, vn) triple. Files whose faces index positions only keep their
    // original vertex count and order.
    Mesh mesh;
    bool any_vn = false, any_vt = false;
    std::map<std::tuple<long, long, long>, uint32_t> remap;
    for (const auto &face : faces) {
        std::array<uint32_t, 3> tri{};
        for (int k = 0; k < 3; ++k) {
            const Corner &c = face[size_t(k)];
            auto key = std::make_tuple(c.v, c.vt, c.vn);
            auto it = remap.find(key);
            if (it == remap.end()) {
                it = remap.emplace(key, uint32_t(mesh.positions.size())).first;
                mesh.positions.push_back(positions[size_t(c.v)]);
                mesh.uvs.push_back(c.vt >= 0 ? uvs[size_t(c.vt)] : Vec2{});
                mesh.normals.push_back(c.vn >= 0 ? normalize(normals[size_t(c.vn)]) : Vec3{0, 1, 0});
            }
            tri[size_t(k)] = it->second;
            any_vn = any_vn || c.vn >= 0;
            any_vt = any_vt || c.vt >= 0;
        }
        mesh.triangles.push_back(tri);
    }

    if (!any_vn) mesh.recompute_normals();
    if (!any_vt) {
        // Planar projection over the XZ footprint.
        Aabb box = mesh.bounds();
        Vec3 e = box.extent();
        double ex = e.x > 1e-12 ? e.x : 1.0;
        double ez = e.z > 1e-12 ? e.z : 1.0;
        for (size_t i = 0; i < mesh.positions.size(); ++i)
            mesh.uvs[i] = {(mesh.positions[i].x - box.lo.x) / ex,
                           (mesh.positions[i].z - box.lo.z) / ez};
    }
    mesh.validate();
    return mesh;
}

void write_obj(const std::string &path, const Mesh &mesh) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_obj: cannot open '" + path + "' for writing");
    char buf[128];
    for (const Vec3 &p : mesh.positions) {
        std::snprintf(buf, sizeof(buf), "v %.6f %.6f %.6f\n", p.x, p.y, p.z);
        out << buf;
    }
    for (const Vec2 &t : mesh.uvs) {
        std::snprintf(buf, sizeof(buf), "vt %.6f %.6f\n", t.x, t.y);
        out << buf;
    }
    for (const Vec3 &n : mesh.normals) {
        std::snprintf(buf, sizeof(buf), "vn %.6f %.6f %.6f\n", n.x, n.y, n.z);
        out << buf;
    }
    for (const auto &tri : mesh.triangles) {
        out << "f";
        for (uint32_t idx : tri) {
            unsigned long i = idx + 1;  // OBJ indices are 1-based
            out << " " << i << "/" << i << "/" << i;
        }
        out << "\n";
    }
    if (!out) throw std::runtime_error("write_obj: write failed for '" + path + "'");
}

}  // namespace airforge
