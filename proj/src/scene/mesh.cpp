#include "scene/mesh.hpp"

#include <cmath>
#include <stdexcept>

namespace airforge {

double Mesh::bounding_radius() const {
    Aabb box = bounds();
    if (box.empty()) return 0.0;
    Vec3 c = box.center();
    double r2 = 0.0;
    for (const Vec3 &p : positions) r2 = std::max(r2, length_squared(p - c));
    return std::sqrt(r2);
}

void Mesh::validate() const {
    if (triangles.empty()) throw std::invalid_argument("mesh has no triangles");
    if (normals.size() != positions.size() || uvs.size() != positions.size())
        throw std::invalid_argument("mesh attribute counts do not match vertex count");
    for (const auto &tri : triangles)
        for (uint32_t idx : tri)
            if (idx >= positions.size())
                throw std::invalid_argument("triangle index out of range");
    for (const Vec3 &p : positions)
        if (!is_finite(p)) throw std::invalid_argument("non-finite vertex position");
    for (const Vec3 &n : normals)
        if (std::abs(length(n) - 1.0) > 1e-6)
            throw std::invalid_argument("vertex normal is not unit length");
}

void Mesh::recompute_normals() {
    normals.assign(positions.size(), Vec3{});
    for (const auto &tri : triangles) {
        const Vec3 &a = positions[tri[0]];
        const Vec3 &b = positions[tri[1]];
        const Vec3 &c = positions[tri[2]];
        Vec3 fn = cross(b - a, c - a);  // magnitude = 2*area, weights by area
        normals[tri[0]] += fn;
        normals[tri[1]] += fn;
        normals[tri[2]] += fn;
    }
    for (Vec3 &n : normals) {
        double len = length(n);
        n = len > 1e-20 ? n / len : Vec3{0, 1, 0};
    }
}

bool RigidTransform::is_valid() const {
    Mat3 rtr = rotation.transposed() * rotation;
    Mat3 id = Mat3::identity();
    for (int c = 0; c < 3; ++c) {
        Vec3 d = rtr.col[size_t(c)] - id.col[size_t(c)];
        if (std::abs(d.x) > 1e-9 || std::abs(d.y) > 1e-9 || std::abs(d.z) > 1e-9) return false;
    }
    return std::abs(rotation.determinant() - 1.0) <= 1e-9;
}

Mesh transformed(const Mesh &mesh, const RigidTransform &xf) {
    Mesh out = mesh;
    for (Vec3 &p : out.positions) p = xf.apply_point(p);
    for (Vec3 &n : out.normals) n = xf.apply_vector(n);
    return out;
}

RigidTransform look_at(const Vec3 &eye, const Vec3 &target, const Vec3 &up) {
    Vec3 to_target = target - eye;
    double dist = length(to_target);
    if (dist < 1e-12) throw std::invalid_argument("look_at: eye and target coincide");
    Vec3 forward = to_target / dist;
    Vec3 z_axis = -forward;
    Vec3 x_axis = cross(up, z_axis);
    double xlen = length(x_axis);
    if (xlen < 1e-9) throw std::invalid_argument("look_at: up is parallel to the view direction");
    x_axis = x_axis / xlen;
    Vec3 y_axis = cross(z_axis, x_axis);
    return {Mat3::from_columns(x_axis, y_axis, z_axis), eye};
}

void Camera::validate() const {
    if (width < 16 || height < 16) throw std::invalid_argument("camera smaller than 16x16");
    if (!(hfov_deg > 0.0) || !(hfov_deg < 180.0) || !std::isfinite(hfov_deg))
        throw std::invalid_argument("camera fov must be in (0,180)");
    if (!pose.is_valid()) throw std::invalid_argument("camera pose rotation is not orthonormal");
}

double Camera::tan_half_hfov() const { return std::tan(radians(hfov_deg) * 0.5); }

// Square pixels: vertical extent follows from the aspect ratio.
double Camera::tan_half_vfov() const { return tan_half_hfov() * double(height) / double(width); }

std::optional<ProjectedPoint> project_point(const Camera &camera, const Vec3 &p) {
    Vec3 q = camera.pose.inverse().apply_point(p);
    double depth = -q.z;
    if (depth <= 1e-6) return std::nullopt;
    double ndc_x = q.x / (depth * camera.tan_half_hfov());
    double ndc_y = q.y / (depth * camera.tan_half_vfov());
    Vec2 pixel{(ndc_x * 0.5 + 0.5) * camera.width, (0.5 - ndc_y * 0.5) * camera.height};
    return ProjectedPoint{pixel, depth};
}

Ray camera_ray(const Camera &camera, double px, double py) {
    double ndc_x = px / camera.width * 2.0 - 1.0;
    double ndc_y = 1.0 - py / camera.height * 2.0;
    Vec3 dir_cam{ndc_x * camera.tan_half_hfov(), ndc_y * camera.tan_half_vfov(), -1.0};
    return {camera.pose.translation, normalize(camera.pose.apply_vector(dir_cam))};
}

BBox2D bbox_of_points(const std::vector<Vec2> &points) {
    if (points.empty()) throw std::invalid_argument("bbox_of_points: empty point list");
    BBox2D box{points[0].x, points[0].y, points[0].x, points[0].y};
    for (const Vec2 &p : points) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw std::invalid_argument("bbox_of_points: non-finite coordinate");
        box.x_min = std::min(box.x_min, p.x);
        box.y_min = std::min(box.y_min, p.y);
        box.x_max = std::max(box.x_max, p.x);
        box.y_max = std::max(box.y_max, p.y);
    }
    return box;
}

}  // namespace airforge
