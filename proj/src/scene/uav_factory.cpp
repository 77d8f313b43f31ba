#include "scene/uav_factory.hpp"

#include <cmath>
#include <stdexcept>

#include "core/rng.hpp"

namespace airforge {

namespace {

// Appends a closed cylinder with axis Y spanning [y0, y1] in the local
// frame. Side and caps carry their own vertices so face normals stay crisp.
void append_cylinder(Mesh &mesh, const RigidTransform &frame, double radius, double y0, double y1,
                     int segments) {
    uint32_t base = uint32_t(mesh.positions.size());
    auto push = [&](const Vec3 &p_local, const Vec3 &n_local, const Vec2 &uv) {
        mesh.positions.push_back(frame.apply_point(p_local));
        mesh.normals.push_back(frame.apply_vector(n_local));
        mesh.uvs.push_back(uv);
    };

    // Side rings: bottom then top, seam vertex duplicated for clean UVs.
    for (int ring = 0; ring < 2; ++ring) {
        double y = ring == 0 ? y0 : y1;
        for (int s = 0; s <= segments; ++s) {
            double a = 2.0 * kPi * double(s) / double(segments);
            Vec3 n{std::cos(a), 0.0, std::sin(a)};
            push({radius * n.x, y, radius * n.z}, n, {double(s) / segments, double(ring)});
        }
    }
    int stride = segments + 1;
    for (int s = 0; s < segments; ++s) {
        uint32_t b0 = base + uint32_t(s), b1 = base + uint32_t(s + 1);
        uint32_t t0 = b0 + uint32_t(stride), t1 = b1 + uint32_t(stride);
        mesh.triangles.push_back({b0, t0, b1});
        mesh.triangles.push_back({b1, t0, t1});
    }

    // Caps as fans around center vertices.
    for (int cap = 0; cap < 2; ++cap) {
        double y = cap == 0 ? y0 : y1;
        Vec3 n{0.0, cap == 0 ? -1.0 : 1.0, 0.0};
        uint32_t center = uint32_t(mesh.positions.size());
        push({0.0, y, 0.0}, n, {0.5, 0.5});
        for (int s = 0; s <= segments; ++s) {
            double a = 2.0 * kPi * double(s) / double(segments);
            double cx = std::cos(a), cz = std::sin(a);
            push({radius * cx, y, radius * cz}, n, {0.5 + 0.5 * cx, 0.5 + 0.5 * cz});
        }
        for (int s = 0; s < segments; ++s) {
            uint32_t r0 = center + 1 + uint32_t(s), r1 = r0 + 1;
            if (cap == 0)
                mesh.triangles.push_back({center, r0, r1});
            else
                mesh.triangles.push_back({center, r1, r0});
        }
    }
}

// Axis-aligned box in the local frame, centered at `center`, 24 vertices.
void append_box(Mesh &mesh, const RigidTransform &frame, const Vec3 &center,
                const Vec3 &half_extent) {
    static const int axis_of_face[6] = {0, 0, 1, 1, 2, 2};
    static const double sign_of_face[6] = {1, -1, 1, -1, 1, -1};
    for (int f = 0; f < 6; ++f) {
        int axis = axis_of_face[f];
        double sgn = sign_of_face[f];
        int ua = (axis + 1) % 3, va = (axis + 2) % 3;
        Vec3 n{};
        Vec3 u{}, v{};
        (axis == 0 ? n.x : axis == 1 ? n.y : n.z) = sgn;
        (ua == 0 ? u.x : ua == 1 ? u.y : u.z) = 1.0;
        (va == 0 ? v.x : va == 1 ? v.y : v.z) = 1.0;
        double he_n = axis == 0 ? half_extent.x : axis == 1 ? half_extent.y : half_extent.z;
        double he_u = ua == 0 ? half_extent.x : ua == 1 ? half_extent.y : half_extent.z;
        double he_v = va == 0 ? half_extent.x : va == 1 ? half_extent.y : half_extent.z;

        uint32_t base = uint32_t(mesh.positions.size());
        for (int corner = 0; corner < 4; ++corner) {
            double su = corner == 1 || corner == 2 ? 1.0 : -1.0;
            double sv = corner >= 2 ? 1.0 : -1.0;
            Vec3 p = center + n * he_n + u * (su * he_u) + v * (sv * he_v);
            mesh.positions.push_back(frame.apply_point(p));
            mesh.normals.push_back(frame.apply_vector(n));
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
}

}  // namespace

Mesh generate_uav_mesh(const UavParams &p) {
    if (p.arms != 4 && p.arms != 6)
        throw std::invalid_argument("generate_uav_mesh: arm count must be 4 or 6");
    if (!(p.arm_length > 0) || !(p.body_radius > 0) || !(p.rotor_radius > 0) ||
        !(p.gear_height > 0))
        throw std::invalid_argument("generate_uav_mesh: dimensions must be positive");
    if (!(p.arm_length > p.body_radius))
        throw std::invalid_argument("generate_uav_mesh: arm_length must exceed body_radius");

    // Global proportion jitter. One draw per parameter, shared by all arms,
    // keeps the layout n-fold symmetric.
    Rng rng = Rng::keyed({0x75617666u, p.seed});  // 'uavf'
    double body_height = p.body_radius * rng.uniform(0.55, 0.95);
    double arm_side = p.body_radius * rng.uniform(0.26, 0.40);
    double rotor_thickness = p.body_radius * rng.uniform(0.10, 0.18);
    double gear_splay = rng.uniform(0.15, 0.45);  // outward lean of the legs
    double mast_height = rotor_thickness * rng.uniform(1.2, 2.2);

    const int body_segments = 24;  // divisible by both 4 and 6
    const int rotor_segments = 16;

    Mesh mesh;
    append_cylinder(mesh, RigidTransform::identity(), p.body_radius, -body_height * 0.5,
                    body_height * 0.5, body_segments);

    for (int k = 0; k < p.arms; ++k) {
        double angle = 2.0 * kPi * double(k) / double(p.arms);
        RigidTransform arm_frame{Mat3::rotation_y(angle), Vec3{}};

        // Arm beam along local +X, from inside the body to the rotor mast.
        double r0 = p.body_radius * 0.5;
        double r1 = p.arm_length;
        append_box(mesh, arm_frame, {(r0 + r1) * 0.5, 0.0, 0.0},
                   {(r1 - r0) * 0.5, arm_side * 0.5, arm_side * 0.5});

        // Motor mast and rotor disc at the arm tip.
        RigidTransform tip_frame{arm_frame.rotation, arm_frame.apply_point({r1, 0.0, 0.0})};
        append_cylinder(mesh, tip_frame, arm_side * 0.55, arm_side * 0.5,
                        arm_side * 0.5 + mast_height, 8);
        append_cylinder(mesh, tip_frame, p.rotor_radius, arm_side * 0.5 + mast_height,
                        arm_side * 0.5 + mast_height + rotor_thickness, rotor_segments);

        // Landing gear leg, leaning outward below the arm root.
        double leg_side = arm_side * 0.45;
        double leg_top_y = -arm_side * 0.5;
        double leg_len = p.gear_height;
        Vec3 leg_root = arm_frame.apply_point({p.body_radius * 0.85, leg_top_y, 0.0});
        Vec3 leg_dir = normalize(arm_frame.apply_vector({gear_splay, -1.0, 0.0}));
        Vec3 leg_center = leg_root + leg_dir * (leg_len * 0.5);
        // Frame with local Y along the leg.
        Vec3 ly = -leg_dir;
        Vec3 lx = normalize(cross(Vec3{0, 1, 0} - ly * ly.y, ly));
        Vec3 lz = cross(lx, ly);
        RigidTransform leg_frame{Mat3::from_columns(lx, ly, lz), leg_center};
        append_box(mesh, leg_frame, {0, 0, 0}, {leg_side * 0.5, leg_len * 0.5, leg_side * 0.5});

        // Skid foot at the bottom of the leg.
        Vec3 foot_center = leg_root + leg_dir * leg_len;
        RigidTransform foot_frame{arm_frame.rotation, foot_center};
        append_box(mesh, foot_frame, {0, 0, 0},
                   {leg_side * 1.1, leg_side * 0.35, leg_side * 1.1});
    }

    mesh.validate();
    return mesh;
}

}  // namespace airforge
