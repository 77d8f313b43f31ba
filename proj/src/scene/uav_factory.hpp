#pragma once

#include <cstdint>

#include "scene/mesh.hpp"

namespace airforge {

struct UavParams {
    int arms = 4;  // 4 = quadcopter, 6 = hexacopter
    double arm_length = 0.45;
    double body_radius = 0.12;
    double rotor_radius = 0.13;
    double gear_height = 0.12;
    uint64_t seed = 0;
};

// Procedural quad/hexacopter: central body, radial arms at equal angles,
// one rotor disc per arm, landing gear legs. The seed perturbs global
// proportions only, so the model keeps its n-fold symmetry about the
// vertical axis. Deterministic for fixed parameters.
Mesh generate_uav_mesh(const UavParams &params);

inline Mesh generate_uav_mesh(int arms, double arm_length, double body_radius,
                              double rotor_radius, double gear_height, uint64_t seed) {
    return generate_uav_mesh(UavParams{arms, arm_length, body_radius, rotor_radius,
                                       gear_height, seed});
}

}  // namespace airforge
