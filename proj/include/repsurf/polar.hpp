#pragma once

#include <array>

#include "repsurf/vec3.hpp"

namespace repsurf {

/// Spherical coordinates normalized for network input: rho = |v| with no
/// upper clamp, theta = arccos(z/rho)/pi in [0,1], phi = atan2(y,x)/(2pi)+0.5
/// in [0,1]. theta is forced to 0 when rho is 0 so the output is always finite.
struct SphericalAux {
    float rho = 0;
    float theta = 0;
    float phi = 0;
};

/// Cylindrical counterpart: rho = clamp(sqrt(x^2+y^2), 0, 1),
/// phi = atan2(y,x)/(2pi)+0.5, z = (clamp(z,-1,1)+1)/2. All fields in [0,1].
struct CylindricalAux {
    float rho = 0;
    float phi = 0;
    float z = 0;
};

SphericalAux spherical_aux(const Vec3f& v);
CylindricalAux cylindrical_aux(const Vec3f& v);

/// Cartesian triple concatenated with its spherical triple: the 6-channel
/// coordinate block fed to the umbrella transform.
std::array<float, 6> with_polar(const Vec3f& v);

}  // namespace repsurf
