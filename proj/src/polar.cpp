#include "repsurf/polar.hpp"

#include <algorithm>
#include <cmath>

#include "repsurf/error.hpp"

namespace repsurf {

namespace {

void check_finite(const Vec3f& v) {
    if (!v.finite()) {
        raise(ErrorCode::invalid_input, "polar conversion requires finite coordinates");
    }
}

double normalized_phi(double y, double x) {
    // atan2(0, 0) = 0 by convention, matching the azimuth tie-break.
    return std::atan2(y, x) / (2.0 * M_PI) + 0.5;
}

}  // namespace

SphericalAux spherical_aux(const Vec3f& v) {
    check_finite(v);
    const Vec3d d(v);
    const double rho = std::max(d.norm(), 0.0);
    // The z/rho ratio can drift past 1 in floating point; clamp keeps acos
    // finite. rho == 0 forces theta to 0.
    const double theta =
        rho == 0.0 ? 0.0 : std::acos(std::clamp(d.z / rho, -1.0, 1.0)) / M_PI;
    const double phi = normalized_phi(d.y, d.x);

    return {static_cast<float>(rho), static_cast<float>(theta), static_cast<float>(phi)};
}

CylindricalAux cylindrical_aux(const Vec3f& v) {
    check_finite(v);
    const Vec3d d(v);
    const double rho = std::clamp(std::sqrt(d.x * d.x + d.y * d.y), 0.0, 1.0);
    const double phi = normalized_phi(d.y, d.x);
    const double z = (std::clamp(d.z, -1.0, 1.0) + 1.0) / 2.0;

    return {static_cast<float>(rho), static_cast<float>(phi), static_cast<float>(z)};
}

std::array<float, 6> with_polar(const Vec3f& v) {
    const SphericalAux s = spherical_aux(v);
    return {v.x, v.y, v.z, s.rho, s.theta, s.phi};
}

}  // namespace repsurf
