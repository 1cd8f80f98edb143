#include "repsurf/synth.hpp"

#include <algorithm>
#include <cmath>

#include "repsurf/error.hpp"

namespace repsurf {

ShapeKind parse_shape(const std::string& name) {
    if (name == "cube") return ShapeKind::cube;
    if (name == "sphere") return ShapeKind::sphere;
    if (name == "plane_with_step" || name == "plane") return ShapeKind::plane_with_step;
    if (name == "hexagon_fan" || name == "hexagon") return ShapeKind::hexagon_fan;
    raise(ErrorCode::invalid_argument, "unknown shape '" + name + "'");
}

const char* shape_name(ShapeKind kind) {
    switch (kind) {
        case ShapeKind::cube: return "cube";
        case ShapeKind::sphere: return "sphere";
        case ShapeKind::plane_with_step: return "plane_with_step";
        case ShapeKind::hexagon_fan: return "hexagon_fan";
    }
    return "?";
}

std::int32_t cube_region(const Vec3f& p) {
    const float ax = std::abs(p.x), ay = std::abs(p.y), az = std::abs(p.z);
    int face_axis = 0;
    float face_val = ax;
    if (ay > face_val) {
        face_axis = 1;
        face_val = ay;
    }
    if (az > face_val) {
        face_axis = 2;
        face_val = az;
    }
    const float coords[3] = {p.x, p.y, p.z};
    // In-face coordinates: the two axes other than the face axis.
    float in_face_max = 0;
    for (int a = 0; a < 3; ++a) {
        if (a != face_axis) in_face_max = std::max(in_face_max, std::abs(coords[a]));
    }
    if (in_face_max >= 1.0f - kCubeEdgeBand) return kCubeEdgeLabel;
    return static_cast<std::int32_t>(2 * face_axis + (coords[face_axis] > 0 ? 1 : 0));
}

namespace {

void add_noise(PointCloud& cloud, float noise, RngStream& stream) {
    if (noise <= 0) return;
    for (auto& p : cloud.points) {
        p.x += static_cast<float>(stream.normal(noise));
        p.y += static_cast<float>(stream.normal(noise));
        p.z += static_cast<float>(stream.normal(noise));
    }
}

SynthResult make_cube(std::size_t n, RngStream& stream) {
    SynthResult r;
    r.label_names = {"face_xn", "face_xp", "face_yn", "face_yp", "face_zn", "face_zp", "edge"};
    r.cloud.points.reserve(n);
    r.labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const int face = static_cast<int>(stream.below(6));
        const float u = static_cast<float>(stream.uniform(-1.0, 1.0));
        const float v = static_cast<float>(stream.uniform(-1.0, 1.0));
        const float s = face % 2 == 0 ? -1.0f : 1.0f;
        Vec3f p;
        switch (face / 2) {
            case 0: p = {s, u, v}; break;
            case 1: p = {u, s, v}; break;
            default: p = {u, v, s}; break;
        }
        r.cloud.points.push_back(p);
        r.labels.push_back(cube_region(p));
    }
    return r;
}

SynthResult make_sphere(std::size_t n, RngStream& stream) {
    SynthResult r;
    r.cloud.points.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        // Gaussian triple normalized: uniform on the sphere.
        Vec3d d;
        do {
            d = {stream.normal(1.0), stream.normal(1.0), stream.normal(1.0)};
        } while (d.norm() < 1e-12);
        r.cloud.points.push_back(Vec3f(d / d.norm()));
    }
    return r;
}

SynthResult make_plane_with_step(std::size_t n, RngStream& stream) {
    // Two z-planes separated by a gap along x so a point's neighbors stay in
    // its own region at reasonable densities.
    constexpr float kGap = 0.1f;
    constexpr float kStep = 0.5f;
    SynthResult r;
    r.label_names = {"plane_low", "plane_high"};
    r.cloud.points.reserve(n);
    r.labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const bool high = i % 2 == 1;  // even split
        const float y = static_cast<float>(stream.uniform(-1.0, 1.0));
        float x = static_cast<float>(stream.uniform(kGap, 1.0));
        if (!high) x = -x;
        r.cloud.points.push_back({x, y, high ? kStep : 0.0f});
        r.labels.push_back(high ? 1 : 0);
    }
    return r;
}

SynthResult make_hexagon_fan(std::size_t n) {
    // Triangular lattice patch in the z=0 plane: every interior site has six
    // equidistant neighbors, the canonical umbrella test bed.
    constexpr float kSpacing = 0.2f;
    SynthResult r;
    std::vector<Vec3f> sites;
    int ring = 0;
    while (sites.size() < 4 * n) {  // overshoot, then keep the n closest
        if (ring == 0) {
            sites.push_back({0, 0, 0});
        } else {
            for (int i = 0; i < 6 * ring; ++i) {
                const int side = i / ring;
                const int step = i % ring;
                const double a0 = M_PI / 3.0 * side;
                const double a1 = M_PI / 3.0 * (side + 2);
                const double x =
                    ring * std::cos(a0) * kSpacing + step * std::cos(a1) * kSpacing;
                const double y =
                    ring * std::sin(a0) * kSpacing + step * std::sin(a1) * kSpacing;
                sites.push_back({static_cast<float>(x), static_cast<float>(y), 0.0f});
            }
        }
        ++ring;
    }
    std::stable_sort(sites.begin(), sites.end(), [](const Vec3f& a, const Vec3f& b) {
        return a.squared_norm() < b.squared_norm();
    });
    sites.resize(n);
    r.cloud.points = std::move(sites);
    return r;
}

}  // namespace

SynthResult synth_shape(ShapeKind kind, std::size_t n, float noise, RngStream& stream) {
    if (n < 8) {
        raise(ErrorCode::invalid_argument, "synthetic shapes need at least 8 points");
    }
    SynthResult r;
    switch (kind) {
        case ShapeKind::cube: r = make_cube(n, stream); break;
        case ShapeKind::sphere: r = make_sphere(n, stream); break;
        case ShapeKind::plane_with_step: r = make_plane_with_step(n, stream); break;
        case ShapeKind::hexagon_fan: r = make_hexagon_fan(n); break;
    }
    add_noise(r.cloud, noise, stream);
    return r;
}

}  // namespace repsurf
