#pragma once

#include <span>
#include <vector>

#include "repsurf/point_cloud.hpp"
#include "repsurf/rng.hpp"

namespace repsurf {

/// How the triangle centroid is derived from the two neighbor edges.
/// edge_mean divides the edge sum by 2, triangle_centroid by 3 (the centroid
/// of the vertex triple {p, p+e1, p+e2}).
enum class CentroidMode { edge_mean, triangle_centroid };

/// Which centroid the surface position dots against. `absolute` uses scene
/// coordinates; `relative_literal` uses the point-relative centroid, which is
/// orthogonal to the normal by construction and therefore always ~0. The
/// literal mode exists to document that identity, not to carry signal.
enum class PositionFrame { absolute, relative_literal };

/// Per-point triangle descriptor: absolute centroid, oriented unit normal,
/// and surface position (normal . centroid / sqrt(3)).
struct TriangularFeature {
    Vec3f centroid;
    Vec3f normal;    // unit, or (0,0,0) when degenerate
    float position = 0;
    bool degenerate = false;
};

/// Builds one triangle per point from its two nearest neighbors, orients the
/// normal so its first component is positive (strict > 0 mask; an exact 0
/// flips), and optionally applies one instance-level random inverse drawn
/// from `stream` with probability 0.5. Collinear or coincident neighbors
/// yield a zero normal with the degenerate flag set. Requires N >= 3.
std::vector<TriangularFeature> triangular_repsurf(const PointCloud& cloud, CentroidMode mode,
                                                  PositionFrame frame, RngStream& stream,
                                                  bool augment);

/// Unsigned umbrella curvature: sum over neighbors of |unit(neighbor - point)
/// . given_normal|. `given_normal` must be unit length; a neighbor equal to
/// the point is rejected.
double umbrella_curvature(const Vec3d& point, std::span<const Vec3d> neighbors,
                          const Vec3d& given_normal);

/// Cross-product degeneracy threshold in normalized units.
inline constexpr double kDegenerateCrossNorm = 1e-12;

}  // namespace repsurf
