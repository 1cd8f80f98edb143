#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "repsurf/point_cloud.hpp"
#include "repsurf/rng.hpp"

namespace repsurf {

/// Centers the cloud on its bounding-box midpoint and applies one uniform
/// scale so the largest absolute coordinate becomes 1. A single-point (or
/// fully coincident) cloud maps to the origin. Attributes pass through.
PointCloud normalize_unit_cube(const PointCloud& cloud);

/// k nearest other points per point, by exhaustive scan. Distances are
/// Euclidean; ties break toward the smaller index. Requires 1 <= k <= N-1.
NeighborIndex knn_bruteforce(const PointCloud& cloud, std::uint32_t k);

/// Same contract and bit-identical output as knn_bruteforce, served from a
/// kd-tree. The tie order (distance, then index) is a total order, so the
/// selected rows do not depend on traversal order.
NeighborIndex knn_indexed(const PointCloud& cloud, std::uint32_t k);

/// Per center, up to max_k cloud indices within `radius`, distance ascending.
/// Short rows are padded by repeating the first hit; centers with no hit at
/// all are padded with the nearest point's index.
NeighborIndex ball_query(const PointCloud& cloud, const PointCloud& centers, double radius,
                         std::uint32_t max_k);

/// Greedy max-min downsampling: starts at `start`, then repeatedly picks the
/// point farthest from the already-selected set (ties toward smaller index).
std::vector<std::uint32_t> farthest_point_sampling(const PointCloud& cloud, std::size_t m,
                                                   std::size_t start);

/// One representative (arithmetic mean of points and attrs) per occupied
/// voxel of side `cell`; voxel index = floor(coord / cell). Output follows
/// ascending (ix, iy, iz) lexicographic voxel order.
PointCloud grid_sampling(const PointCloud& cloud, double cell);

/// Permutation of `neighbors` ordered counterclockwise around `center` on the
/// xy-plane: ascending azimuth atan2(dy, dx) remapped to [0, 2pi). Ties break
/// by ascending polar angle, then distance, then original index; a zero xy
/// projection gets azimuth 0.
std::vector<std::uint32_t> sort_counterclockwise(const Vec3f& center,
                                                 std::span<const Vec3f> neighbors);

/// Azimuth of a relative offset in [0, 2pi); atan2(0, 0) maps to 0.
double azimuth(const Vec3d& offset);

}  // namespace repsurf
