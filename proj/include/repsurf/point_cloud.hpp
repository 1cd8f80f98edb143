#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "repsurf/vec3.hpp"

namespace repsurf {

/// Ordered list of 3-D points with optional fixed-width per-point attributes
/// (colors, labels, ...). Coordinates are stored in 32-bit precision.
struct PointCloud {
    std::vector<Vec3f> points;
    std::vector<float> attrs;  // row-major, size() == points.size() * attr_dim
    std::size_t attr_dim = 0;

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
    bool has_attrs() const { return attr_dim > 0; }

    std::span<const float> attr_row(std::size_t i) const {
        return {attrs.data() + i * attr_dim, attr_dim};
    }

    /// Throws invalid_input if the cloud is empty or holds a non-finite value.
    void validate() const;
};

/// Per-point neighbor table: N rows of k indices, self excluded, each row
/// sorted by ascending distance to the query point (ties by smaller index).
struct NeighborIndex {
    std::vector<std::uint32_t> indices;  // row-major, N * k
    std::uint32_t k = 0;

    std::size_t rows() const { return k == 0 ? 0 : indices.size() / k; }

    std::span<const std::uint32_t> row(std::size_t i) const {
        return {indices.data() + i * k, k};
    }
};

}  // namespace repsurf
