#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "repsurf/point_cloud.hpp"
#include "repsurf/rng.hpp"

namespace repsurf {

enum class ShapeKind { cube, sphere, plane_with_step, hexagon_fan };

ShapeKind parse_shape(const std::string& name);
const char* shape_name(ShapeKind kind);

struct SynthResult {
    PointCloud cloud;
    std::vector<std::int32_t> labels;       // empty when the shape is unlabeled
    std::vector<std::string> label_names;   // indexed by label value
};

/// Deterministic sampling of a test shape, n >= 8 points, optional per-axis
/// Gaussian jitter of the given stdev. The cube emits six face labels plus an
/// edge-band label (within 0.05 of an edge); the stepped plane emits one
/// label per planar region.
SynthResult synth_shape(ShapeKind kind, std::size_t n, float noise, RngStream& stream);

/// Region id for a point on (or near) the unit cube surface: faces 0..5 in
/// -x,+x,-y,+y,-z,+z order, 6 for the edge band. Used by synth_shape and to
/// re-label grid-sampled cubes.
std::int32_t cube_region(const Vec3f& p);

inline constexpr std::int32_t kCubeEdgeLabel = 6;
inline constexpr float kCubeEdgeBand = 0.05f;

}  // namespace repsurf
