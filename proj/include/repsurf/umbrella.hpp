#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "repsurf/mlp.hpp"
#include "repsurf/point_cloud.hpp"
#include "repsurf/polar.hpp"
#include "repsurf/rng.hpp"
#include "repsurf/triangular.hpp"

namespace repsurf {

/// Per-triangle channel blocks fed to the transform. Tokens stack in layout
/// order: N = unit normal (3), P = surface position (1), C = point-relative
/// centroid (3), CP = relative centroid plus its spherical triple (6).
enum class InputLayout { n, n_p, n_c, n_p_c, n_p_cp };

enum class Aggregation { sum, max, mean };

std::size_t layout_channels(InputLayout layout);
const char* layout_name(InputLayout layout);
const char* aggregation_name(Aggregation agg);

struct UmbrellaConfig {
    std::uint32_t k = 8;
    InputLayout layout = InputLayout::n_p_cp;
    Aggregation aggregation = Aggregation::sum;
    const MlpParams* transform = nullptr;  // nullptr = identity
    bool augment = false;
    PositionFrame frame = PositionFrame::absolute;
    CentroidMode centroid_mode = CentroidMode::edge_mean;
};

/// One triangle of an umbrella fan.
struct UmbrellaTriangle {
    Vec3f centroid;      // absolute scene coordinates
    Vec3f rel_centroid;  // centroid relative to the fan's point
    Vec3f normal;        // unit, locally consistent; (0,0,0) when degenerate
    float position = 0;
    SphericalAux polar;  // of rel_centroid
    bool degenerate = false;
};

struct UmbrellaSurface {
    std::vector<UmbrellaTriangle> triangles;
};

/// Output record: the point's representative position (mean of the absolute
/// triangle centroids) plus the aggregated feature vector.
struct UmbrellaFeature {
    Vec3f centroid;
    std::vector<float> feature;
};

/// Builds a fan directly from neighbor offsets: counterclockwise sort,
/// consecutive wraparound pairs, cross-product normals, and the fan-leader
/// sign fix (flip the whole fan when the first triangle's first component is
/// not strictly positive). `invert` applies the random-inverse flip the
/// caller has already drawn.
UmbrellaSurface build_fan(const Vec3f& point, std::span<const Vec3f> neighbor_offsets,
                          const UmbrellaConfig& cfg, bool invert);

/// Fans for every point: one shared kNN pass, then per-point construction.
/// With cfg.augment, one Bernoulli(0.5) draw per point is consumed from
/// `stream` in input order. Requires N > cfg.k.
std::vector<UmbrellaSurface> build_umbrella(const PointCloud& cloud, const UmbrellaConfig& cfg,
                                            RngStream& stream);

/// Per-triangle layout rows for one surface, row-major k x layout_channels.
std::vector<float> assemble_rows(const UmbrellaSurface& surface, InputLayout layout);

/// Aggregates k row-major rows of the given width into one row.
std::vector<double> aggregate_rows(std::span<const double> rows, std::size_t k,
                                   std::size_t width, Aggregation agg);

/// Full umbrella feature: build fans, assemble layout rows, apply the
/// transform row-wise, aggregate over the k triangles.
std::vector<UmbrellaFeature> umbrella_repsurf(const PointCloud& cloud, const UmbrellaConfig& cfg,
                                              RngStream& stream);

/// umbrella_repsurf with k forced to 2: the learnable analogue of the
/// triangular descriptor (two wraparound triangles with opposed normals).
std::vector<UmbrellaFeature> degenerate_to_triangular(const PointCloud& cloud,
                                                      RngStream& stream,
                                                      UmbrellaConfig cfg = UmbrellaConfig{});

}  // namespace repsurf
