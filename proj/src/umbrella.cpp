#include "repsurf/umbrella.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "repsurf/error.hpp"
#include "repsurf/geometry.hpp"

namespace repsurf {

namespace {
const double kInvSqrt3 = 1.0 / std::sqrt(3.0);
}

std::size_t layout_channels(InputLayout layout) {
    switch (layout) {
        case InputLayout::n: return 3;
        case InputLayout::n_p: return 4;
        case InputLayout::n_c: return 6;
        case InputLayout::n_p_c: return 7;
        case InputLayout::n_p_cp: return 10;
    }
    raise(ErrorCode::invalid_argument, "unknown input layout");
}

const char* layout_name(InputLayout layout) {
    switch (layout) {
        case InputLayout::n: return "n";
        case InputLayout::n_p: return "n+p";
        case InputLayout::n_c: return "n+c";
        case InputLayout::n_p_c: return "n+p+c";
        case InputLayout::n_p_cp: return "n+p+cp";
    }
    return "?";
}

const char* aggregation_name(Aggregation agg) {
    switch (agg) {
        case Aggregation::sum: return "sum";
        case Aggregation::max: return "max";
        case Aggregation::mean: return "mean";
    }
    return "?";
}

UmbrellaSurface build_fan(const Vec3f& point, std::span<const Vec3f> neighbor_offsets,
                          const UmbrellaConfig& cfg, bool invert) {
    const std::size_t k = neighbor_offsets.size();
    if (k < 2) {
        raise(ErrorCode::invalid_argument, "an umbrella fan needs at least 2 neighbors");
    }

    const std::vector<std::uint32_t> order =
        sort_counterclockwise(Vec3f{0, 0, 0}, neighbor_offsets);

    std::vector<Vec3d> edges(k);
    for (std::size_t j = 0; j < k; ++j) edges[j] = Vec3d(neighbor_offsets[order[j]]);

    const Vec3d p(point);
    const double edge_div = cfg.centroid_mode == CentroidMode::edge_mean ? 2.0 : 3.0;

    UmbrellaSurface surface;
    surface.triangles.resize(k);

    std::vector<Vec3d> normals(k);
    std::vector<Vec3d> rel_centroids(k);
    for (std::size_t j = 0; j < k; ++j) {
        const Vec3d& e1 = edges[j];
        const Vec3d& e2 = edges[(j + 1) % k];
        rel_centroids[j] = (e1 + e2) / edge_div;

        const Vec3d cross = e1.cross(e2);
        const double cross_norm = cross.norm();
        if (cross_norm < kDegenerateCrossNorm) {
            surface.triangles[j].degenerate = true;
            normals[j] = {0, 0, 0};
        } else {
            normals[j] = cross / cross_norm;
        }
    }

    // Fan-leader sign fix: the whole fan flips together so local consistency
    // from the counterclockwise construction is preserved.
    double flip = normals[0].x > 0.0 ? 1.0 : -1.0;
    if (invert) flip = -flip;

    for (std::size_t j = 0; j < k; ++j) {
        UmbrellaTriangle& tri = surface.triangles[j];
        const Vec3d normal = normals[j] * flip;
        const Vec3d abs_centroid = p + rel_centroids[j];
        const Vec3d pos_ref =
            cfg.frame == PositionFrame::absolute ? abs_centroid : rel_centroids[j];

        tri.rel_centroid = Vec3f(rel_centroids[j]);
        tri.centroid = Vec3f(abs_centroid);
        tri.normal = tri.degenerate ? Vec3f{0, 0, 0} : Vec3f(normal);
        tri.position =
            tri.degenerate ? 0.0f : static_cast<float>(normal.dot(pos_ref) * kInvSqrt3);
        tri.polar = spherical_aux(tri.rel_centroid);
    }
    return surface;
}

std::vector<UmbrellaSurface> build_umbrella(const PointCloud& cloud, const UmbrellaConfig& cfg,
                                            RngStream& stream) {
    cloud.validate();
    if (cfg.k < 2) {
        raise(ErrorCode::invalid_argument, "umbrella k must be at least 2");
    }
    if (cloud.size() <= cfg.k) {
        raise(ErrorCode::invalid_argument, "umbrella requires N > k");
    }

    const NeighborIndex nn = knn_indexed(cloud, cfg.k);

    // Per-surface augmentation draws happen in input order, before any
    // per-point work, so the sequence is independent of construction order.
    std::vector<bool> invert(cloud.size(), false);
    if (cfg.augment) {
        for (std::size_t i = 0; i < cloud.size(); ++i) {
            invert[i] = rng_bernoulli(stream, 0.5);
        }
    }

    std::vector<UmbrellaSurface> out;
    out.reserve(cloud.size());
    std::vector<Vec3f> offsets(cfg.k);
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const auto row = nn.row(i);
        for (std::uint32_t j = 0; j < cfg.k; ++j) {
            offsets[j] = cloud.points[row[j]] - cloud.points[i];
        }
        out.push_back(build_fan(cloud.points[i], offsets, cfg, invert[i]));
    }
    return out;
}

std::vector<float> assemble_rows(const UmbrellaSurface& surface, InputLayout layout) {
    const std::size_t channels = layout_channels(layout);
    std::vector<float> rows;
    rows.reserve(surface.triangles.size() * channels);

    const bool want_p = layout == InputLayout::n_p || layout == InputLayout::n_p_c ||
                        layout == InputLayout::n_p_cp;
    const bool want_c = layout != InputLayout::n && layout != InputLayout::n_p;
    const bool want_polar = layout == InputLayout::n_p_cp;

    for (const auto& tri : surface.triangles) {
        rows.push_back(tri.normal.x);
        rows.push_back(tri.normal.y);
        rows.push_back(tri.normal.z);
        if (want_p) rows.push_back(tri.position);
        if (want_c) {
            rows.push_back(tri.rel_centroid.x);
            rows.push_back(tri.rel_centroid.y);
            rows.push_back(tri.rel_centroid.z);
        }
        if (want_polar) {
            rows.push_back(tri.polar.rho);
            rows.push_back(tri.polar.theta);
            rows.push_back(tri.polar.phi);
        }
    }
    return rows;
}

std::vector<double> aggregate_rows(std::span<const double> rows, std::size_t k,
                                   std::size_t width, Aggregation agg) {
    if (k == 0 || rows.size() != k * width) {
        raise(ErrorCode::invalid_argument, "aggregate_rows buffer must be k * width");
    }
    std::vector<double> out(width, agg == Aggregation::max
                                       ? -std::numeric_limits<double>::infinity()
                                       : 0.0);
    for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t c = 0; c < width; ++c) {
            const double v = rows[j * width + c];
            if (agg == Aggregation::max) {
                out[c] = std::max(out[c], v);
            } else {
                out[c] += v;
            }
        }
    }
    if (agg == Aggregation::mean) {
        for (double& v : out) v /= static_cast<double>(k);
    }
    return out;
}

std::vector<UmbrellaFeature> umbrella_repsurf(const PointCloud& cloud, const UmbrellaConfig& cfg,
                                              RngStream& stream) {
    const std::size_t in_width = layout_channels(cfg.layout);
    if (cfg.transform != nullptr && cfg.transform->input_width() != in_width) {
        raise(ErrorCode::config_mismatch,
              "transform input width " + std::to_string(cfg.transform->input_width()) +
                  " does not match layout channels " + std::to_string(in_width));
    }

    const std::vector<UmbrellaSurface> surfaces = build_umbrella(cloud, cfg, stream);
    const std::size_t out_width =
        cfg.transform != nullptr ? cfg.transform->output_width() : in_width;

    std::vector<UmbrellaFeature> out;
    out.reserve(surfaces.size());

    std::vector<double> rows(cfg.k * in_width);
    for (const auto& surface : surfaces) {
        const std::vector<float> raw = assemble_rows(surface, cfg.layout);
        std::copy(raw.begin(), raw.end(), rows.begin());

        std::vector<double> transformed =
            cfg.transform != nullptr ? mlp_forward(*cfg.transform, rows, cfg.k)
                                     : rows;
        const std::vector<double> agg =
            aggregate_rows(transformed, cfg.k, out_width, cfg.aggregation);

        UmbrellaFeature feature;
        Vec3d mean;
        for (const auto& tri : surface.triangles) mean = mean + Vec3d(tri.centroid);
        feature.centroid = Vec3f(mean / static_cast<double>(cfg.k));
        feature.feature.reserve(out_width);
        for (double v : agg) feature.feature.push_back(static_cast<float>(v));
        out.push_back(std::move(feature));
    }
    return out;
}

std::vector<UmbrellaFeature> degenerate_to_triangular(const PointCloud& cloud, RngStream& stream,
                                                      UmbrellaConfig cfg) {
    cfg.k = 2;
    return umbrella_repsurf(cloud, cfg, stream);
}

}  // namespace repsurf
