#include "repsurf/triangular.hpp"

#include <cmath>

#include "repsurf/error.hpp"
#include "repsurf/geometry.hpp"

namespace repsurf {

namespace {
const double kInvSqrt3 = 1.0 / std::sqrt(3.0);
}

std::vector<TriangularFeature> triangular_repsurf(const PointCloud& cloud, CentroidMode mode,
                                                  PositionFrame frame, RngStream& stream,
                                                  bool augment) {
    cloud.validate();
    if (cloud.size() < 3) {
        raise(ErrorCode::invalid_input, "triangular features need at least 3 points");
    }

    const NeighborIndex nn = knn_indexed(cloud, 2);

    // One draw for the whole instance, before the per-point loop.
    const bool invert = augment && rng_bernoulli(stream, 0.5);
    const double edge_div = mode == CentroidMode::edge_mean ? 2.0 : 3.0;

    std::vector<TriangularFeature> out(cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const Vec3d p(cloud.points[i]);
        const auto row = nn.row(i);
        const Vec3d e1 = Vec3d(cloud.points[row[0]]) - p;
        const Vec3d e2 = Vec3d(cloud.points[row[1]]) - p;

        const Vec3d rel_centroid = (e1 + e2) / edge_div;
        const Vec3d abs_centroid = p + rel_centroid;

        TriangularFeature& f = out[i];
        f.centroid = Vec3f(abs_centroid);

        const Vec3d cross = e1.cross(e2);
        const double cross_norm = cross.norm();
        if (cross_norm < kDegenerateCrossNorm) {
            f.degenerate = true;
            continue;  // zero normal, zero position
        }

        Vec3d normal = cross / cross_norm;
        if (!(normal.x > 0.0)) normal = -normal;  // strict mask: a == 0 flips
        if (invert) normal = -normal;

        const Vec3d pos_ref = frame == PositionFrame::absolute ? abs_centroid : rel_centroid;
        f.normal = Vec3f(normal);
        f.position = static_cast<float>(normal.dot(pos_ref) * kInvSqrt3);
    }
    return out;
}

double umbrella_curvature(const Vec3d& point, std::span<const Vec3d> neighbors,
                          const Vec3d& given_normal) {
    if (std::abs(given_normal.norm() - 1.0) > 1e-6) {
        raise(ErrorCode::invalid_argument, "umbrella curvature requires a unit normal");
    }
    double u = 0.0;
    for (const auto& nb : neighbors) {
        const Vec3d d = nb - point;
        const double len = d.norm();
        if (len == 0.0) {
            raise(ErrorCode::invalid_input, "umbrella curvature neighbor coincides with the point");
        }
        u += std::abs((d / len).dot(given_normal));
    }
    return u;
}

}  // namespace repsurf
