#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "repsurf/error.hpp"
#include "repsurf/geometry.hpp"
#include "repsurf/umbrella.hpp"

using namespace repsurf;

namespace {

// Center at `origin` plus a scrambled unit hexagon around it, with one far
// point so N > k holds.
PointCloud hexagon_cloud(const Vec3f& origin) {
    PointCloud cloud;
    cloud.points.push_back(origin);
    const int scrambled[] = {2, 5, 0, 3, 1, 4};
    for (int i : scrambled) {
        const double a = i * M_PI / 3.0;
        cloud.points.push_back(origin + Vec3f{static_cast<float>(std::cos(a)),
                                              static_cast<float>(std::sin(a)), 0});
    }
    cloud.points.push_back(origin + Vec3f{5, 5, 5});
    return cloud;
}

UmbrellaConfig identity_cfg(std::uint32_t k, InputLayout layout,
                            Aggregation agg = Aggregation::sum) {
    UmbrellaConfig cfg;
    cfg.k = k;
    cfg.layout = layout;
    cfg.aggregation = agg;
    return cfg;
}

}  // namespace

TEST_CASE("hexagon fan: six consistent flipped normals") {
    const PointCloud cloud = hexagon_cloud({0, 0, 0});
    UmbrellaConfig cfg = identity_cfg(6, InputLayout::n);
    RngStream stream(0);
    const auto surfaces = build_umbrella(cloud, cfg, stream);

    const UmbrellaSurface& fan = surfaces[0];
    REQUIRE(fan.triangles.size() == 6);
    for (const auto& tri : fan.triangles) {
        CHECK_FALSE(tri.degenerate);
        // leader a == 0 triggers the flip, so the whole fan points down
        CHECK(tri.normal.x == doctest::Approx(0.0));
        CHECK(tri.normal.y == doctest::Approx(0.0));
        CHECK(tri.normal.z == doctest::Approx(-1.0));
        CHECK(tri.position == doctest::Approx(0.0));
    }
}

TEST_CASE("translated hexagon keeps normals, shifts positions") {
    const PointCloud cloud = hexagon_cloud({0, 0, 1});
    UmbrellaConfig cfg = identity_cfg(6, InputLayout::n_p);
    RngStream stream(0);
    const auto surfaces = build_umbrella(cloud, cfg, stream);

    for (const auto& tri : surfaces[0].triangles) {
        CHECK(tri.normal.z == doctest::Approx(-1.0));
        CHECK(tri.position == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-6));
    }
}

TEST_CASE("hexagon umbrella feature under identity transform") {
    const PointCloud cloud = hexagon_cloud({0, 0, 0});
    RngStream stream(0);
    const auto sum = umbrella_repsurf(cloud, identity_cfg(6, InputLayout::n), stream);
    REQUIRE(sum[0].feature.size() == 3);
    CHECK(sum[0].feature[0] == doctest::Approx(0.0));
    CHECK(sum[0].feature[1] == doctest::Approx(0.0));
    CHECK(sum[0].feature[2] == doctest::Approx(-6.0));
    // representative centroid of the regular hexagon fan is the point itself
    CHECK(sum[0].centroid.x == doctest::Approx(0.0));
    CHECK(sum[0].centroid.y == doctest::Approx(0.0));
    CHECK(sum[0].centroid.z == doctest::Approx(0.0));

    RngStream stream2(0);
    const auto mean =
        umbrella_repsurf(cloud, identity_cfg(6, InputLayout::n, Aggregation::mean), stream2);
    CHECK(mean[0].feature[2] == doctest::Approx(-1.0));
}

TEST_CASE("unsorted neighbors pair exactly like the azimuth-sorted construction") {
    // azimuths 90, 0, 270, 180 with mixed inclinations
    const std::vector<Vec3f> unsorted{{0, 1, 0.2f}, {1, 0, -0.1f}, {0, -1, 0.3f}, {-1, 0, 0.0f}};
    const std::vector<Vec3f> sorted{{1, 0, -0.1f}, {0, 1, 0.2f}, {-1, 0, 0.0f}, {0, -1, 0.3f}};

    UmbrellaConfig cfg = identity_cfg(4, InputLayout::n_p_cp);
    const UmbrellaSurface a = build_fan({0, 0, 0}, unsorted, cfg, false);
    const UmbrellaSurface b = build_fan({0, 0, 0}, sorted, cfg, false);

    REQUIRE(a.triangles.size() == b.triangles.size());
    for (std::size_t j = 0; j < a.triangles.size(); ++j) {
        CHECK(a.triangles[j].normal == b.triangles[j].normal);
        CHECK(a.triangles[j].centroid == b.triangles[j].centroid);
        CHECK(a.triangles[j].position == b.triangles[j].position);
    }
}

TEST_CASE("shuffling the neighbor list leaves the fan unchanged") {
    RngStream rng(91);
    std::vector<Vec3f> offsets;
    for (int i = 0; i < 8; ++i) {
        offsets.push_back({static_cast<float>(rng.uniform(-1, 1)),
                           static_cast<float>(rng.uniform(-1, 1)),
                           static_cast<float>(rng.uniform(-1, 1))});
    }
    std::vector<Vec3f> shuffled = offsets;
    for (std::size_t i = shuffled.size(); i > 1; --i) {
        std::swap(shuffled[i - 1], shuffled[rng.below(i)]);
    }

    UmbrellaConfig cfg = identity_cfg(8, InputLayout::n_p_cp);
    const UmbrellaSurface a = build_fan({0.2f, 0.1f, -0.3f}, offsets, cfg, false);
    const UmbrellaSurface b = build_fan({0.2f, 0.1f, -0.3f}, shuffled, cfg, false);
    CHECK(assemble_rows(a, cfg.layout) == assemble_rows(b, cfg.layout));
}

TEST_CASE("umbrella matches an independent 64-bit loop implementation") {
    RngStream cloud_rng(92);
    const PointCloud cloud = oracles::random_cloud(96, cloud_rng);

    RngStream weight_rng(93);
    const std::size_t widths[] = {10, 16, 16, 10};
    const MlpParams mlp = make_repsurf_transform(widths, weight_rng);

    UmbrellaConfig cfg = identity_cfg(8, InputLayout::n_p_cp);
    cfg.transform = &mlp;
    RngStream stream(0);
    const auto features = umbrella_repsurf(cloud, cfg, stream);

    const double inv_sqrt3 = 1.0 / std::sqrt(3.0);
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        // independent reconstruction: full-sort kNN, reference azimuth sort,
        // explicit pair loop, reference polar, scalar MLP, plain sum
        const auto row = oracles::naive_knn_row(cloud, i, 8);
        std::vector<Vec3d> offsets;
        const Vec3d p(cloud.points[i]);
        for (std::uint32_t idx : row) offsets.push_back(Vec3d(cloud.points[idx]) - p);
        const auto order = oracles::reference_ccw_order(offsets);

        std::vector<Vec3d> edges;
        for (std::uint32_t idx : order) edges.push_back(offsets[idx]);

        std::vector<Vec3d> normals(8), rels(8);
        for (std::size_t j = 0; j < 8; ++j) {
            const Vec3d& e1 = edges[j];
            const Vec3d& e2 = edges[(j + 1) % 8];
            rels[j] = (e1 + e2) / 2.0;
            const Vec3d cross = e1.cross(e2);
            normals[j] = cross.norm() < 1e-12 ? Vec3d{0, 0, 0} : cross / cross.norm();
        }
        const double flip = normals[0].x > 0.0 ? 1.0 : -1.0;

        std::vector<double> acc(10, 0.0);
        Vec3d centroid_mean;
        for (std::size_t j = 0; j < 8; ++j) {
            const Vec3d n = normals[j] * flip;
            const Vec3d c_abs = p + rels[j];
            centroid_mean = centroid_mean + c_abs;
            const double pos = normals[j].squared_norm() == 0.0
                                   ? 0.0
                                   : n.dot(c_abs) * inv_sqrt3;
            const oracles::Spherical sph = oracles::reference_spherical(rels[j]);
            const std::vector<double> in_row{n.x,       n.y,     n.z,     pos,     rels[j].x,
                                             rels[j].y, rels[j].z, sph.rho, sph.theta, sph.phi};
            const std::vector<double> out_row = oracles::scalar_mlp(mlp, in_row);
            for (std::size_t c = 0; c < 10; ++c) acc[c] += out_row[c];
        }
        centroid_mean = centroid_mean / 8.0;

        const UmbrellaFeature& got = features[i];
        REQUIRE(got.feature.size() == 10);
        for (std::size_t c = 0; c < 10; ++c) {
            CHECK(std::abs(got.feature[c] - acc[c]) <=
                  1e-4 * std::max(1.0, std::abs(acc[c])));
        }
        CHECK(std::abs(got.centroid.x - centroid_mean.x) < 1e-5);
        CHECK(std::abs(got.centroid.y - centroid_mean.y) < 1e-5);
        CHECK(std::abs(got.centroid.z - centroid_mean.z) < 1e-5);
    }
}

TEST_CASE("planar fans are internally consistent") {
    // 12x12 grid plane: interior points see all eight Moore neighbors
    PointCloud cloud;
    for (int y = 0; y < 12; ++y) {
        for (int x = 0; x < 12; ++x) {
            cloud.points.push_back({x * 0.1f, y * 0.1f, 0.0f});
        }
    }
    UmbrellaConfig cfg = identity_cfg(8, InputLayout::n);
    RngStream stream(0);
    const auto surfaces = build_umbrella(cloud, cfg, stream);

    std::size_t interior = 0;
    for (int y = 2; y < 10; ++y) {
        for (int x = 2; x < 10; ++x) {
            const UmbrellaSurface& fan = surfaces[y * 12 + x];
            const Vec3f first = fan.triangles[0].normal;
            for (const auto& tri : fan.triangles) {
                CHECK_FALSE(tri.degenerate);
                CHECK(std::abs(tri.normal.x - first.x) <= 1e-6f);
                CHECK(std::abs(tri.normal.y - first.y) <= 1e-6f);
                CHECK(std::abs(tri.normal.z - first.z) <= 1e-6f);
            }
            ++interior;
        }
    }
    CHECK(interior == 64);
}

TEST_CASE("aggregation contracts: sum additive, mean = sum/k, max idempotent") {
    RngStream rng(94);
    const std::size_t k = 6, width = 5;
    std::vector<double> rows(k * width);
    for (double& v : rows) v = rng.uniform(-2, 2);

    const auto sum = aggregate_rows(rows, k, width, Aggregation::sum);
    const auto mean = aggregate_rows(rows, k, width, Aggregation::mean);
    const auto mx = aggregate_rows(rows, k, width, Aggregation::max);

    // additive over a subset split
    const std::span<const double> all(rows);
    const auto front = aggregate_rows(all.subspan(0, 2 * width), 2, width, Aggregation::sum);
    const auto back = aggregate_rows(all.subspan(2 * width), k - 2, width, Aggregation::sum);
    for (std::size_t c = 0; c < width; ++c) {
        CHECK(sum[c] == doctest::Approx(front[c] + back[c]).epsilon(1e-12));
        CHECK(mean[c] == doctest::Approx(sum[c] / double(k)).epsilon(1e-12));
    }

    // duplicating every row leaves the max unchanged
    std::vector<double> doubled(rows.begin(), rows.end());
    doubled.insert(doubled.end(), rows.begin(), rows.end());
    const auto mx2 = aggregate_rows(doubled, 2 * k, width, Aggregation::max);
    CHECK(mx == mx2);
}

TEST_CASE("per-surface inverse negates N and P, fixes C and CP") {
    RngStream rng(95);
    std::vector<Vec3f> offsets;
    for (int i = 0; i < 8; ++i) {
        offsets.push_back({static_cast<float>(rng.uniform(-1, 1)),
                           static_cast<float>(rng.uniform(-1, 1)),
                           static_cast<float>(rng.uniform(-1, 1))});
    }
    UmbrellaConfig cfg = identity_cfg(8, InputLayout::n_p_cp);
    const Vec3f point{0.1f, 0.2f, 0.3f};
    const UmbrellaSurface plain = build_fan(point, offsets, cfg, false);
    const UmbrellaSurface inverted = build_fan(point, offsets, cfg, true);

    for (std::size_t j = 0; j < 8; ++j) {
        const auto& a = plain.triangles[j];
        const auto& b = inverted.triangles[j];
        CHECK(b.normal.x == doctest::Approx(-a.normal.x));
        CHECK(b.normal.y == doctest::Approx(-a.normal.y));
        CHECK(b.normal.z == doctest::Approx(-a.normal.z));
        CHECK(b.position == doctest::Approx(-a.position));
        CHECK(b.rel_centroid == a.rel_centroid);
        CHECK(b.centroid == a.centroid);
        CHECK(b.polar.rho == a.polar.rho);
        CHECK(b.polar.theta == a.polar.theta);
        CHECK(b.polar.phi == a.polar.phi);
    }
}

TEST_CASE("augmentation draws are consumed in input order") {
    RngStream cloud_rng(96);
    const PointCloud cloud = oracles::random_cloud(24, cloud_rng);
    UmbrellaConfig cfg = identity_cfg(5, InputLayout::n);
    cfg.augment = true;

    RngStream stream(123);
    const auto surfaces = build_umbrella(cloud, cfg, stream);

    // replay: same seed, the i-th draw decides the i-th surface
    RngStream replay(123);
    const NeighborIndex nn = knn_bruteforce(cloud, 5);
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const bool invert = rng_bernoulli(replay, 0.5);
        std::vector<Vec3f> offsets;
        for (std::uint32_t idx : nn.row(i)) {
            offsets.push_back(cloud.points[idx] - cloud.points[i]);
        }
        const UmbrellaSurface expected = build_fan(cloud.points[i], offsets, cfg, invert);
        CHECK(assemble_rows(expected, cfg.layout) == assemble_rows(surfaces[i], cfg.layout));
    }
}

TEST_CASE("k = 2 degenerates to opposed triangular normals") {
    RngStream cloud_rng(97);
    const PointCloud cloud = oracles::random_cloud(32, cloud_rng);
    RngStream stream(0);
    const auto features =
        degenerate_to_triangular(cloud, stream, identity_cfg(2, InputLayout::n));

    RngStream stream2(0);
    const auto surfaces = build_umbrella(cloud, identity_cfg(2, InputLayout::n), stream2);

    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const auto& tris = surfaces[i].triangles;
        REQUIRE(tris.size() == 2);
        if (tris[0].degenerate || tris[1].degenerate) continue;
        const double dot = Vec3d(tris[0].normal).dot(Vec3d(tris[1].normal));
        CHECK(dot == doctest::Approx(-1.0).epsilon(1e-6));
        for (std::size_t c = 0; c < 3; ++c) {
            CHECK(std::abs(features[i].feature[c]) <= 1e-6f);
        }
    }
}

TEST_CASE("k = 2 with a transform yields finite features of width C") {
    RngStream cloud_rng(98);
    const PointCloud cloud = oracles::random_cloud(32, cloud_rng);
    RngStream weight_rng(99);
    const std::size_t widths[] = {10, 12, 12, 6};
    const MlpParams mlp = make_repsurf_transform(widths, weight_rng);

    UmbrellaConfig cfg = identity_cfg(2, InputLayout::n_p_cp);
    cfg.transform = &mlp;
    RngStream stream(0);
    const auto features = degenerate_to_triangular(cloud, stream, cfg);
    for (const auto& f : features) {
        REQUIRE(f.feature.size() == 6);
        for (float v : f.feature) CHECK(std::isfinite(v));
    }
}

TEST_CASE("k = 2 with collinear neighbors flags both triangles") {
    PointCloud cloud;
    for (int i = 0; i < 8; ++i) cloud.points.push_back({float(i), 0, 0});
    RngStream stream(0);
    const auto surfaces = build_umbrella(cloud, identity_cfg(2, InputLayout::n), stream);
    for (const auto& tri : surfaces[0].triangles) {
        CHECK(tri.degenerate);
        CHECK(tri.normal == Vec3f{0, 0, 0});
    }
}

TEST_CASE("every fan of a 1024-point cloud has exactly k triangles") {
    RngStream rng(100);
    const PointCloud cloud = oracles::random_cloud(1024, rng);
    RngStream stream(0);
    const auto surfaces = build_umbrella(cloud, identity_cfg(8, InputLayout::n_p_cp), stream);
    REQUIRE(surfaces.size() == 1024);
    for (const auto& s : surfaces) CHECK(s.triangles.size() == 8);
}

TEST_CASE("layout/transform width mismatch is a configuration error") {
    RngStream cloud_rng(101);
    const PointCloud cloud = oracles::random_cloud(32, cloud_rng);
    RngStream weight_rng(102);
    const std::size_t widths[] = {7, 8, 4};
    const MlpParams mlp = make_repsurf_transform(widths, weight_rng);

    UmbrellaConfig cfg = identity_cfg(4, InputLayout::n_p_cp);  // 10 channels vs 7
    cfg.transform = &mlp;
    RngStream stream(0);
    CHECK_THROWS_AS(umbrella_repsurf(cloud, cfg, stream), Error);
}

TEST_CASE("k >= N is rejected") {
    RngStream cloud_rng(103);
    const PointCloud cloud = oracles::random_cloud(8, cloud_rng);
    RngStream stream(0);
    CHECK_THROWS_AS(build_umbrella(cloud, identity_cfg(8, InputLayout::n), stream), Error);
}
