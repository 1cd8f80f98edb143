#include <doctest.h>

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "oracles.hpp"
#include "repsurf/error.hpp"
#include "repsurf/geometry.hpp"
#include "repsurf/io.hpp"
#include "repsurf/synth.hpp"
#include "repsurf/triangular.hpp"

using namespace repsurf;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("repsurf-test-" + std::to_string(::getpid()) + "-" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
    static int& counter() {
        static int n = 0;
        return n;
    }
};

}  // namespace

TEST_CASE("empty rsrf payload is a valid 20-byte file") {
    TempDir dir;
    Matrix m;
    m.rows = 0;
    m.channels = 7;
    write_rsrf(dir.file("empty.rsrf"), m);
    CHECK(fs::file_size(dir.file("empty.rsrf")) == 20);
    const Matrix back = read_rsrf(dir.file("empty.rsrf"));
    CHECK(back.rows == 0);
    CHECK(back.channels == 7);
}

TEST_CASE("rsrf round trip is bitwise identical") {
    TempDir dir;
    Matrix m;
    m.rows = 1;
    m.channels = 7;
    m.data = {0.1f, -2.5f, 3e-8f, 4e8f, -0.0f, 1.0f / 3.0f, 7.0f};
    write_rsrf(dir.file("row.rsrf"), m);
    const Matrix back = read_rsrf(dir.file("row.rsrf"));
    REQUIRE(back.data.size() == m.data.size());
    for (std::size_t i = 0; i < m.data.size(); ++i) {
        CHECK(std::memcmp(&back.data[i], &m.data[i], 4) == 0);
    }
}

TEST_CASE("random matrix survives the rsrf round trip bitwise") {
    TempDir dir;
    RngStream rng(131);
    Matrix m;
    m.rows = 64;
    m.channels = 5;
    for (std::size_t i = 0; i < m.rows * m.channels; ++i) {
        m.data.push_back(static_cast<float>(rng.uniform(-1e6, 1e6)));
    }
    write_rsrf(dir.file("rand.rsrf"), m);
    const Matrix back = read_rsrf(dir.file("rand.rsrf"));
    CHECK(std::memcmp(back.data.data(), m.data.data(), m.data.size() * 4) == 0);
}

TEST_CASE("bad magic reports the failing byte") {
    TempDir dir;
    Matrix m;
    m.rows = 0;
    m.channels = 1;
    const std::string path = dir.file("bad.rsrf");
    write_rsrf(path, m);
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(3);
    f.put('X');  // RSRF -> RSRX
    f.close();
    try {
        read_rsrf(path);
        FAIL("expected a format error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::format_error);
        CHECK(std::string(e.what()).find("byte 3") != std::string::npos);
    }
}

TEST_CASE("truncated payload and trailing bytes are format errors") {
    TempDir dir;
    Matrix m;
    m.rows = 2;
    m.channels = 3;
    m.data = {1, 2, 3, 4, 5, 6};
    const std::string path = dir.file("trunc.rsrf");
    write_rsrf(path, m);
    fs::resize_file(path, fs::file_size(path) - 5);
    CHECK_THROWS_AS(read_rsrf(path), Error);

    const std::string extended = dir.file("trail.rsrf");
    write_rsrf(extended, m);
    std::ofstream app(extended, std::ios::binary | std::ios::app);
    app.put('\0');
    app.close();
    CHECK_THROWS_AS(read_rsrf(extended), Error);
}

TEST_CASE("non-finite payloads are rejected in both directions") {
    TempDir dir;
    Matrix m;
    m.rows = 1;
    m.channels = 1;
    m.data = {std::numeric_limits<float>::quiet_NaN()};
    CHECK_THROWS_AS(write_rsrf(dir.file("nan.rsrf"), m), Error);

    // craft a file with an infinity payload by patching a valid one
    m.data = {1.0f};
    const std::string path = dir.file("inf.rsrf");
    write_rsrf(path, m);
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(20);
    const unsigned char inf_le[4] = {0x00, 0x00, 0x80, 0x7F};
    f.write(reinterpret_cast<const char*>(inf_le), 4);
    f.close();
    try {
        read_rsrf(path);
        FAIL("expected a validation error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::validation_error);
    }
}

TEST_CASE("xyz parsing: comments, attrs, and strict columns") {
    TempDir dir;
    const std::string path = dir.file("cloud.xyz");
    {
        std::ofstream f(path);
        f << "# a comment line\n";
        f << "0.5 -1.25 3 7 8\n";
        f << "\n";
        f << "1 2 3 9 10  # trailing comment\n";
    }
    const PointCloud cloud = read_xyz(path);
    REQUIRE(cloud.size() == 2);
    CHECK(cloud.points[0] == Vec3f{0.5f, -1.25f, 3.0f});
    CHECK(cloud.attr_dim == 2);
    CHECK(cloud.attr_row(1)[0] == 9.0f);
    CHECK(cloud.attr_row(1)[1] == 10.0f);

    {
        std::ofstream f(dir.file("short.xyz"));
        f << "1 2\n";
    }
    CHECK_THROWS_AS(read_xyz(dir.file("short.xyz")), Error);

    {
        std::ofstream f(dir.file("junk.xyz"));
        f << "1 2 three\n";
    }
    CHECK_THROWS_AS(read_xyz(dir.file("junk.xyz")), Error);

    {
        std::ofstream f(dir.file("inf.xyz"));
        f << "1 2 inf\n";
    }
    try {
        read_xyz(dir.file("inf.xyz"));
        FAIL("expected a validation error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::validation_error);
    }
}

TEST_CASE("xyz write/read round trip preserves float32 values") {
    TempDir dir;
    RngStream rng(132);
    PointCloud cloud = oracles::random_cloud(50, rng, -100.0, 100.0);
    cloud.attr_dim = 1;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        cloud.attrs.push_back(static_cast<float>(rng.uniform(0, 6)));
    }
    const std::string path = dir.file("round.xyz");
    write_xyz(path, cloud);
    const PointCloud back = read_xyz(path);
    REQUIRE(back.size() == cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        CHECK(back.points[i] == cloud.points[i]);  // exact: shortest-repr output
        CHECK(back.attrs[i] == cloud.attrs[i]);
    }
}

TEST_CASE("format inference verifies magic for unknown extensions") {
    TempDir dir;
    Matrix m;
    m.rows = 1;
    m.channels = 3;
    m.data = {1, 2, 3};
    const std::string disguised = dir.file("payload.bin");
    write_rsrf(disguised, m);
    CHECK(infer_kind(disguised, true) == FileKind::rsrf);
    const PointCloud cloud = load_cloud(disguised);
    CHECK(cloud.points[0] == Vec3f{1, 2, 3});

    const std::string text = dir.file("plain.dat");
    {
        std::ofstream f(text);
        f << "4 5 6\n";
    }
    CHECK(infer_kind(text, true) == FileKind::xyz);
    CHECK(load_cloud(text).points[0] == Vec3f{4, 5, 6});
}

TEST_CASE("cloud/matrix conversions preserve attributes") {
    PointCloud cloud;
    cloud.points = {{1, 2, 3}, {4, 5, 6}};
    cloud.attr_dim = 2;
    cloud.attrs = {7, 8, 9, 10};
    const Matrix m = cloud_to_matrix(cloud);
    CHECK(m.channels == 5);
    const PointCloud back = matrix_to_cloud(m);
    CHECK(back.points == cloud.points);
    CHECK(back.attrs == cloud.attrs);

    Matrix narrow;
    narrow.rows = 1;
    narrow.channels = 2;
    narrow.data = {1, 2};
    CHECK_THROWS_AS(matrix_to_cloud(narrow), Error);
}

TEST_CASE("sphere samples lie on the unit sphere at zero noise") {
    RngStream rng(133);
    const SynthResult sphere = synth_shape(ShapeKind::sphere, 1000, 0.0f, rng);
    for (const auto& p : sphere.cloud.points) {
        CHECK(std::abs(Vec3d(p).norm() - 1.0) <= 1e-6);
    }
    CHECK(sphere.labels.empty());
}

TEST_CASE("cube emits all six faces plus the edge band") {
    RngStream rng(134);
    const SynthResult cube = synth_shape(ShapeKind::cube, 6000, 0.0f, rng);
    REQUIRE(cube.labels.size() == 6000);
    std::array<std::size_t, 7> counts{};
    for (std::int32_t label : cube.labels) {
        REQUIRE(label >= 0);
        REQUIRE(label <= 6);
        ++counts[label];
    }
    for (std::size_t c : counts) CHECK(c > 0);
    CHECK(cube.label_names.size() == 7);
}

TEST_CASE("plane regions carry sign-consistent vertical normals at zero noise") {
    RngStream rng(135);
    const SynthResult plane = synth_shape(ShapeKind::plane_with_step, 2000, 0.0f, rng);
    RngStream feat_rng(0);
    const auto features = triangular_repsurf(plane.cloud, CentroidMode::edge_mean,
                                             PositionFrame::absolute, feat_rng, false);
    for (std::size_t i = 0; i < features.size(); ++i) {
        if (features[i].degenerate) continue;
        // identical up to the first-component sign rule: +/-(0,0,1)
        CHECK(std::abs(features[i].normal.x) <= 1e-5f);
        CHECK(std::abs(features[i].normal.y) <= 1e-5f);
        CHECK(std::abs(std::abs(features[i].normal.z) - 1.0f) <= 1e-5f);
    }
}

TEST_CASE("hexagon fan centers the lattice on the origin") {
    RngStream rng(136);
    const SynthResult hex = synth_shape(ShapeKind::hexagon_fan, 64, 0.0f, rng);
    REQUIRE(hex.cloud.size() == 64);
    CHECK(hex.cloud.points[0] == Vec3f{0, 0, 0});

    const NeighborIndex nn = knn_bruteforce(hex.cloud, 6);
    const double first = distance(hex.cloud.points[0], hex.cloud.points[nn.row(0)[0]]);
    for (std::uint32_t idx : nn.row(0)) {
        CHECK(distance(hex.cloud.points[0], hex.cloud.points[idx]) ==
              doctest::Approx(first).epsilon(1e-6));
    }
}

TEST_CASE("synthetic shapes reject tiny counts and are seed-deterministic") {
    RngStream rng(137);
    CHECK_THROWS_AS(synth_shape(ShapeKind::sphere, 4, 0.0f, rng), Error);

    RngStream a(7), b(7);
    const SynthResult ra = synth_shape(ShapeKind::cube, 100, 0.01f, a);
    const SynthResult rb = synth_shape(ShapeKind::cube, 100, 0.01f, b);
    CHECK(ra.cloud.points == rb.cloud.points);
    CHECK(ra.labels == rb.labels);
}
