#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "repsurf/point_cloud.hpp"

namespace repsurf {

/// Dense float32 payload, row-major. The on-disk RSRF container is:
/// magic "RSRF" | u32 version=1 | u64 rows | u32 channels | payload f32,
/// all little-endian, payload exactly rows*channels*4 bytes, values finite.
struct Matrix {
    std::size_t rows = 0;
    std::size_t channels = 0;
    std::vector<float> data;  // rows * channels

    float& at(std::size_t r, std::size_t c) { return data[r * channels + c]; }
    float at(std::size_t r, std::size_t c) const { return data[r * channels + c]; }
};

Matrix read_rsrf(const std::string& path);
void write_rsrf(const std::string& path, const Matrix& m);

/// Text cloud format: whitespace-separated "x y z [attrs...]" per line,
/// '#' lines ignored, decimal-point parsing independent of locale. Extra
/// columns become attributes (all rows must agree on the column count).
PointCloud read_xyz(const std::string& path);
void write_xyz(const std::string& path, const PointCloud& cloud);

/// Matrix as text, one row per line (used when a feature matrix is written
/// to a .xyz path).
void write_matrix_text(const std::string& path, const Matrix& m);

Matrix cloud_to_matrix(const PointCloud& cloud);     // channels = 3 + attr_dim
PointCloud matrix_to_cloud(const Matrix& m);         // needs channels >= 3

enum class FileKind { xyz, rsrf };

/// Picks the format from the extension; for reads with an unknown extension
/// the file magic decides (never a silent misread: RSRF magic is verified on
/// every binary read).
FileKind infer_kind(const std::string& path, bool for_read);

PointCloud load_cloud(const std::string& path);
void save_cloud(const std::string& path, const PointCloud& cloud);
Matrix load_matrix(const std::string& path);
void save_matrix(const std::string& path, const Matrix& m);

}  // namespace repsurf
