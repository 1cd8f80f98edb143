#include "repsurf/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "repsurf/error.hpp"

namespace repsurf {

namespace {

constexpr std::array<unsigned char, 4> kMagic = {0x52, 0x53, 0x52, 0x46};  // "RSRF"
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& os, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16),
                          static_cast<unsigned char>(v >> 24)};
    os.write(reinterpret_cast<const char*>(b), 4);
}

void put_u64(std::ostream& os, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint32_t get_u32(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
           static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

std::uint64_t get_u64(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
    return v;
}

float f32_from_le(const unsigned char* p) {
    const std::uint32_t bits = get_u32(p);
    float f;
    std::memcpy(&f, &bits, 4);
    return f;
}

void f32_to_le(float f, unsigned char* p) {
    std::uint32_t bits;
    std::memcpy(&bits, &f, 4);
    p[0] = static_cast<unsigned char>(bits);
    p[1] = static_cast<unsigned char>(bits >> 8);
    p[2] = static_cast<unsigned char>(bits >> 16);
    p[3] = static_cast<unsigned char>(bits >> 24);
}

}  // namespace

Matrix read_rsrf(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        raise(ErrorCode::format_error, "cannot open '" + path + "' for reading");
    }

    unsigned char header[20];
    in.read(reinterpret_cast<char*>(header), sizeof(header));
    if (in.gcount() != sizeof(header)) {
        raise(ErrorCode::format_error, "'" + path + "': truncated header (need 20 bytes)");
    }
    for (int i = 0; i < 4; ++i) {
        if (header[i] != kMagic[i]) {
            raise(ErrorCode::format_error,
                  "'" + path + "': bad magic at byte " + std::to_string(i));
        }
    }
    const std::uint32_t version = get_u32(header + 4);
    if (version != kVersion) {
        raise(ErrorCode::format_error,
              "'" + path + "': unsupported version " + std::to_string(version));
    }

    Matrix m;
    m.rows = get_u64(header + 8);
    m.channels = get_u32(header + 16);

    in.seekg(0, std::ios::end);
    const std::uint64_t file_size = static_cast<std::uint64_t>(in.tellg());
    in.seekg(20, std::ios::beg);

    const std::uint64_t values = static_cast<std::uint64_t>(m.rows) * m.channels;
    if (file_size < 20 + values * 4) {
        raise(ErrorCode::format_error,
              "'" + path + "': truncated payload (expected " + std::to_string(values * 4) +
                  " bytes at offset 20, file holds " + std::to_string(file_size - 20) + ")");
    }
    std::vector<unsigned char> payload(values * 4);
    in.read(reinterpret_cast<char*>(payload.data()), static_cast<std::streamsize>(payload.size()));
    if (static_cast<std::uint64_t>(in.gcount()) != payload.size()) {
        raise(ErrorCode::format_error, "'" + path + "': short read on payload");
    }
    if (file_size != 20 + values * 4) {
        raise(ErrorCode::format_error, "'" + path + "': trailing bytes after payload");
    }

    m.data.resize(values);
    for (std::uint64_t i = 0; i < values; ++i) {
        m.data[i] = f32_from_le(payload.data() + i * 4);
        if (!std::isfinite(m.data[i])) {
            raise(ErrorCode::validation_error,
                  "'" + path + "': non-finite value at payload index " + std::to_string(i));
        }
    }
    return m;
}

void write_rsrf(const std::string& path, const Matrix& m) {
    if (m.data.size() != m.rows * m.channels) {
        raise(ErrorCode::invalid_argument, "matrix buffer does not match rows * channels");
    }
    for (std::size_t i = 0; i < m.data.size(); ++i) {
        if (!std::isfinite(m.data[i])) {
            raise(ErrorCode::validation_error,
                  "refusing to write non-finite value at payload index " + std::to_string(i));
        }
    }

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        raise(ErrorCode::io_error, "cannot open '" + path + "' for writing");
    }
    out.write(reinterpret_cast<const char*>(kMagic.data()), 4);
    put_u32(out, kVersion);
    put_u64(out, m.rows);
    put_u32(out, static_cast<std::uint32_t>(m.channels));

    std::vector<unsigned char> payload(m.data.size() * 4);
    for (std::size_t i = 0; i < m.data.size(); ++i) {
        f32_to_le(m.data[i], payload.data() + i * 4);
    }
    out.write(reinterpret_cast<const char*>(payload.data()),
              static_cast<std::streamsize>(payload.size()));
    if (!out) {
        raise(ErrorCode::io_error, "write failed for '" + path + "'");
    }
}

namespace {

bool parse_value(std::string_view token, double& out) {
    const char* first = token.data();
    const char* last = token.data() + token.size();
    const auto result = std::from_chars(first, last, out);
    return result.ec == std::errc() && result.ptr == last;
}

}  // namespace

PointCloud read_xyz(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        raise(ErrorCode::format_error, "cannot open '" + path + "' for reading");
    }

    PointCloud cloud;
    std::string line;
    std::size_t line_no = 0;
    std::size_t columns = 0;
    std::vector<double> values;

    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view(line);
        // strip comments and surrounding whitespace
        if (const auto hash = view.find('#'); hash != std::string_view::npos) {
            view = view.substr(0, hash);
        }
        values.clear();
        std::size_t pos = 0;
        while (pos < view.size()) {
            while (pos < view.size() && std::isspace(static_cast<unsigned char>(view[pos]))) ++pos;
            std::size_t end = pos;
            while (end < view.size() && !std::isspace(static_cast<unsigned char>(view[end]))) ++end;
            if (end > pos) {
                double v;
                if (!parse_value(view.substr(pos, end - pos), v)) {
                    raise(ErrorCode::format_error, "'" + path + "' line " +
                                                       std::to_string(line_no) +
                                                       ": unparseable number");
                }
                if (!std::isfinite(v)) {
                    raise(ErrorCode::validation_error, "'" + path + "' line " +
                                                           std::to_string(line_no) +
                                                           ": non-finite coordinate");
                }
                values.push_back(v);
            }
            pos = end;
        }
        if (values.empty()) continue;  // blank or comment-only line
        if (values.size() < 3) {
            raise(ErrorCode::format_error,
                  "'" + path + "' line " + std::to_string(line_no) + ": fewer than 3 columns");
        }
        if (columns == 0) {
            columns = values.size();
            cloud.attr_dim = columns - 3;
        } else if (values.size() != columns) {
            raise(ErrorCode::format_error, "'" + path + "' line " + std::to_string(line_no) +
                                               ": inconsistent column count");
        }
        cloud.points.push_back({static_cast<float>(values[0]), static_cast<float>(values[1]),
                                static_cast<float>(values[2])});
        for (std::size_t c = 3; c < values.size(); ++c) {
            cloud.attrs.push_back(static_cast<float>(values[c]));
        }
    }
    if (cloud.empty()) {
        raise(ErrorCode::format_error, "'" + path + "': no points");
    }
    return cloud;
}

namespace {

void write_float(std::ostream& os, float v) {
    // %.9g keeps float32 round-trips exact and is locale-independent through
    // to_chars.
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    os.write(buf, res.ptr - buf);
}

}  // namespace

void write_xyz(const std::string& path, const PointCloud& cloud) {
    cloud.validate();
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        raise(ErrorCode::io_error, "cannot open '" + path + "' for writing");
    }
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const Vec3f& p = cloud.points[i];
        write_float(out, p.x);
        out.put(' ');
        write_float(out, p.y);
        out.put(' ');
        write_float(out, p.z);
        for (float a : cloud.attr_row(i)) {
            out.put(' ');
            write_float(out, a);
        }
        out.put('\n');
    }
    if (!out) {
        raise(ErrorCode::io_error, "write failed for '" + path + "'");
    }
}

void write_matrix_text(const std::string& path, const Matrix& m) {
    if (m.data.size() != m.rows * m.channels) {
        raise(ErrorCode::invalid_argument, "matrix buffer does not match rows * channels");
    }
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        raise(ErrorCode::io_error, "cannot open '" + path + "' for writing");
    }
    for (std::size_t r = 0; r < m.rows; ++r) {
        for (std::size_t c = 0; c < m.channels; ++c) {
            if (c > 0) out.put(' ');
            write_float(out, m.at(r, c));
        }
        out.put('\n');
    }
    if (!out) {
        raise(ErrorCode::io_error, "write failed for '" + path + "'");
    }
}

Matrix cloud_to_matrix(const PointCloud& cloud) {
    Matrix m;
    m.rows = cloud.size();
    m.channels = 3 + cloud.attr_dim;
    m.data.reserve(m.rows * m.channels);
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        m.data.push_back(cloud.points[i].x);
        m.data.push_back(cloud.points[i].y);
        m.data.push_back(cloud.points[i].z);
        for (float a : cloud.attr_row(i)) m.data.push_back(a);
    }
    return m;
}

PointCloud matrix_to_cloud(const Matrix& m) {
    if (m.channels < 3) {
        raise(ErrorCode::format_error, "a cloud matrix needs at least 3 channels");
    }
    PointCloud cloud;
    cloud.attr_dim = m.channels - 3;
    cloud.points.reserve(m.rows);
    for (std::size_t r = 0; r < m.rows; ++r) {
        cloud.points.push_back({m.at(r, 0), m.at(r, 1), m.at(r, 2)});
        for (std::size_t c = 3; c < m.channels; ++c) cloud.attrs.push_back(m.at(r, c));
    }
    return cloud;
}

FileKind infer_kind(const std::string& path, bool for_read) {
    const auto dot = path.find_last_of('.');
    std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
    for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (ext == "rsrf") return FileKind::rsrf;
    if (ext == "xyz" || ext == "txt") return FileKind::xyz;
    if (for_read) {
        // Unknown extension: the magic decides.
        std::ifstream probe(path, std::ios::binary);
        unsigned char head[4] = {0, 0, 0, 0};
        probe.read(reinterpret_cast<char*>(head), 4);
        if (probe.gcount() == 4 && std::memcmp(head, kMagic.data(), 4) == 0) {
            return FileKind::rsrf;
        }
        return FileKind::xyz;
    }
    return FileKind::rsrf;
}

PointCloud load_cloud(const std::string& path) {
    if (infer_kind(path, true) == FileKind::rsrf) {
        return matrix_to_cloud(read_rsrf(path));
    }
    return read_xyz(path);
}

void save_cloud(const std::string& path, const PointCloud& cloud) {
    if (infer_kind(path, false) == FileKind::rsrf) {
        write_rsrf(path, cloud_to_matrix(cloud));
    } else {
        write_xyz(path, cloud);
    }
}

Matrix load_matrix(const std::string& path) {
    if (infer_kind(path, true) == FileKind::rsrf) {
        return read_rsrf(path);
    }
    return cloud_to_matrix(read_xyz(path));
}

void save_matrix(const std::string& path, const Matrix& m) {
    if (infer_kind(path, false) == FileKind::rsrf) {
        write_rsrf(path, m);
    } else {
        write_matrix_text(path, m);
    }
}

}  // namespace repsurf
