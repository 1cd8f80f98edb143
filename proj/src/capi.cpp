#include "repsurf.h"

#include <cmath>
#include <cstring>
#include <functional>
#include <memory>
#include <sstream>
#include <string>

#include "repsurf/analytics.hpp"
#include "repsurf/polar.hpp"
#include "repsurf/error.hpp"
#include "repsurf/geometry.hpp"
#include "repsurf/io.hpp"
#include "repsurf/mlp.hpp"
#include "repsurf/synth.hpp"
#include "repsurf/triangular.hpp"
#include "repsurf/umbrella.hpp"

using namespace repsurf;

struct rs_cloud {
    PointCloud cloud;
};

struct rs_matrix {
    Matrix m;
};

namespace {

thread_local std::string g_last_error;

rs_status to_status(ErrorCode code) {
    switch (code) {
        case ErrorCode::invalid_argument: return RS_ERR_INVALID_ARGUMENT;
        case ErrorCode::invalid_input: return RS_ERR_INVALID_INPUT;
        case ErrorCode::config_mismatch: return RS_ERR_CONFIG;
        case ErrorCode::invalid_state: return RS_ERR_INVALID_STATE;
        case ErrorCode::format_error: return RS_ERR_FORMAT;
        case ErrorCode::validation_error: return RS_ERR_VALIDATION;
        case ErrorCode::io_error: return RS_ERR_IO;
    }
    return RS_ERR_UNKNOWN;
}

// Runs the body, translating exceptions into status codes + g_last_error.
template <typename Fn>
rs_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return RS_OK;
    } catch (const Error& e) {
        g_last_error = e.what();
        return to_status(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return RS_ERR_UNKNOWN;
    } catch (...) {
        g_last_error = "unknown failure";
        return RS_ERR_UNKNOWN;
    }
}

void require(bool cond, const char* what) {
    if (!cond) raise(ErrorCode::invalid_argument, what);
}

PositionFrame parse_frame(const char* s) {
    const std::string v = s == nullptr ? "abs" : s;
    if (v == "abs" || v == "absolute") return PositionFrame::absolute;
    if (v == "rel" || v == "relative") return PositionFrame::relative_literal;
    raise(ErrorCode::invalid_argument, "frame must be 'abs' or 'rel'");
}

CentroidMode parse_centroid(const char* s) {
    const std::string v = s == nullptr ? "edge-mean" : s;
    if (v == "edge-mean") return CentroidMode::edge_mean;
    if (v == "triangle") return CentroidMode::triangle_centroid;
    raise(ErrorCode::invalid_argument, "centroid must be 'edge-mean' or 'triangle'");
}

InputLayout parse_layout(const char* s) {
    const std::string v = s == nullptr ? "n+p+cp" : s;
    if (v == "n") return InputLayout::n;
    if (v == "n+p") return InputLayout::n_p;
    if (v == "n+c") return InputLayout::n_c;
    if (v == "n+p+c") return InputLayout::n_p_c;
    if (v == "n+p+cp") return InputLayout::n_p_cp;
    raise(ErrorCode::invalid_argument, "layout must be one of n, n+p, n+c, n+p+c, n+p+cp");
}

Aggregation parse_aggregation(const char* s) {
    const std::string v = s == nullptr ? "sum" : s;
    if (v == "sum") return Aggregation::sum;
    if (v == "max") return Aggregation::max;
    if (v == "mean") return Aggregation::mean;
    raise(ErrorCode::invalid_argument, "aggregation must be 'sum', 'max' or 'mean'");
}

std::vector<std::size_t> parse_widths(const char* spec) {
    std::vector<std::size_t> widths;
    std::stringstream ss(spec);
    std::string token;
    while (std::getline(ss, token, ',')) {
        std::size_t pos = 0;
        unsigned long v = 0;
        try {
            v = std::stoul(token, &pos);
        } catch (...) {
            raise(ErrorCode::invalid_argument, "mlp widths must be comma-separated integers");
        }
        if (pos != token.size() || v == 0) {
            raise(ErrorCode::invalid_argument, "mlp widths must be positive integers");
        }
        widths.push_back(v);
    }
    if (widths.size() < 2) {
        raise(ErrorCode::invalid_argument, "mlp spec needs at least two widths");
    }
    return widths;
}

// Builds the optional transform and the config; the weight draws consume the
// stream before any augmentation draw, so one seed fixes the whole run.
struct UmbrellaSetup {
    UmbrellaConfig cfg;
    MlpParams transform;
    RngStream stream;
};

UmbrellaSetup make_setup(const rs_umbrella_opts& opts) {
    UmbrellaSetup setup;
    setup.stream = RngStream(opts.seed);
    setup.cfg.k = opts.k == 0 ? 8 : opts.k;
    setup.cfg.layout = parse_layout(opts.layout);
    setup.cfg.aggregation = parse_aggregation(opts.aggregation);
    setup.cfg.augment = opts.augment != 0;
    setup.cfg.frame = parse_frame(opts.frame);
    setup.cfg.centroid_mode = parse_centroid(opts.centroid);
    if (opts.mlp != nullptr) {
        const std::vector<std::size_t> widths = parse_widths(opts.mlp);
        if (widths.front() != layout_channels(setup.cfg.layout)) {
            raise(ErrorCode::config_mismatch,
                  "mlp input width " + std::to_string(widths.front()) +
                      " does not match layout '" + layout_name(setup.cfg.layout) + "' (" +
                      std::to_string(layout_channels(setup.cfg.layout)) + " channels)");
        }
        setup.transform = make_repsurf_transform(widths, setup.stream);
        if (opts.mlp_load != nullptr) {
            const Matrix m = read_rsrf(opts.mlp_load);
            load_parameters(setup.transform, m.data);
        }
        if (opts.mlp_save != nullptr) {
            Matrix m;
            m.rows = 1;
            m.data = flatten_parameters(setup.transform);
            m.channels = m.data.size();
            write_rsrf(opts.mlp_save, m);
        }
        setup.cfg.transform = &setup.transform;
    } else if (opts.mlp_load != nullptr || opts.mlp_save != nullptr) {
        raise(ErrorCode::config_mismatch,
              "mlp_load/mlp_save need an architecture given through the mlp widths");
    }
    return setup;
}

Matrix features_to_matrix(const std::vector<UmbrellaFeature>& features) {
    Matrix m;
    m.rows = features.size();
    m.channels = features.empty() ? 3 : 3 + features.front().feature.size();
    m.data.reserve(m.rows * m.channels);
    for (const auto& f : features) {
        m.data.push_back(f.centroid.x);
        m.data.push_back(f.centroid.y);
        m.data.push_back(f.centroid.z);
        for (float v : f.feature) m.data.push_back(v);
    }
    return m;
}

}  // namespace

extern "C" {

const char* rs_last_error(void) { return g_last_error.c_str(); }

const char* rs_status_name(rs_status status) {
    switch (status) {
        case RS_OK: return "ok";
        case RS_ERR_INVALID_ARGUMENT: return "invalid-argument";
        case RS_ERR_INVALID_INPUT: return "invalid-input";
        case RS_ERR_CONFIG: return "config-mismatch";
        case RS_ERR_INVALID_STATE: return "invalid-state";
        case RS_ERR_FORMAT: return "format-error";
        case RS_ERR_VALIDATION: return "validation-error";
        case RS_ERR_IO: return "io-error";
        case RS_ERR_UNKNOWN: return "unknown";
    }
    return "?";
}

const char* rs_version(void) { return "0.1.0"; }

rs_status rs_cloud_create(const float* xyz, size_t n, rs_cloud** out) {
    return guarded([&] {
        require(xyz != nullptr && out != nullptr, "null pointer argument");
        require(n > 0, "cloud must contain at least one point");
        auto holder = std::make_unique<rs_cloud>();
        holder->cloud.points.reserve(n);
        for (size_t i = 0; i < n; ++i) {
            holder->cloud.points.push_back({xyz[i * 3], xyz[i * 3 + 1], xyz[i * 3 + 2]});
        }
        holder->cloud.validate();
        *out = holder.release();
    });
}

void rs_cloud_destroy(rs_cloud* cloud) { delete cloud; }

rs_status rs_cloud_load(const char* path, rs_cloud** out) {
    return guarded([&] {
        require(path != nullptr && out != nullptr, "null pointer argument");
        auto holder = std::make_unique<rs_cloud>();
        holder->cloud = load_cloud(path);
        *out = holder.release();
    });
}

rs_status rs_cloud_save(const rs_cloud* cloud, const char* path) {
    return guarded([&] {
        require(cloud != nullptr && path != nullptr, "null pointer argument");
        save_cloud(path, cloud->cloud);
    });
}

size_t rs_cloud_size(const rs_cloud* cloud) { return cloud == nullptr ? 0 : cloud->cloud.size(); }

size_t rs_cloud_attr_dim(const rs_cloud* cloud) {
    return cloud == nullptr ? 0 : cloud->cloud.attr_dim;
}

const float* rs_cloud_points(const rs_cloud* cloud) {
    if (cloud == nullptr || cloud->cloud.empty()) return nullptr;
    static_assert(sizeof(Vec3f) == 3 * sizeof(float));
    return &cloud->cloud.points.front().x;
}

const float* rs_cloud_attrs(const rs_cloud* cloud) {
    if (cloud == nullptr || cloud->cloud.attrs.empty()) return nullptr;
    return cloud->cloud.attrs.data();
}

rs_status rs_cloud_normalize_unit_cube(const rs_cloud* cloud, rs_cloud** out) {
    return guarded([&] {
        require(cloud != nullptr && out != nullptr, "null pointer argument");
        auto holder = std::make_unique<rs_cloud>();
        holder->cloud = normalize_unit_cube(cloud->cloud);
        *out = holder.release();
    });
}

rs_status rs_cloud_fps(const rs_cloud* cloud, size_t m, size_t start, rs_cloud** out) {
    return guarded([&] {
        require(cloud != nullptr && out != nullptr, "null pointer argument");
        const auto picked = farthest_point_sampling(cloud->cloud, m, start);
        auto holder = std::make_unique<rs_cloud>();
        holder->cloud.attr_dim = cloud->cloud.attr_dim;
        holder->cloud.points.reserve(picked.size());
        for (std::uint32_t idx : picked) {
            holder->cloud.points.push_back(cloud->cloud.points[idx]);
            for (float a : cloud->cloud.attr_row(idx)) holder->cloud.attrs.push_back(a);
        }
        *out = holder.release();
    });
}

rs_status rs_cloud_fps_indices(const rs_cloud* cloud, size_t m, size_t start,
                               uint64_t* out_indices) {
    return guarded([&] {
        require(cloud != nullptr && out_indices != nullptr, "null pointer argument");
        const auto picked = farthest_point_sampling(cloud->cloud, m, start);
        for (size_t i = 0; i < picked.size(); ++i) out_indices[i] = picked[i];
    });
}

rs_status rs_cloud_grid(const rs_cloud* cloud, double cell, rs_cloud** out) {
    return guarded([&] {
        require(cloud != nullptr && out != nullptr, "null pointer argument");
        auto holder = std::make_unique<rs_cloud>();
        holder->cloud = grid_sampling(cloud->cloud, cell);
        *out = holder.release();
    });
}

rs_status rs_synth(const char* shape, size_t n, float noise, uint64_t seed, int with_labels,
                   rs_cloud** out) {
    return guarded([&] {
        require(shape != nullptr && out != nullptr, "null pointer argument");
        RngStream stream(seed);
        SynthResult result = synth_shape(parse_shape(shape), n, noise, stream);
        auto holder = std::make_unique<rs_cloud>();
        holder->cloud = std::move(result.cloud);
        if (with_labels != 0 && !result.labels.empty()) {
            holder->cloud.attr_dim = 1;
            holder->cloud.attrs.reserve(result.labels.size());
            for (std::int32_t label : result.labels) {
                holder->cloud.attrs.push_back(static_cast<float>(label));
            }
        }
        *out = holder.release();
    });
}

void rs_matrix_destroy(rs_matrix* m) { delete m; }

size_t rs_matrix_rows(const rs_matrix* m) { return m == nullptr ? 0 : m->m.rows; }

size_t rs_matrix_channels(const rs_matrix* m) { return m == nullptr ? 0 : m->m.channels; }

const float* rs_matrix_data(const rs_matrix* m) {
    return m == nullptr || m->m.data.empty() ? nullptr : m->m.data.data();
}

rs_status rs_matrix_load(const char* path, rs_matrix** out) {
    return guarded([&] {
        require(path != nullptr && out != nullptr, "null pointer argument");
        auto holder = std::make_unique<rs_matrix>();
        holder->m = load_matrix(path);
        *out = holder.release();
    });
}

rs_status rs_matrix_save(const rs_matrix* m, const char* path) {
    return guarded([&] {
        require(m != nullptr && path != nullptr, "null pointer argument");
        save_matrix(path, m->m);
    });
}

rs_status rs_matrix_gather_rows(const rs_matrix* m, const uint64_t* indices, size_t count,
                                rs_matrix** out) {
    return guarded([&] {
        require(m != nullptr && indices != nullptr && out != nullptr, "null pointer argument");
        auto holder = std::make_unique<rs_matrix>();
        holder->m.rows = count;
        holder->m.channels = m->m.channels;
        holder->m.data.reserve(count * m->m.channels);
        for (size_t i = 0; i < count; ++i) {
            if (indices[i] >= m->m.rows) {
                raise(ErrorCode::invalid_argument, "gather index out of range");
            }
            const float* row = m->m.data.data() + indices[i] * m->m.channels;
            holder->m.data.insert(holder->m.data.end(), row, row + m->m.channels);
        }
        *out = holder.release();
    });
}

void rs_triangular_opts_init(rs_triangular_opts* opts) {
    if (opts == nullptr) return;
    opts->frame = "abs";
    opts->centroid = "edge-mean";
    opts->augment = 0;
    opts->seed = 0;
}

rs_status rs_triangular_compute(const rs_cloud* cloud, const rs_triangular_opts* opts,
                                rs_matrix** out, size_t* out_degenerate) {
    return guarded([&] {
        require(cloud != nullptr && opts != nullptr && out != nullptr, "null pointer argument");
        RngStream stream(opts->seed);
        const auto features =
            triangular_repsurf(cloud->cloud, parse_centroid(opts->centroid),
                               parse_frame(opts->frame), stream, opts->augment != 0);

        auto holder = std::make_unique<rs_matrix>();
        holder->m.rows = features.size();
        holder->m.channels = 7;
        holder->m.data.reserve(features.size() * 7);
        size_t degenerate = 0;
        for (const auto& f : features) {
            holder->m.data.push_back(f.centroid.x);
            holder->m.data.push_back(f.centroid.y);
            holder->m.data.push_back(f.centroid.z);
            holder->m.data.push_back(f.normal.x);
            holder->m.data.push_back(f.normal.y);
            holder->m.data.push_back(f.normal.z);
            holder->m.data.push_back(f.position);
            if (f.degenerate) ++degenerate;
        }
        if (out_degenerate != nullptr) *out_degenerate = degenerate;
        *out = holder.release();
    });
}

void rs_umbrella_opts_init(rs_umbrella_opts* opts) {
    if (opts == nullptr) return;
    opts->k = 8;
    opts->layout = "n+p+cp";
    opts->aggregation = "sum";
    opts->mlp = nullptr;
    opts->mlp_load = nullptr;
    opts->mlp_save = nullptr;
    opts->augment = 0;
    opts->frame = "abs";
    opts->centroid = "edge-mean";
    opts->seed = 0;
}

rs_status rs_umbrella_compute(const rs_cloud* cloud, const rs_umbrella_opts* opts,
                              rs_matrix** out) {
    return guarded([&] {
        require(cloud != nullptr && opts != nullptr && out != nullptr, "null pointer argument");
        UmbrellaSetup setup = make_setup(*opts);
        const auto features = umbrella_repsurf(cloud->cloud, setup.cfg, setup.stream);
        auto holder = std::make_unique<rs_matrix>();
        holder->m = features_to_matrix(features);
        *out = holder.release();
    });
}

rs_status rs_polar_compute(const rs_cloud* cloud, const char* system, rs_matrix** out) {
    return guarded([&] {
        require(cloud != nullptr && system != nullptr && out != nullptr, "null pointer argument");
        const std::string sys = system;
        const bool sphere = sys == "sphere";
        if (!sphere && sys != "cylinder") {
            raise(ErrorCode::invalid_argument, "polar system must be 'sphere' or 'cylinder'");
        }
        cloud->cloud.validate();

        auto holder = std::make_unique<rs_matrix>();
        holder->m.rows = cloud->cloud.size();
        holder->m.channels = 6;
        holder->m.data.reserve(holder->m.rows * 6);
        for (const auto& p : cloud->cloud.points) {
            if (sphere) {
                const auto block = with_polar(p);
                holder->m.data.insert(holder->m.data.end(), block.begin(), block.end());
            } else {
                const CylindricalAux aux = cylindrical_aux(p);
                holder->m.data.push_back(p.x);
                holder->m.data.push_back(p.y);
                holder->m.data.push_back(p.z);
                holder->m.data.push_back(aux.rho);
                holder->m.data.push_back(aux.phi);
                holder->m.data.push_back(aux.z);
            }
        }
        *out = holder.release();
    });
}

rs_status rs_flops_repsurf(const rs_umbrella_opts* opts, uint64_t n_points, rs_opcost* out) {
    return guarded([&] {
        require(opts != nullptr && out != nullptr, "null pointer argument");
        UmbrellaSetup setup = make_setup(*opts);
        const OpCost cost = flops_repsurf(setup.cfg, n_points);
        out->multiplies = cost.multiplies;
        out->additions = cost.additions;
        out->parameters = cost.parameters;
    });
}

namespace {

void bench_umbrella_on(const PointCloud& cloud, const rs_umbrella_opts& opts, uint32_t batch,
                       uint32_t reps, uint32_t warmup, rs_timing* out) {
    UmbrellaSetup setup = make_setup(opts);
    const TimingReport report = time_stage(
        [&] {
            RngStream run_stream = setup.stream;  // replay: identical work per call
            umbrella_repsurf(cloud, setup.cfg, run_stream);
        },
        batch, reps, warmup);

    out->median_ms_per_sample = report.median_ms_per_sample;
    out->min_ms_per_sample = report.min_ms_per_sample;
    out->max_ms_per_sample = report.max_ms_per_sample;
    out->batch = report.batch;
    out->reps = report.reps;
    out->warmup = report.warmup;
    out->threads = report.threads;
}

}  // namespace

rs_status rs_bench_umbrella(const rs_umbrella_opts* opts, uint64_t n_points, uint32_t batch,
                            uint32_t reps, uint32_t warmup, rs_timing* out) {
    return guarded([&] {
        require(opts != nullptr && out != nullptr, "null pointer argument");
        RngStream shape_stream(opts->seed);
        const SynthResult sphere = synth_shape(ShapeKind::sphere, n_points, 0.0f, shape_stream);
        bench_umbrella_on(sphere.cloud, *opts, batch, reps, warmup, out);
    });
}

rs_status rs_bench_umbrella_cloud(const rs_cloud* cloud, const rs_umbrella_opts* opts,
                                  uint32_t batch, uint32_t reps, uint32_t warmup,
                                  rs_timing* out) {
    return guarded([&] {
        require(cloud != nullptr && opts != nullptr && out != nullptr, "null pointer argument");
        bench_umbrella_on(cloud->cloud, *opts, batch, reps, warmup, out);
    });
}

namespace {

// Per-point normals from the chosen descriptor: the triangle normal, or the
// renormalized mean of an umbrella fan's non-degenerate normals.
std::vector<Vec3f> source_normals(const PointCloud& cloud, const std::string& src,
                                  std::uint32_t k) {
    std::vector<Vec3f> normals(cloud.size());
    if (src == "triangular") {
        RngStream feat_stream(0);
        const auto features = triangular_repsurf(cloud, CentroidMode::edge_mean,
                                                 PositionFrame::absolute, feat_stream, false);
        for (std::size_t i = 0; i < features.size(); ++i) normals[i] = features[i].normal;
    } else if (src == "umbrella") {
        UmbrellaConfig cfg;
        cfg.k = k == 0 ? 8 : k;
        RngStream feat_stream(0);
        const auto surfaces = build_umbrella(cloud, cfg, feat_stream);
        for (std::size_t i = 0; i < surfaces.size(); ++i) {
            Vec3d mean;
            for (const auto& tri : surfaces[i].triangles) {
                if (!tri.degenerate) mean = mean + Vec3d(tri.normal);
            }
            normals[i] = mean.norm() > 0.0 ? Vec3f(mean / mean.norm()) : Vec3f{0, 0, 0};
        }
    } else {
        raise(ErrorCode::invalid_argument, "source must be 'triangular' or 'umbrella'");
    }
    return normals;
}

std::string render_report(const std::vector<RegionStats>& stats,
                          const std::function<std::string(std::int32_t)>& name,
                          const std::vector<std::string>& warnings,
                          const std::string& preamble, bool csv) {
    std::ostringstream os;
    if (csv) {
        os << "region,count,dropped,mean_x,mean_y,mean_z,dispersion\n";
        for (const auto& r : stats) {
            os << name(r.label) << ',' << r.count << ',' << r.dropped << ',' << r.mean_normal.x
               << ',' << r.mean_normal.y << ',' << r.mean_normal.z << ',' << r.dispersion
               << '\n';
        }
    } else {
        os << preamble;
        for (const auto& r : stats) {
            os << "region." << name(r.label) << ".count=" << r.count << '\n';
            os << "region." << name(r.label) << ".dropped=" << r.dropped << '\n';
            os << "region." << name(r.label) << ".dispersion=" << r.dispersion << '\n';
        }
        for (const auto& w : warnings) os << "warning=" << w << '\n';
    }
    return os.str();
}

char* copy_out(const std::string& text) {
    char* buf = new char[text.size() + 1];
    std::memcpy(buf, text.c_str(), text.size() + 1);
    return buf;
}

}  // namespace

rs_status rs_curvature_report(const char* shape, size_t n, float noise, uint64_t seed,
                              const char* source, uint32_t k, int csv, char** out_text) {
    return guarded([&] {
        require(shape != nullptr && out_text != nullptr, "null pointer argument");
        const ShapeKind kind = parse_shape(shape);
        RngStream stream(seed);
        const SynthResult synth = synth_shape(kind, n, noise, stream);
        if (synth.labels.empty()) {
            raise(ErrorCode::invalid_argument,
                  std::string("shape '") + shape + "' has no region labels");
        }

        const std::string src = source == nullptr ? "triangular" : source;
        std::vector<Vec3f> normals = source_normals(synth.cloud, src, k);

        // The first-component sign convention is only locally consistent, so
        // canonicalize before cross-point statistics: radially for closed
        // shapes, toward +z for planes.
        if (kind == ShapeKind::cube || kind == ShapeKind::sphere) {
            orient_outward(normals, synth.cloud.points, Vec3f{0, 0, 0});
        } else {
            for (auto& nrm : normals) {
                if (nrm.z < 0) nrm = -nrm;
            }
        }

        std::vector<std::int32_t> expected;
        for (std::size_t i = 0; i < synth.label_names.size(); ++i) {
            expected.push_back(static_cast<std::int32_t>(i));
        }
        std::vector<std::string> warnings;
        const auto stats = curvature_report(normals, synth.labels, expected, &warnings);

        const std::string preamble = "shape=" + std::string(shape) + "\nsource=" + src +
                                     "\nn=" + std::to_string(n) + "\n";
        *out_text = copy_out(render_report(
            stats, [&](std::int32_t label) { return synth.label_names[label]; }, warnings,
            preamble, csv != 0));
    });
}

rs_status rs_curvature_report_cloud(const rs_cloud* cloud, const char* source, uint32_t k,
                                    int csv, char** out_text) {
    return guarded([&] {
        require(cloud != nullptr && out_text != nullptr, "null pointer argument");
        const PointCloud& pc = cloud->cloud;
        if (pc.attr_dim < 1) {
            raise(ErrorCode::invalid_input,
                  "curvature on a cloud needs region labels in attribute column 0");
        }
        std::vector<std::int32_t> labels(pc.size());
        for (std::size_t i = 0; i < pc.size(); ++i) {
            labels[i] = static_cast<std::int32_t>(std::lround(pc.attr_row(i)[0]));
        }

        const std::string src = source == nullptr ? "triangular" : source;
        std::vector<Vec3f> normals = source_normals(pc, src, k);

        Vec3d centroid;
        for (const auto& p : pc.points) centroid = centroid + Vec3d(p);
        centroid = centroid / static_cast<double>(pc.size());
        orient_outward(normals, pc.points, Vec3f(centroid));

        std::vector<std::string> warnings;
        const auto stats = curvature_report(normals, labels, {}, &warnings);
        const std::string preamble =
            "source=" + src + "\nn=" + std::to_string(pc.size()) + "\n";
        *out_text = copy_out(render_report(
            stats, [](std::int32_t label) { return "label_" + std::to_string(label); },
            warnings, preamble, csv != 0));
    });
}

void rs_string_free(char* text) { delete[] text; }

uint64_t rs_rng_pick(uint64_t seed, uint64_t n) {
    RngStream stream(seed);
    return stream.below(n);
}

}  // extern "C"
