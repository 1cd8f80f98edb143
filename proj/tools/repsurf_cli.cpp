// Command-line front end for the RepSurf shared library. Talks to the core
// exclusively through the C API in repsurf.h; payload data goes to files,
// diagnostics to stderr, reports (bench/curvature) to stdout as key=value.
//
// Exit codes: 0 ok, 2 usage, 3 format/io, 4 numeric validation.

#include <cinttypes>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "repsurf.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitFormat = 3;
constexpr int kExitValidation = 4;

int exit_code_for(rs_status status) {
    switch (status) {
        case RS_OK: return kExitOk;
        case RS_ERR_INVALID_ARGUMENT:
        case RS_ERR_CONFIG: return kExitUsage;
        case RS_ERR_FORMAT:
        case RS_ERR_IO: return kExitFormat;
        case RS_ERR_INVALID_INPUT:
        case RS_ERR_VALIDATION: return kExitValidation;
        default: return 1;
    }
}

struct CloudDeleter {
    void operator()(rs_cloud* c) const { rs_cloud_destroy(c); }
};
struct MatrixDeleter {
    void operator()(rs_matrix* m) const { rs_matrix_destroy(m); }
};
using CloudPtr = std::unique_ptr<rs_cloud, CloudDeleter>;
using MatrixPtr = std::unique_ptr<rs_matrix, MatrixDeleter>;

// Throws the status as an int exit code after logging; keeps the subcommand
// bodies linear.
void check(rs_status status, const char* stage) {
    if (status != RS_OK) {
        std::fprintf(stderr, "repsurf: %s: %s (%s)\n", stage, rs_last_error(),
                     rs_status_name(status));
        throw exit_code_for(status);
    }
}

CloudPtr load_cloud(const std::string& path) {
    rs_cloud* raw = nullptr;
    check(rs_cloud_load(path.c_str(), &raw), "load input");
    return CloudPtr(raw);
}

// Common featurize-stage options: optional normalization and FPS sampling
// with post-computed (sample then featurize, the default) or pre-computed
// (featurize then sample) ordering.
struct StageOpts {
    bool normalize = false;
    std::size_t sample_n = 0;  // 0 = no sampling
    bool pre = false;
    std::size_t start = 0;
};

void add_stage_flags(CLI::App* cmd, StageOpts& stage) {
    cmd->add_flag("--normalize", stage.normalize, "Normalize the cloud into [-1,1] first");
    cmd->add_option("--sample-n", stage.sample_n,
                    "Farthest-point-sample to this many points around the featurize step");
    cmd->add_flag("--pre", stage.pre,
                  "Featurize before sampling (default is sample, then featurize)");
    cmd->add_option("--start", stage.start, "FPS start index for --sample-n");
}

CloudPtr prepare_cloud(const std::string& input, const StageOpts& stage, bool sample_now) {
    CloudPtr cloud = load_cloud(input);
    if (stage.normalize) {
        rs_cloud* normed = nullptr;
        check(rs_cloud_normalize_unit_cube(cloud.get(), &normed), "normalize");
        cloud.reset(normed);
    }
    if (sample_now && stage.sample_n > 0) {
        rs_cloud* sampled = nullptr;
        check(rs_cloud_fps(cloud.get(), stage.sample_n, stage.start, &sampled), "sample");
        cloud.reset(sampled);
    }
    return cloud;
}

// Pre-computed ordering: gather the feature rows of the FPS-selected points.
MatrixPtr sample_rows_after(const CloudPtr& cloud, MatrixPtr features, const StageOpts& stage) {
    if (stage.sample_n == 0 || !stage.pre) return features;
    std::vector<uint64_t> indices(stage.sample_n);
    check(rs_cloud_fps_indices(cloud.get(), stage.sample_n, stage.start, indices.data()),
          "sample indices");
    rs_matrix* gathered = nullptr;
    check(rs_matrix_gather_rows(features.get(), indices.data(), indices.size(), &gathered),
          "gather rows");
    return MatrixPtr(gathered);
}

void save_matrix(const MatrixPtr& m, const std::string& path) {
    check(rs_matrix_save(m.get(), path.c_str()), "save output");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Explicit surface representations (triangular / umbrella) for point clouds"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(rs_version()));

    // ---- sample ----
    auto* sample = app.add_subcommand("sample", "Downsample a cloud (FPS or voxel grid)");
    std::string sample_in, sample_out, sample_method = "fps";
    std::size_t sample_n = 1024, sample_start = 0;
    double sample_cell = 0.05;
    std::uint64_t sample_seed = 0;
    bool sample_seeded_start = false, sample_normalize = false;
    sample->add_option("--input", sample_in, "Input cloud (.xyz or .rsrf)")->required();
    sample->add_option("--output", sample_out, "Output cloud path")->required();
    sample->add_option("--method", sample_method, "fps or grid")
        ->check(CLI::IsMember({"fps", "grid"}));
    sample->add_option("--n", sample_n, "Target point count (fps)");
    sample->add_option("--cell", sample_cell, "Voxel edge length (grid)");
    sample->add_option("--start", sample_start, "FPS start index");
    sample->add_option("--seed", sample_seed, "Derive the FPS start from this seed");
    sample->add_flag("--normalize", sample_normalize, "Normalize into [-1,1] first");
    sample->callback([&] {
        sample_seeded_start = sample->count("--seed") > 0 && sample->count("--start") == 0;
        CloudPtr cloud = load_cloud(sample_in);
        if (sample_normalize) {
            rs_cloud* normed = nullptr;
            check(rs_cloud_normalize_unit_cube(cloud.get(), &normed), "normalize");
            cloud.reset(normed);
        }
        rs_cloud* result = nullptr;
        if (sample_method == "fps") {
            const std::size_t start =
                sample_seeded_start ? rs_rng_pick(sample_seed, rs_cloud_size(cloud.get()))
                                    : sample_start;
            check(rs_cloud_fps(cloud.get(), sample_n, start, &result), "fps");
        } else {
            check(rs_cloud_grid(cloud.get(), sample_cell, &result), "grid");
        }
        CloudPtr out(result);
        check(rs_cloud_save(out.get(), sample_out.c_str()), "save output");
        std::fprintf(stderr, "repsurf: sampled %zu -> %zu points\n", rs_cloud_size(cloud.get()),
                     rs_cloud_size(out.get()));
    });

    // ---- triangular ----
    auto* tri = app.add_subcommand("triangular", "Per-point triangle descriptor (7 channels)");
    std::string tri_in, tri_out, tri_frame = "abs", tri_centroid = "edge-mean";
    bool tri_augment = false;
    std::uint64_t tri_seed = 0;
    StageOpts tri_stage;
    tri->add_option("--input", tri_in, "Input cloud")->required();
    tri->add_option("--output", tri_out, "Output features (.rsrf or .xyz)")->required();
    tri->add_option("--frame", tri_frame, "Position frame: abs or rel")
        ->check(CLI::IsMember({"abs", "rel"}));
    tri->add_option("--centroid", tri_centroid, "Centroid rule: edge-mean or triangle")
        ->check(CLI::IsMember({"edge-mean", "triangle"}));
    tri->add_flag("--augment", tri_augment, "Instance-level random normal inverse");
    tri->add_option("--seed", tri_seed, "Random stream seed");
    add_stage_flags(tri, tri_stage);
    tri->callback([&] {
        CloudPtr cloud = prepare_cloud(tri_in, tri_stage, !tri_stage.pre);
        rs_triangular_opts opts;
        rs_triangular_opts_init(&opts);
        opts.frame = tri_frame.c_str();
        opts.centroid = tri_centroid.c_str();
        opts.augment = tri_augment ? 1 : 0;
        opts.seed = tri_seed;
        rs_matrix* raw = nullptr;
        size_t degenerate = 0;
        check(rs_triangular_compute(cloud.get(), &opts, &raw, &degenerate), "triangular");
        MatrixPtr features = sample_rows_after(cloud, MatrixPtr(raw), tri_stage);
        save_matrix(features, tri_out);
        std::fprintf(stderr, "repsurf: %zu rows x %zu channels (%zu degenerate)\n",
                     rs_matrix_rows(features.get()), rs_matrix_channels(features.get()),
                     degenerate);
    });

    // ---- umbrella ----
    auto* umb = app.add_subcommand("umbrella", "Umbrella fan descriptor (3 + C channels)");
    std::string umb_in, umb_out, umb_layout = "n+p+cp", umb_agg = "sum", umb_mlp,
                umb_frame = "abs", umb_centroid = "edge-mean";
    std::uint32_t umb_k = 8;
    bool umb_augment = false;
    std::uint64_t umb_seed = 0;
    StageOpts umb_stage;
    umb->add_option("--input", umb_in, "Input cloud")->required();
    umb->add_option("--output", umb_out, "Output features (.rsrf or .xyz)")->required();
    umb->add_option("--k", umb_k, "Fan size (neighbors per point)");
    umb->add_option("--layout", umb_layout, "Per-triangle channels")
        ->check(CLI::IsMember({"n", "n+p", "n+c", "n+p+c", "n+p+cp"}));
    umb->add_option("--agg", umb_agg, "Aggregation over the fan")
        ->check(CLI::IsMember({"sum", "max", "mean"}));
    umb->add_option("--mlp", umb_mlp,
                    "Transform widths, e.g. 10,16,16,10 (omit for identity)");
    umb->add_option("--frame", umb_frame, "Position frame: abs or rel")
        ->check(CLI::IsMember({"abs", "rel"}));
    umb->add_option("--centroid", umb_centroid, "Centroid rule: edge-mean or triangle")
        ->check(CLI::IsMember({"edge-mean", "triangle"}));
    umb->add_flag("--augment", umb_augment, "Per-surface random normal inverse");
    umb->add_option("--seed", umb_seed, "Random stream seed (MLP init + augmentation)");
    add_stage_flags(umb, umb_stage);
    umb->callback([&] {
        CloudPtr cloud = prepare_cloud(umb_in, umb_stage, !umb_stage.pre);
        rs_umbrella_opts opts;
        rs_umbrella_opts_init(&opts);
        opts.k = umb_k;
        opts.layout = umb_layout.c_str();
        opts.aggregation = umb_agg.c_str();
        opts.mlp = umb_mlp.empty() ? nullptr : umb_mlp.c_str();
        opts.augment = umb_augment ? 1 : 0;
        opts.frame = umb_frame.c_str();
        opts.centroid = umb_centroid.c_str();
        opts.seed = umb_seed;
        rs_matrix* raw = nullptr;
        check(rs_umbrella_compute(cloud.get(), &opts, &raw), "umbrella");
        MatrixPtr features = sample_rows_after(cloud, MatrixPtr(raw), umb_stage);
        save_matrix(features, umb_out);
        std::fprintf(stderr, "repsurf: %zu rows x %zu channels\n",
                     rs_matrix_rows(features.get()), rs_matrix_channels(features.get()));
    });

    // ---- polar ----
    auto* polar = app.add_subcommand("polar", "Append polar auxiliary coordinates (6 channels)");
    std::string polar_in, polar_out, polar_system = "sphere";
    polar->add_option("--input", polar_in, "Input cloud")->required();
    polar->add_option("--output", polar_out, "Output matrix")->required();
    polar->add_option("--system", polar_system, "sphere or cylinder")
        ->check(CLI::IsMember({"sphere", "cylinder"}));
    polar->callback([&] {
        CloudPtr cloud = load_cloud(polar_in);
        rs_matrix* raw = nullptr;
        check(rs_polar_compute(cloud.get(), polar_system.c_str(), &raw), "polar");
        MatrixPtr out(raw);
        save_matrix(out, polar_out);
        std::fprintf(stderr, "repsurf: %zu rows x 6 channels\n", rs_matrix_rows(out.get()));
    });

    // ---- bench ----
    auto* bench = app.add_subcommand("bench", "FLOPs / wall-clock accounting");
    std::string bench_what = "flops", bench_layout = "n+p+cp", bench_agg = "sum", bench_mlp,
                bench_in;
    std::uint32_t bench_k = 8, bench_batch = 16, bench_reps = 5, bench_warmup = 2;
    std::uint64_t bench_n = 1024, bench_seed = 0;
    bench->add_option("--what", bench_what, "flops or time")
        ->check(CLI::IsMember({"flops", "time"}));
    bench->add_option("--input", bench_in,
                      "Measure on this cloud instead of a synthetic sphere");
    bench->add_option("--n", bench_n, "Points per cloud (synthetic)");
    bench->add_option("--k", bench_k, "Fan size");
    bench->add_option("--layout", bench_layout, "Per-triangle channels")
        ->check(CLI::IsMember({"n", "n+p", "n+c", "n+p+c", "n+p+cp"}));
    bench->add_option("--agg", bench_agg, "Aggregation")
        ->check(CLI::IsMember({"sum", "max", "mean"}));
    bench->add_option("--mlp", bench_mlp, "Transform widths (omit for identity)");
    bench->add_option("--batch", bench_batch, "Samples per timed repetition");
    bench->add_option("--reps", bench_reps, "Timed repetitions (median reported)");
    bench->add_option("--warmup", bench_warmup, "Untimed warmup runs");
    bench->add_option("--seed", bench_seed, "Seed for the synthetic cloud and MLP");
    bench->callback([&] {
        rs_umbrella_opts opts;
        rs_umbrella_opts_init(&opts);
        opts.k = bench_k;
        opts.layout = bench_layout.c_str();
        opts.aggregation = bench_agg.c_str();
        opts.mlp = bench_mlp.empty() ? nullptr : bench_mlp.c_str();
        opts.seed = bench_seed;
        CloudPtr cloud;
        if (!bench_in.empty()) {
            cloud = load_cloud(bench_in);
            bench_n = rs_cloud_size(cloud.get());
        }
        if (bench_what == "flops") {
            rs_opcost cost;
            check(rs_flops_repsurf(&opts, bench_n, &cost), "flops");
            std::printf("what=flops\nn=%" PRIu64 "\nk=%u\nlayout=%s\n", bench_n, bench_k,
                        bench_layout.c_str());
            std::printf("multiplies=%" PRIu64 "\nadditions=%" PRIu64 "\nflops=%" PRIu64
                        "\nparameters=%" PRIu64 "\n",
                        cost.multiplies, cost.additions, cost.multiplies + cost.additions,
                        cost.parameters);
        } else {
            rs_timing timing;
            if (cloud) {
                check(rs_bench_umbrella_cloud(cloud.get(), &opts, bench_batch, bench_reps,
                                              bench_warmup, &timing),
                      "time");
            } else {
                check(rs_bench_umbrella(&opts, bench_n, bench_batch, bench_reps, bench_warmup,
                                        &timing),
                      "time");
            }
            std::printf("what=time\nn=%" PRIu64 "\nk=%u\nlayout=%s\nbatch=%u\nreps=%u\n"
                        "warmup=%u\nthreads=%u\n",
                        bench_n, bench_k, bench_layout.c_str(), timing.batch, timing.reps,
                        timing.warmup, timing.threads);
            std::printf("median_ms_per_sample=%.6f\nmin_ms_per_sample=%.6f\n"
                        "max_ms_per_sample=%.6f\n",
                        timing.median_ms_per_sample, timing.min_ms_per_sample,
                        timing.max_ms_per_sample);
        }
    });

    // ---- curvature ----
    auto* curv = app.add_subcommand("curvature", "Per-region normal dispersion on a test shape");
    std::string curv_shape = "cube", curv_source = "triangular", curv_out, curv_in;
    std::size_t curv_n = 6000;
    float curv_noise = 0.0f;
    std::uint64_t curv_seed = 0;
    std::uint32_t curv_k = 8;
    curv->add_option("--shape", curv_shape, "cube or plane_with_step")
        ->check(CLI::IsMember({"cube", "plane_with_step"}));
    curv->add_option("--input", curv_in,
                     "Analyze this labeled cloud (region ids in attribute column 0)");
    curv->add_option("--n", curv_n, "Points to sample");
    curv->add_option("--noise", curv_noise, "Gaussian jitter stdev");
    curv->add_option("--seed", curv_seed, "Sampling seed");
    curv->add_option("--source", curv_source, "triangular or umbrella")
        ->check(CLI::IsMember({"triangular", "umbrella"}));
    curv->add_option("--k", curv_k, "Fan size for --source umbrella");
    curv->add_option("--output", curv_out, "Write the report as CSV to this path");
    curv->callback([&] {
        char* text = nullptr;
        const bool csv = !curv_out.empty();
        if (!curv_in.empty()) {
            CloudPtr cloud = load_cloud(curv_in);
            check(rs_curvature_report_cloud(cloud.get(), curv_source.c_str(), curv_k,
                                            csv ? 1 : 0, &text),
                  "curvature");
        } else {
            check(rs_curvature_report(curv_shape.c_str(), curv_n, curv_noise, curv_seed,
                                      curv_source.c_str(), curv_k, csv ? 1 : 0, &text),
                  "curvature");
        }
        if (csv) {
            std::FILE* f = std::fopen(curv_out.c_str(), "w");
            if (f == nullptr) {
                rs_string_free(text);
                std::fprintf(stderr, "repsurf: cannot open '%s' for writing\n",
                             curv_out.c_str());
                throw kExitFormat;
            }
            std::fputs(text, f);
            std::fclose(f);
        } else {
            std::fputs(text, stdout);
        }
        rs_string_free(text);
    });

    // ---- synth ----
    auto* synth = app.add_subcommand("synth", "Generate a synthetic test shape");
    std::string synth_shape = "sphere", synth_out;
    std::size_t synth_n = 1024;
    float synth_noise = 0.0f;
    std::uint64_t synth_seed = 0;
    bool synth_labels = false;
    synth->add_option("--shape", synth_shape, "cube, sphere, plane_with_step, hexagon_fan")
        ->check(CLI::IsMember({"cube", "sphere", "plane_with_step", "hexagon_fan"}));
    synth->add_option("--n", synth_n, "Point count (>= 8)");
    synth->add_option("--noise", synth_noise, "Gaussian jitter stdev");
    synth->add_option("--seed", synth_seed, "Sampling seed");
    synth->add_flag("--labels", synth_labels, "Append region labels as an attribute column");
    synth->add_option("--output", synth_out, "Output cloud path")->required();
    synth->callback([&] {
        rs_cloud* raw = nullptr;
        check(rs_synth(synth_shape.c_str(), synth_n, synth_noise, synth_seed,
                       synth_labels ? 1 : 0, &raw),
              "synth");
        CloudPtr cloud(raw);
        check(rs_cloud_save(cloud.get(), synth_out.c_str()), "save output");
        std::fprintf(stderr, "repsurf: wrote %zu points\n", rs_cloud_size(cloud.get()));
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        // CLI11 help/version exit with 0; anything else is a usage error.
        return code == 0 ? kExitOk : kExitUsage;
    } catch (int code) {
        return code;
    }
    return kExitOk;
}
