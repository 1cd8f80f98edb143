/* C interface to the RepSurf core: opaque handles, status codes, and a
 * thread-local textual error. All functions return rs_status unless noted;
 * out-parameters are written only on RS_OK. Handles are destroyed with the
 * matching *_destroy call. */

#ifndef REPSURF_H
#define REPSURF_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rs_status {
    RS_OK = 0,
    RS_ERR_INVALID_ARGUMENT = 1, /* parameter out of contract */
    RS_ERR_INVALID_INPUT = 2,    /* data violates a precondition */
    RS_ERR_CONFIG = 3,           /* incompatible widths/layouts */
    RS_ERR_INVALID_STATE = 4,    /* stale cache or use-after-free class */
    RS_ERR_FORMAT = 5,           /* malformed file */
    RS_ERR_VALIDATION = 6,       /* non-finite value */
    RS_ERR_IO = 7,               /* unreadable/unwritable path */
    RS_ERR_UNKNOWN = 8
} rs_status;

/* Message for the last failing call on this thread; empty string if none. */
const char* rs_last_error(void);
const char* rs_status_name(rs_status status);
const char* rs_version(void);

/* ---- point clouds ------------------------------------------------------ */

typedef struct rs_cloud rs_cloud;

/* xyz: n interleaved float triples (copied). */
rs_status rs_cloud_create(const float* xyz, size_t n, rs_cloud** out);
void rs_cloud_destroy(rs_cloud* cloud);

/* Format by extension (.xyz text, .rsrf binary); unknown extensions are
 * sniffed by magic on load. */
rs_status rs_cloud_load(const char* path, rs_cloud** out);
rs_status rs_cloud_save(const rs_cloud* cloud, const char* path);

size_t rs_cloud_size(const rs_cloud* cloud);
size_t rs_cloud_attr_dim(const rs_cloud* cloud);
const float* rs_cloud_points(const rs_cloud* cloud); /* n*3 interleaved */
const float* rs_cloud_attrs(const rs_cloud* cloud);  /* n*attr_dim, or NULL */

rs_status rs_cloud_normalize_unit_cube(const rs_cloud* cloud, rs_cloud** out);
rs_status rs_cloud_fps(const rs_cloud* cloud, size_t m, size_t start, rs_cloud** out);
rs_status rs_cloud_fps_indices(const rs_cloud* cloud, size_t m, size_t start,
                               uint64_t* out_indices /* length m */);
rs_status rs_cloud_grid(const rs_cloud* cloud, double cell, rs_cloud** out);

/* shape: cube | sphere | plane_with_step | hexagon_fan. With with_labels != 0
 * and a labeled shape, region ids are appended as one attribute column. */
rs_status rs_synth(const char* shape, size_t n, float noise, uint64_t seed, int with_labels,
                   rs_cloud** out);

/* ---- feature matrices -------------------------------------------------- */

typedef struct rs_matrix rs_matrix;

void rs_matrix_destroy(rs_matrix* m);
size_t rs_matrix_rows(const rs_matrix* m);
size_t rs_matrix_channels(const rs_matrix* m);
const float* rs_matrix_data(const rs_matrix* m); /* rows*channels row-major */

rs_status rs_matrix_load(const char* path, rs_matrix** out);
rs_status rs_matrix_save(const rs_matrix* m, const char* path);
rs_status rs_matrix_gather_rows(const rs_matrix* m, const uint64_t* indices, size_t count,
                                rs_matrix** out);

/* ---- descriptors ------------------------------------------------------- */

typedef struct rs_triangular_opts {
    const char* frame;    /* "abs" (default) or "rel" */
    const char* centroid; /* "edge-mean" (default) or "triangle" */
    int augment;          /* instance-level random inverse */
    uint64_t seed;
} rs_triangular_opts;

void rs_triangular_opts_init(rs_triangular_opts* opts);

/* 7 channels per point: centroid xyz, normal xyz, surface position. A NULL
 * out_degenerate skips the degenerate-triangle count. */
rs_status rs_triangular_compute(const rs_cloud* cloud, const rs_triangular_opts* opts,
                                rs_matrix** out, size_t* out_degenerate);

typedef struct rs_umbrella_opts {
    uint32_t k;               /* default 8 */
    const char* layout;       /* "n", "n+p", "n+c", "n+p+c", "n+p+cp" (default) */
    const char* aggregation;  /* "sum" (default), "max", "mean" */
    const char* mlp;          /* NULL = identity transform; else widths "10,16,16,10";
                                 first width must equal the layout channel count */
    const char* mlp_load;     /* optional .rsrf file of flattened transform parameters
                                 (1 row, channels = parameter count); overrides the
                                 seeded initialization */
    const char* mlp_save;     /* optional path: write the transform parameters */
    int augment;              /* per-surface random inverse */
    const char* frame;        /* "abs" (default) or "rel" */
    const char* centroid;     /* "edge-mean" (default) or "triangle" */
    uint64_t seed;            /* drives MLP init, then augmentation draws */
} rs_umbrella_opts;

void rs_umbrella_opts_init(rs_umbrella_opts* opts);

/* 3 + C channels per point: representative centroid, aggregated feature. */
rs_status rs_umbrella_compute(const rs_cloud* cloud, const rs_umbrella_opts* opts,
                              rs_matrix** out);

/* 6 channels per point: xyz plus the polar triple of the chosen system
 * ("sphere" or "cylinder"). */
rs_status rs_polar_compute(const rs_cloud* cloud, const char* system, rs_matrix** out);

/* ---- accounting -------------------------------------------------------- */

typedef struct rs_opcost {
    uint64_t multiplies;
    uint64_t additions;
    uint64_t parameters;
} rs_opcost;

rs_status rs_flops_repsurf(const rs_umbrella_opts* opts, uint64_t n_points, rs_opcost* out);

typedef struct rs_timing {
    double median_ms_per_sample;
    double min_ms_per_sample;
    double max_ms_per_sample;
    uint32_t batch;
    uint32_t reps;
    uint32_t warmup;
    uint32_t threads;
} rs_timing;

/* Times the umbrella stage on a synthetic sphere of n_points. */
rs_status rs_bench_umbrella(const rs_umbrella_opts* opts, uint64_t n_points, uint32_t batch,
                            uint32_t reps, uint32_t warmup, rs_timing* out);

/* Times the umbrella stage on a caller-provided cloud. */
rs_status rs_bench_umbrella_cloud(const rs_cloud* cloud, const rs_umbrella_opts* opts,
                                  uint32_t batch, uint32_t reps, uint32_t warmup,
                                  rs_timing* out);

/* Per-region normal dispersion on a synthetic shape; source is "triangular"
 * or "umbrella" (k used for the latter). Returns key=value lines, or CSV when
 * csv != 0. Free the text with rs_string_free. */
rs_status rs_curvature_report(const char* shape, size_t n, float noise, uint64_t seed,
                              const char* source, uint32_t k, int csv, char** out_text);

/* Same report for a labeled cloud: region ids come from attribute column 0,
 * normals are oriented away from the cloud centroid before the statistics. */
rs_status rs_curvature_report_cloud(const rs_cloud* cloud, const char* source, uint32_t k,
                                    int csv, char** out_text);

void rs_string_free(char* text);

/* Deterministic helper: splitmix64-style pick of an index below n. */
uint64_t rs_rng_pick(uint64_t seed, uint64_t n);

#ifdef __cplusplus
}
#endif

#endif /* REPSURF_H */
