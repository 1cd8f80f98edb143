#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "repsurf/umbrella.hpp"
#include "repsurf/vec3.hpp"

namespace repsurf {

/// Exact float-op tally: multiplications and additions counted separately,
/// plus the number of learnable parameters involved. Transcendentals (sqrt,
/// arccos, atan2) count as one multiply each; index-only point-cloud
/// operations (kNN, FPS, gather) count as zero.
struct OpCost {
    std::uint64_t multiplies = 0;
    std::uint64_t additions = 0;
    std::uint64_t parameters = 0;
    std::string label;

    std::uint64_t flops() const { return multiplies + additions; }
    OpCost& operator+=(const OpCost& o);
};

/// Dense layer applied to n_rows rows:
///   multiplies = n*in*out, additions = n*(in-1)*out (+ n*out with bias),
///   parameters = in*out (+ out with bias).
OpCost flops_linear(std::uint64_t n_rows, std::uint64_t in_w, std::uint64_t out_w, bool bias);

/// Umbrella feature budget for n_points points, decomposed per triangle as:
///   cross product        6 mul + 3 add
///   normalization        4 mul + 2 add   (3 squares + rsqrt-as-1-mul)
///   centroid (P/C/CP)    3 mul + 3 add   (edge sum + halving)
///   position (P)         4 mul + 2 add   (dot + 1/sqrt(3) scale)
///   spherical aux (CP)   9 mul + 3 add   (rho 4m+2a, theta 3m, phi 2m+1a)
/// plus the transform MLP over n_points*k rows via flops_linear.
OpCost flops_repsurf(const UmbrellaConfig& cfg, std::uint64_t n_points);

/// Wall-clock timing of a stage. One repetition executes the closure `batch`
/// times; the reported value is the median per-sample duration over reps.
struct TimingReport {
    double median_ms_per_sample = 0;
    double min_ms_per_sample = 0;
    double max_ms_per_sample = 0;
    std::uint32_t batch = 0;
    std::uint32_t reps = 0;
    std::uint32_t warmup = 0;
    unsigned threads = 1;  // harness is single-threaded
};

TimingReport time_stage(const std::function<void()>& closure, std::uint32_t batch,
                        std::uint32_t reps, std::uint32_t warmup);

/// Per-region normal statistics behind the curvature-sensitivity check:
/// dispersion = 1 - |mean of unit normals|, so 0 for identical normals and
/// 1 for a balanced antipodal mix.
struct RegionStats {
    std::int32_t label = 0;
    std::size_t count = 0;
    std::size_t dropped = 0;  // zero (degenerate) normals skipped
    Vec3d mean_normal;
    double dispersion = 0;
};

/// Groups unit normals by label. Labels listed in `expected` but absent from
/// the data are reported through `warnings` and excluded from the result.
std::vector<RegionStats> curvature_report(std::span<const Vec3f> normals,
                                          std::span<const std::int32_t> labels,
                                          std::span<const std::int32_t> expected = {},
                                          std::vector<std::string>* warnings = nullptr);

/// Flips each normal toward the outward direction (point - center). The
/// first-component sign convention is consistent only per surface, so
/// cross-point dispersion statistics need this canonicalization first.
void orient_outward(std::span<Vec3f> normals, std::span<const Vec3f> points,
                    const Vec3f& center);

}  // namespace repsurf
