#include "repsurf/analytics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <unordered_map>

#include "repsurf/error.hpp"

namespace repsurf {

OpCost& OpCost::operator+=(const OpCost& o) {
    multiplies += o.multiplies;
    additions += o.additions;
    parameters += o.parameters;
    return *this;
}

OpCost flops_linear(std::uint64_t n_rows, std::uint64_t in_w, std::uint64_t out_w, bool bias) {
    if (in_w < 1 || out_w < 1) {
        raise(ErrorCode::invalid_argument, "layer widths must be at least 1");
    }
    OpCost cost;
    cost.label = "linear";
    cost.multiplies = n_rows * in_w * out_w;
    cost.additions = n_rows * (in_w - 1) * out_w + (bias ? n_rows * out_w : 0);
    cost.parameters = in_w * out_w + (bias ? out_w : 0);
    return cost;
}

OpCost flops_repsurf(const UmbrellaConfig& cfg, std::uint64_t n_points) {
    if (cfg.k < 2) {
        raise(ErrorCode::invalid_argument, "umbrella k must be at least 2");
    }
    const std::uint64_t triangles = n_points * cfg.k;

    const bool want_p = cfg.layout == InputLayout::n_p || cfg.layout == InputLayout::n_p_c ||
                        cfg.layout == InputLayout::n_p_cp;
    const bool want_c = cfg.layout != InputLayout::n && cfg.layout != InputLayout::n_p;
    const bool want_polar = cfg.layout == InputLayout::n_p_cp;
    const bool want_centroid = want_p || want_c;

    OpCost cost;
    cost.label = "repsurf-u";
    // Per-triangle budget; see the header for the decomposition.
    cost.multiplies += triangles * (6 + 4);  // cross + normalize
    cost.additions += triangles * (3 + 2);
    if (want_centroid) {
        cost.multiplies += triangles * 3;
        cost.additions += triangles * 3;
    }
    if (want_p) {
        cost.multiplies += triangles * 4;
        cost.additions += triangles * 2;
    }
    if (want_polar) {
        cost.multiplies += triangles * 9;
        cost.additions += triangles * 3;
    }

    if (cfg.transform != nullptr) {
        for (const auto& layer : cfg.transform->layers) {
            cost += flops_linear(triangles, layer.in_width, layer.out_width, layer.has_bias);
        }
    }
    return cost;
}

TimingReport time_stage(const std::function<void()>& closure, std::uint32_t batch,
                        std::uint32_t reps, std::uint32_t warmup) {
    if (batch < 1) {
        raise(ErrorCode::invalid_argument, "timing batch must be at least 1");
    }
    if (reps < 3) {
        raise(ErrorCode::invalid_argument, "timing needs at least 3 repetitions");
    }

    using clock = std::chrono::steady_clock;
    for (std::uint32_t i = 0; i < warmup; ++i) closure();

    std::vector<double> per_sample_ms;
    per_sample_ms.reserve(reps);
    for (std::uint32_t r = 0; r < reps; ++r) {
        const auto t0 = clock::now();
        for (std::uint32_t b = 0; b < batch; ++b) closure();
        const auto t1 = clock::now();
        const double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        per_sample_ms.push_back(ms / static_cast<double>(batch));
    }
    std::sort(per_sample_ms.begin(), per_sample_ms.end());

    TimingReport report;
    report.batch = batch;
    report.reps = reps;
    report.warmup = warmup;
    report.min_ms_per_sample = per_sample_ms.front();
    report.max_ms_per_sample = per_sample_ms.back();
    const std::size_t mid = per_sample_ms.size() / 2;
    report.median_ms_per_sample = per_sample_ms.size() % 2 == 1
                                      ? per_sample_ms[mid]
                                      : 0.5 * (per_sample_ms[mid - 1] + per_sample_ms[mid]);
    return report;
}

std::vector<RegionStats> curvature_report(std::span<const Vec3f> normals,
                                          std::span<const std::int32_t> labels,
                                          std::span<const std::int32_t> expected,
                                          std::vector<std::string>* warnings) {
    if (normals.size() != labels.size()) {
        raise(ErrorCode::invalid_argument, "normals and labels must have equal length");
    }
    if (normals.empty()) {
        raise(ErrorCode::invalid_input, "curvature report needs at least one normal");
    }

    std::unordered_map<std::int32_t, RegionStats> regions;
    for (std::size_t i = 0; i < normals.size(); ++i) {
        RegionStats& r = regions[labels[i]];
        r.label = labels[i];
        const Vec3d n(normals[i]);
        if (n.squared_norm() == 0.0) {
            ++r.dropped;  // degenerate normal carries no orientation
            continue;
        }
        r.mean_normal = r.mean_normal + n;
        ++r.count;
    }

    for (std::int32_t want : expected) {
        if (!regions.count(want) && warnings != nullptr) {
            warnings->push_back("region " + std::to_string(want) + " is empty; excluded");
        }
    }

    std::vector<RegionStats> out;
    out.reserve(regions.size());
    for (auto& [label, r] : regions) {
        if (r.count > 0) {
            r.mean_normal = r.mean_normal / static_cast<double>(r.count);
            r.dispersion = 1.0 - r.mean_normal.norm();
        } else {
            r.dispersion = 0.0;
            if (warnings != nullptr) {
                warnings->push_back("region " + std::to_string(label) +
                                    " has only degenerate normals; excluded");
            }
            continue;
        }
        out.push_back(r);
    }
    std::sort(out.begin(), out.end(),
              [](const RegionStats& a, const RegionStats& b) { return a.label < b.label; });
    return out;
}

void orient_outward(std::span<Vec3f> normals, std::span<const Vec3f> points,
                    const Vec3f& center) {
    if (normals.size() != points.size()) {
        raise(ErrorCode::invalid_argument, "normals and points must have equal length");
    }
    for (std::size_t i = 0; i < normals.size(); ++i) {
        const Vec3d outward = Vec3d(points[i]) - Vec3d(center);
        if (Vec3d(normals[i]).dot(outward) < 0.0) {
            normals[i] = -normals[i];
        }
    }
}

}  // namespace repsurf
