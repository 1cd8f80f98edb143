#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "repsurf/rng.hpp"

namespace repsurf {

/// One dense layer: row-major (out x in) weight, optional bias, rectifier on
/// every layer except the last. Gradient buffers mirror the parameter shapes.
struct DenseLayer {
    std::size_t in_width = 0;
    std::size_t out_width = 0;
    bool has_bias = false;
    bool rectify = false;
    std::vector<double> weight;       // out * in
    std::vector<double> bias;         // out, empty when !has_bias
    std::vector<double> grad_weight;  // same shape as weight
    std::vector<double> grad_bias;    // same shape as bias
};

struct MlpParams {
    std::vector<DenseLayer> layers;
    std::uint64_t version = 0;  // bumped by sgd_step; forward caches record it

    std::size_t input_width() const { return layers.empty() ? 0 : layers.front().in_width; }
    std::size_t output_width() const { return layers.empty() ? 0 : layers.back().out_width; }
    std::size_t parameter_count() const;
    void zero_grads();
};

/// Builds an MLP from a width chain, e.g. {10, 16, 16, 10} = three layers.
/// `bias_mask` selects which layers carry a bias; the default RepSurf
/// transform enables it on the first layer only. Weights are initialized
/// uniformly in [-1/sqrt(in), 1/sqrt(in)] from `stream`.
MlpParams make_mlp(std::span<const std::size_t> widths, const std::vector<bool>& bias_mask,
                   RngStream& stream);

/// Convenience: same bias setting on every layer.
MlpParams make_mlp(std::span<const std::size_t> widths, bool bias_everywhere, RngStream& stream);

/// The Table-5 default: bias on the first layer only, no batch norm.
MlpParams make_repsurf_transform(std::span<const std::size_t> widths, RngStream& stream);

/// Forward intermediates cached for the backward pass. Invalidated by
/// sgd_step (version mismatch) and by any shape change.
struct MlpWorkspace {
    std::vector<double> input;
    std::vector<std::vector<double>> pre;   // pre-activation per layer
    std::vector<std::vector<double>> post;  // post-activation per layer
    std::size_t rows = 0;
    std::uint64_t version = 0;
    bool valid = false;
};

/// Row-wise forward: `rows` is row-major (n_rows x input_width). Returns
/// n_rows x output_width.
std::vector<double> mlp_forward(const MlpParams& params, std::span<const double> rows,
                                std::size_t n_rows);

/// Forward that records intermediates for mlp_backward.
std::vector<double> mlp_forward(const MlpParams& params, std::span<const double> rows,
                                std::size_t n_rows, MlpWorkspace& ws);

/// Exact reverse-mode gradients of the forward map; accumulates into the
/// layers' grad buffers and returns the input gradients. The rectifier
/// subgradient at 0 is 0. Requires a workspace from the same params version.
std::vector<double> mlp_backward(MlpParams& params, const MlpWorkspace& ws,
                                 std::span<const double> upstream);

/// p <- p - lr * (grad + weight_decay * p); zeroes grads and bumps version.
void sgd_step(MlpParams& params, double lr, double weight_decay);

/// Flat parameter vector in layer order (weights then bias per layer), as
/// float32 for the binary container.
std::vector<float> flatten_parameters(const MlpParams& params);

/// Inverse of flatten_parameters into an existing architecture; the value
/// count must match exactly. Bumps the version.
void load_parameters(MlpParams& params, std::span<const float> flat);

/// Per-channel batch normalization state. Training mode normalizes by batch
/// statistics (biased variance) and updates the running estimates with
/// `momentum`; inference mode normalizes by the running estimates.
struct BatchNormState {
    std::vector<double> gamma;
    std::vector<double> beta;
    std::vector<double> running_mean;
    std::vector<double> running_var;
    double epsilon = 1e-5;
    double momentum = 0.1;
    bool training = true;

    static BatchNormState create(std::size_t channels);
    std::size_t channels() const { return gamma.size(); }

    /// Normalizes rows (n_rows x channels) in place semantics-free: returns
    /// the normalized copy. Training mode with n_rows < 2 is invalid_input.
    std::vector<double> forward(std::span<const double> rows, std::size_t n_rows);
};

/// Channel de-differentiation variants for the fused first layer
/// out = act(wx . x + wf . f):
///   none: act(BN(wx.x + wf.f)) with one shared BN (bn_x);
///   post: act(BN_x(wx.x) + BN_f(wf.f));
///   pre:  act(wx.BN(x) + wf.BN(f)) with BNs sized to the input widths.
enum class CdVariant { none, pre, post };

struct CdWeights {
    std::size_t x_width = 0;
    std::size_t f_width = 0;
    std::size_t out_width = 0;
    std::vector<double> wx;  // out * x_width
    std::vector<double> wf;  // out * f_width
};

std::vector<double> cd_forward(std::span<const double> x_rows, std::span<const double> f_rows,
                               std::size_t n_rows, const CdWeights& weights, BatchNormState& bn_x,
                               BatchNormState& bn_f, CdVariant variant);

}  // namespace repsurf
