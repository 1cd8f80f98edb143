#include "repsurf/mlp.hpp"

#include <algorithm>
#include <cmath>

#include "repsurf/error.hpp"

namespace repsurf {

std::size_t MlpParams::parameter_count() const {
    std::size_t n = 0;
    for (const auto& layer : layers) n += layer.weight.size() + layer.bias.size();
    return n;
}

void MlpParams::zero_grads() {
    for (auto& layer : layers) {
        std::fill(layer.grad_weight.begin(), layer.grad_weight.end(), 0.0);
        std::fill(layer.grad_bias.begin(), layer.grad_bias.end(), 0.0);
    }
}

MlpParams make_mlp(std::span<const std::size_t> widths, const std::vector<bool>& bias_mask,
                   RngStream& stream) {
    if (widths.size() < 2) {
        raise(ErrorCode::invalid_argument, "an MLP needs at least one layer (two widths)");
    }
    if (bias_mask.size() != widths.size() - 1) {
        raise(ErrorCode::invalid_argument, "bias mask length must equal the layer count");
    }

    MlpParams params;
    params.layers.resize(widths.size() - 1);
    for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
        DenseLayer& layer = params.layers[l];
        layer.in_width = widths[l];
        layer.out_width = widths[l + 1];
        layer.has_bias = bias_mask[l];
        layer.rectify = l + 2 < widths.size();  // identity after the last layer

        const double bound = 1.0 / std::sqrt(static_cast<double>(layer.in_width));
        layer.weight.resize(layer.out_width * layer.in_width);
        for (double& w : layer.weight) w = stream.uniform(-bound, bound);
        if (layer.has_bias) {
            layer.bias.resize(layer.out_width);
            for (double& b : layer.bias) b = stream.uniform(-bound, bound);
        }
        layer.grad_weight.assign(layer.weight.size(), 0.0);
        layer.grad_bias.assign(layer.bias.size(), 0.0);
    }
    return params;
}

MlpParams make_mlp(std::span<const std::size_t> widths, bool bias_everywhere, RngStream& stream) {
    const std::size_t n_layers = widths.empty() ? 0 : widths.size() - 1;
    return make_mlp(widths, std::vector<bool>(n_layers, bias_everywhere), stream);
}

MlpParams make_repsurf_transform(std::span<const std::size_t> widths, RngStream& stream) {
    const std::size_t n_layers = widths.empty() ? 0 : widths.size() - 1;
    std::vector<bool> mask(n_layers, false);
    if (!mask.empty()) mask.front() = true;
    return make_mlp(widths, mask, stream);
}

namespace {

void check_rows(const MlpParams& params, std::span<const double> rows, std::size_t n_rows) {
    if (params.layers.empty()) {
        raise(ErrorCode::config_mismatch, "MLP has no layers");
    }
    if (rows.size() != n_rows * params.input_width()) {
        raise(ErrorCode::config_mismatch,
              "input buffer size does not match n_rows * input_width");
    }
}

// y = W x (+ b), row-major weights, one output row per input row.
void affine(const DenseLayer& layer, std::span<const double> in, std::size_t n_rows,
            std::vector<double>& out) {
    out.assign(n_rows * layer.out_width, 0.0);
    for (std::size_t r = 0; r < n_rows; ++r) {
        const double* x = in.data() + r * layer.in_width;
        double* y = out.data() + r * layer.out_width;
        for (std::size_t o = 0; o < layer.out_width; ++o) {
            const double* w = layer.weight.data() + o * layer.in_width;
            double acc = layer.has_bias ? layer.bias[o] : 0.0;
            for (std::size_t i = 0; i < layer.in_width; ++i) acc += w[i] * x[i];
            y[o] = acc;
        }
    }
}

}  // namespace

std::vector<double> mlp_forward(const MlpParams& params, std::span<const double> rows,
                                std::size_t n_rows) {
    check_rows(params, rows, n_rows);
    std::vector<double> current(rows.begin(), rows.end());
    std::vector<double> next;
    for (const auto& layer : params.layers) {
        affine(layer, current, n_rows, next);
        if (layer.rectify) {
            for (double& v : next) v = std::max(0.0, v);
        }
        current.swap(next);
    }
    return current;
}

std::vector<double> mlp_forward(const MlpParams& params, std::span<const double> rows,
                                std::size_t n_rows, MlpWorkspace& ws) {
    check_rows(params, rows, n_rows);
    ws.input.assign(rows.begin(), rows.end());
    ws.pre.assign(params.layers.size(), {});
    ws.post.assign(params.layers.size(), {});
    ws.rows = n_rows;
    ws.version = params.version;
    ws.valid = true;

    std::span<const double> current = ws.input;
    for (std::size_t l = 0; l < params.layers.size(); ++l) {
        const DenseLayer& layer = params.layers[l];
        affine(layer, current, n_rows, ws.pre[l]);
        ws.post[l] = ws.pre[l];
        if (layer.rectify) {
            for (double& v : ws.post[l]) v = std::max(0.0, v);
        }
        current = ws.post[l];
    }
    return ws.post.back();
}

std::vector<double> mlp_backward(MlpParams& params, const MlpWorkspace& ws,
                                 std::span<const double> upstream) {
    if (!ws.valid || ws.version != params.version || ws.pre.size() != params.layers.size()) {
        raise(ErrorCode::invalid_state, "MLP backward requires a fresh forward cache");
    }
    if (upstream.size() != ws.rows * params.output_width()) {
        raise(ErrorCode::config_mismatch, "upstream gradient size mismatch");
    }

    std::vector<double> grad(upstream.begin(), upstream.end());
    std::vector<double> grad_prev;
    for (std::size_t li = params.layers.size(); li-- > 0;) {
        DenseLayer& layer = params.layers[li];
        // Rectifier subgradient at 0 is 0: only strictly positive
        // pre-activations pass gradient.
        if (layer.rectify) {
            const std::vector<double>& pre = ws.pre[li];
            for (std::size_t i = 0; i < grad.size(); ++i) {
                if (pre[i] <= 0.0) grad[i] = 0.0;
            }
        }

        std::span<const double> input =
            li == 0 ? std::span<const double>(ws.input) : std::span<const double>(ws.post[li - 1]);

        grad_prev.assign(ws.rows * layer.in_width, 0.0);
        for (std::size_t r = 0; r < ws.rows; ++r) {
            const double* g = grad.data() + r * layer.out_width;
            const double* x = input.data() + r * layer.in_width;
            double* gx = grad_prev.data() + r * layer.in_width;
            for (std::size_t o = 0; o < layer.out_width; ++o) {
                const double go = g[o];
                double* gw = layer.grad_weight.data() + o * layer.in_width;
                const double* w = layer.weight.data() + o * layer.in_width;
                for (std::size_t i = 0; i < layer.in_width; ++i) {
                    gw[i] += go * x[i];
                    gx[i] += go * w[i];
                }
                if (layer.has_bias) layer.grad_bias[o] += go;
            }
        }
        grad.swap(grad_prev);
    }
    return grad;
}

void sgd_step(MlpParams& params, double lr, double weight_decay) {
    if (!(lr > 0.0)) {
        raise(ErrorCode::invalid_argument, "learning rate must be positive");
    }
    for (auto& layer : params.layers) {
        for (std::size_t i = 0; i < layer.weight.size(); ++i) {
            layer.weight[i] -= lr * (layer.grad_weight[i] + weight_decay * layer.weight[i]);
        }
        for (std::size_t i = 0; i < layer.bias.size(); ++i) {
            layer.bias[i] -= lr * (layer.grad_bias[i] + weight_decay * layer.bias[i]);
        }
    }
    params.zero_grads();
    ++params.version;
}

std::vector<float> flatten_parameters(const MlpParams& params) {
    std::vector<float> flat;
    flat.reserve(params.parameter_count());
    for (const auto& layer : params.layers) {
        for (double w : layer.weight) flat.push_back(static_cast<float>(w));
        for (double b : layer.bias) flat.push_back(static_cast<float>(b));
    }
    return flat;
}

void load_parameters(MlpParams& params, std::span<const float> flat) {
    if (flat.size() != params.parameter_count()) {
        raise(ErrorCode::config_mismatch,
              "parameter payload holds " + std::to_string(flat.size()) + " values, expected " +
                  std::to_string(params.parameter_count()));
    }
    std::size_t pos = 0;
    for (auto& layer : params.layers) {
        for (double& w : layer.weight) w = flat[pos++];
        for (double& b : layer.bias) b = flat[pos++];
    }
    params.zero_grads();
    ++params.version;
}

BatchNormState BatchNormState::create(std::size_t channels) {
    BatchNormState bn;
    bn.gamma.assign(channels, 1.0);
    bn.beta.assign(channels, 0.0);
    bn.running_mean.assign(channels, 0.0);
    bn.running_var.assign(channels, 1.0);
    return bn;
}

std::vector<double> BatchNormState::forward(std::span<const double> rows, std::size_t n_rows) {
    const std::size_t c = channels();
    if (rows.size() != n_rows * c) {
        raise(ErrorCode::config_mismatch, "batch norm input size mismatch");
    }
    if (training && n_rows < 2) {
        raise(ErrorCode::invalid_input, "training-mode batch norm needs a batch of at least 2");
    }

    std::vector<double> mean(c, 0.0), var(c, 0.0);
    if (training) {
        for (std::size_t r = 0; r < n_rows; ++r) {
            for (std::size_t j = 0; j < c; ++j) mean[j] += rows[r * c + j];
        }
        for (double& m : mean) m /= static_cast<double>(n_rows);
        for (std::size_t r = 0; r < n_rows; ++r) {
            for (std::size_t j = 0; j < c; ++j) {
                const double d = rows[r * c + j] - mean[j];
                var[j] += d * d;
            }
        }
        for (double& v : var) v /= static_cast<double>(n_rows);  // biased, used to normalize

        // Running estimates keep the unbiased variance, the usual convention.
        const double unbias =
            n_rows > 1 ? static_cast<double>(n_rows) / static_cast<double>(n_rows - 1) : 1.0;
        for (std::size_t j = 0; j < c; ++j) {
            running_mean[j] = (1.0 - momentum) * running_mean[j] + momentum * mean[j];
            running_var[j] = (1.0 - momentum) * running_var[j] + momentum * var[j] * unbias;
        }
    } else {
        mean = running_mean;
        var = running_var;
    }

    std::vector<double> out(rows.size());
    for (std::size_t r = 0; r < n_rows; ++r) {
        for (std::size_t j = 0; j < c; ++j) {
            const double norm = (rows[r * c + j] - mean[j]) / std::sqrt(var[j] + epsilon);
            out[r * c + j] = gamma[j] * norm + beta[j];
        }
    }
    return out;
}

namespace {

std::vector<double> matmul_rows(std::span<const double> rows, std::size_t n_rows,
                                std::size_t in_w, const std::vector<double>& w,
                                std::size_t out_w) {
    if (rows.size() != n_rows * in_w || w.size() != out_w * in_w) {
        raise(ErrorCode::config_mismatch, "cd weight block size mismatch");
    }
    std::vector<double> out(n_rows * out_w, 0.0);
    for (std::size_t r = 0; r < n_rows; ++r) {
        for (std::size_t o = 0; o < out_w; ++o) {
            double acc = 0.0;
            for (std::size_t i = 0; i < in_w; ++i) acc += w[o * in_w + i] * rows[r * in_w + i];
            out[r * out_w + o] = acc;
        }
    }
    return out;
}

}  // namespace

std::vector<double> cd_forward(std::span<const double> x_rows, std::span<const double> f_rows,
                               std::size_t n_rows, const CdWeights& weights, BatchNormState& bn_x,
                               BatchNormState& bn_f, CdVariant variant) {
    std::vector<double> zx, zf;
    switch (variant) {
        case CdVariant::pre: {
            if (bn_x.channels() != weights.x_width || bn_f.channels() != weights.f_width) {
                raise(ErrorCode::config_mismatch, "pre-cd batch norm widths must match inputs");
            }
            const std::vector<double> nx = bn_x.forward(x_rows, n_rows);
            const std::vector<double> nf = bn_f.forward(f_rows, n_rows);
            zx = matmul_rows(nx, n_rows, weights.x_width, weights.wx, weights.out_width);
            zf = matmul_rows(nf, n_rows, weights.f_width, weights.wf, weights.out_width);
            break;
        }
        case CdVariant::post:
        case CdVariant::none: {
            zx = matmul_rows(x_rows, n_rows, weights.x_width, weights.wx, weights.out_width);
            zf = matmul_rows(f_rows, n_rows, weights.f_width, weights.wf, weights.out_width);
            if (variant == CdVariant::post) {
                if (bn_x.channels() != weights.out_width || bn_f.channels() != weights.out_width) {
                    raise(ErrorCode::config_mismatch,
                          "post-cd batch norm widths must match the output");
                }
                zx = bn_x.forward(zx, n_rows);
                zf = bn_f.forward(zf, n_rows);
            }
            break;
        }
    }

    std::vector<double> out(n_rows * weights.out_width);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = zx[i] + zf[i];

    if (variant == CdVariant::none) {
        if (bn_x.channels() != weights.out_width) {
            raise(ErrorCode::config_mismatch, "shared batch norm width must match the output");
        }
        out = bn_x.forward(out, n_rows);
    }
    for (double& v : out) v = std::max(0.0, v);
    return out;
}

}  // namespace repsurf
