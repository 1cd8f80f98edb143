#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "repsurf/error.hpp"
#include "repsurf/mlp.hpp"

using namespace repsurf;

namespace {

DenseLayer dense(std::size_t in, std::size_t out, std::vector<double> w, std::vector<double> b,
                 bool rectify) {
    DenseLayer layer;
    layer.in_width = in;
    layer.out_width = out;
    layer.weight = std::move(w);
    layer.bias = std::move(b);
    layer.has_bias = !layer.bias.empty();
    layer.rectify = rectify;
    layer.grad_weight.assign(layer.weight.size(), 0.0);
    layer.grad_bias.assign(layer.bias.size(), 0.0);
    return layer;
}

MlpParams identity_net(std::size_t width, std::size_t layers) {
    MlpParams params;
    for (std::size_t l = 0; l < layers; ++l) {
        std::vector<double> w(width * width, 0.0);
        for (std::size_t i = 0; i < width; ++i) w[i * width + i] = 1.0;
        params.layers.push_back(dense(width, width, std::move(w), {}, false));
    }
    return params;
}

}  // namespace

TEST_CASE("identity layer reproduces the input") {
    const MlpParams net = identity_net(3, 1);
    const std::vector<double> rows{0.5, -1.25, 2.0};
    CHECK(mlp_forward(net, rows, 1) == rows);
}

TEST_CASE("last layer skips the rectifier") {
    MlpParams net;
    net.layers.push_back(dense(2, 1, {1.0, -1.0}, {0.0}, false));
    const std::vector<double> rows{2.0, 3.0};
    const auto out = mlp_forward(net, rows, 1);
    CHECK(out == std::vector<double>{-1.0});
}

TEST_CASE("three-layer forward matches the scalar-loop oracle") {
    RngStream rng(111);
    const std::size_t widths[] = {10, 16, 16, 10};
    const MlpParams net = make_mlp(widths, true, rng);

    std::vector<double> row(10);
    for (double& v : row) v = rng.uniform(-1, 1);

    const auto got = mlp_forward(net, row, 1);
    const auto want = oracles::scalar_mlp(net, row);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
        CHECK(std::abs(got[i] - want[i]) <= 1e-5 * std::max(1.0, std::abs(want[i])));
    }
}

TEST_CASE("mlp width mismatch is a configuration error") {
    const MlpParams net = identity_net(3, 1);
    const std::vector<double> rows{1.0, 2.0};
    CHECK_THROWS_AS(mlp_forward(net, rows, 1), Error);
}

TEST_CASE("backward through an identity network passes the upstream gradient") {
    MlpParams net = identity_net(4, 2);
    const std::vector<double> rows{1.0, -2.0, 3.0, -4.0};
    MlpWorkspace ws;
    mlp_forward(net, rows, 1, ws);
    const std::vector<double> upstream{0.1, 0.2, 0.3, 0.4};
    const auto grad = mlp_backward(net, ws, upstream);
    CHECK(grad == upstream);
}

TEST_CASE("all-negative pre-activations block the gradient") {
    MlpParams net;
    net.layers.push_back(dense(2, 2, {1.0, 0.0, 0.0, 1.0}, {}, true));
    net.layers.push_back(dense(2, 2, {1.0, 0.0, 0.0, 1.0}, {}, false));

    const std::vector<double> rows{-1.0, -2.0};
    MlpWorkspace ws;
    mlp_forward(net, rows, 1, ws);
    const auto grad = mlp_backward(net, ws, std::vector<double>{1.0, 1.0});
    CHECK(grad == std::vector<double>{0.0, 0.0});
    for (double g : net.layers[0].grad_weight) CHECK(g == 0.0);
}

TEST_CASE("analytic gradients match central finite differences") {
    RngStream rng(112);
    const std::size_t widths[] = {6, 8, 8, 4};
    MlpParams net = make_mlp(widths, true, rng);

    const std::size_t n_rows = 3;
    std::vector<double> rows(n_rows * 6);
    for (double& v : rows) v = rng.uniform(-1, 1);

    // scalar objective: sum of outputs weighted by fixed coefficients
    std::vector<double> coeff(n_rows * 4);
    for (double& v : coeff) v = rng.uniform(-1, 1);

    auto objective = [&](const MlpParams& p, const std::vector<double>& input) {
        const auto out = mlp_forward(p, input, n_rows);
        double sum = 0;
        for (std::size_t i = 0; i < out.size(); ++i) sum += coeff[i] * out[i];
        return sum;
    };

    MlpWorkspace ws;
    mlp_forward(net, rows, n_rows, ws);
    const auto input_grad = mlp_backward(net, ws, coeff);

    const double h = 1e-5;
    const double tol = 1e-4;
    auto check_close = [&](double analytic, double numeric) {
        CHECK(std::abs(analytic - numeric) <= tol * std::max(1.0, std::abs(numeric)));
    };

    for (auto& layer : net.layers) {
        for (std::size_t i = 0; i < layer.weight.size(); i += 7) {
            const double saved = layer.weight[i];
            layer.weight[i] = saved + h;
            const double up = objective(net, rows);
            layer.weight[i] = saved - h;
            const double down = objective(net, rows);
            layer.weight[i] = saved;
            check_close(layer.grad_weight[i], (up - down) / (2 * h));
        }
        for (std::size_t i = 0; i < layer.bias.size(); i += 3) {
            const double saved = layer.bias[i];
            layer.bias[i] = saved + h;
            const double up = objective(net, rows);
            layer.bias[i] = saved - h;
            const double down = objective(net, rows);
            layer.bias[i] = saved;
            check_close(layer.grad_bias[i], (up - down) / (2 * h));
        }
    }
    for (std::size_t i = 0; i < rows.size(); i += 2) {
        std::vector<double> bumped = rows;
        bumped[i] = rows[i] + h;
        const double up = objective(net, bumped);
        bumped[i] = rows[i] - h;
        const double down = objective(net, bumped);
        check_close(input_grad[i], (up - down) / (2 * h));
    }
}

TEST_CASE("backward after sgd_step reports a stale cache") {
    RngStream rng(113);
    const std::size_t widths[] = {4, 4};
    MlpParams net = make_mlp(widths, true, rng);
    std::vector<double> rows(4, 0.5);

    MlpWorkspace ws;
    mlp_forward(net, rows, 1, ws);
    mlp_backward(net, ws, std::vector<double>(4, 1.0));
    sgd_step(net, 0.1, 0.0);
    CHECK_THROWS_AS(mlp_backward(net, ws, std::vector<double>(4, 1.0)), Error);
}

TEST_CASE("sgd_step applies the decayed gradient and zeroes buffers") {
    MlpParams net;
    net.layers.push_back(dense(1, 1, {1.0}, {}, false));

    SUBCASE("zero gradient leaves parameters unchanged") {
        sgd_step(net, 0.5, 0.0);
        CHECK(net.layers[0].weight[0] == 1.0);
    }
    SUBCASE("plain step") {
        net.layers[0].grad_weight[0] = 2.0;
        sgd_step(net, 0.1, 0.0);
        CHECK(net.layers[0].weight[0] == doctest::Approx(0.8));
        CHECK(net.layers[0].grad_weight[0] == 0.0);
    }
    SUBCASE("invalid learning rate") {
        CHECK_THROWS_AS(sgd_step(net, 0.0, 0.0), Error);
        CHECK_THROWS_AS(sgd_step(net, -1.0, 0.0), Error);
    }
}

TEST_CASE("fifty sgd steps on a toy regression strictly decrease the loss") {
    RngStream rng(114);
    const std::size_t widths[] = {1, 4, 1};
    MlpParams net = make_mlp(widths, true, rng);

    // two-point regression: f(0) = 1, f(1) = -1
    const std::vector<double> xs{0.0, 1.0};
    const std::vector<double> ys{1.0, -1.0};

    double prev = std::numeric_limits<double>::infinity();
    for (int step = 0; step < 50; ++step) {
        MlpWorkspace ws;
        const auto out = mlp_forward(net, xs, 2, ws);
        double loss = 0;
        std::vector<double> upstream(2);
        for (int i = 0; i < 2; ++i) {
            const double err = out[i] - ys[i];
            loss += err * err;
            upstream[i] = 2.0 * err;
        }
        CHECK(loss < prev);
        prev = loss;
        mlp_backward(net, ws, upstream);
        sgd_step(net, 0.05, 0.0);
    }
}

TEST_CASE("default transform has a bias on the first layer only") {
    RngStream rng(115);
    const std::size_t widths[] = {10, 16, 16, 10};
    const MlpParams net = make_repsurf_transform(widths, rng);
    REQUIRE(net.layers.size() == 3);
    CHECK(net.layers[0].has_bias);
    CHECK_FALSE(net.layers[1].has_bias);
    CHECK_FALSE(net.layers[2].has_bias);
    CHECK(net.layers[0].rectify);
    CHECK(net.layers[1].rectify);
    CHECK_FALSE(net.layers[2].rectify);
    CHECK(net.parameter_count() == 10 * 16 + 16 + 16 * 16 + 16 * 10);
}

TEST_CASE("batch norm standardizes training batches") {
    RngStream rng(116);
    const std::size_t channels = 16, n_rows = 64;
    std::vector<double> rows(n_rows * channels);
    for (double& v : rows) v = rng.uniform(-3, 7);

    BatchNormState bn = BatchNormState::create(channels);
    const auto out = bn.forward(rows, n_rows);

    for (std::size_t c = 0; c < channels; ++c) {
        double mean = 0;
        for (std::size_t r = 0; r < n_rows; ++r) mean += out[r * channels + c];
        mean /= n_rows;
        double var = 0;
        for (std::size_t r = 0; r < n_rows; ++r) {
            const double d = out[r * channels + c] - mean;
            var += d * d;
        }
        var /= n_rows;
        CHECK(std::abs(mean) < 1e-5);
        CHECK(std::abs(var - 1.0) < 1e-3);
    }
}

TEST_CASE("training-mode batch norm rejects a batch of one") {
    BatchNormState bn = BatchNormState::create(4);
    std::vector<double> row(4, 1.0);
    CHECK_THROWS_AS(bn.forward(row, 1), Error);
}

namespace {

CdWeights random_cd_weights(std::size_t xw, std::size_t fw, std::size_t out, RngStream& rng) {
    CdWeights w;
    w.x_width = xw;
    w.f_width = fw;
    w.out_width = out;
    w.wx.resize(out * xw);
    w.wf.resize(out * fw);
    for (double& v : w.wx) v = rng.uniform(-1, 1);
    for (double& v : w.wf) v = rng.uniform(-1, 1);
    return w;
}

// Inference-mode state that normalizes to exactly the identity map.
BatchNormState identity_bn(std::size_t channels) {
    BatchNormState bn = BatchNormState::create(channels);
    bn.training = false;
    for (double& v : bn.running_var) v = 1.0 - bn.epsilon;
    return bn;
}

}  // namespace

TEST_CASE("post-cd with identity batch norm equals the none variant") {
    RngStream rng(117);
    const std::size_t xw = 3, fw = 5, out = 4, n_rows = 6;
    const CdWeights w = random_cd_weights(xw, fw, out, rng);
    std::vector<double> x(n_rows * xw), f(n_rows * fw);
    for (double& v : x) v = rng.uniform(-1, 1);
    for (double& v : f) v = rng.uniform(-1, 1);

    BatchNormState bn_a = identity_bn(out), bn_b = identity_bn(out);
    const auto post = cd_forward(x, f, n_rows, w, bn_a, bn_b, CdVariant::post);
    BatchNormState bn_c = identity_bn(out), bn_d = identity_bn(out);
    const auto none = cd_forward(x, f, n_rows, w, bn_c, bn_d, CdVariant::none);

    REQUIRE(post.size() == none.size());
    for (std::size_t i = 0; i < post.size(); ++i) {
        CHECK(std::abs(post[i] - none[i]) <= 1e-6);
    }
}

TEST_CASE("split weight blocks reproduce the full matrix product") {
    // [[1,2,3],[4,5,6]] split after channel 1: x=(1), f=(1,1) -> (6,15)
    CdWeights w;
    w.x_width = 1;
    w.f_width = 2;
    w.out_width = 2;
    w.wx = {1.0, 4.0};
    w.wf = {2.0, 3.0, 5.0, 6.0};

    const std::vector<double> x{1.0, 1.0};       // 2 rows of width 1
    const std::vector<double> f{1.0, 1.0, 1.0, 1.0};  // 2 rows of width 2
    BatchNormState bn_a = identity_bn(2), bn_b = identity_bn(2);
    const auto out = cd_forward(x, f, 2, w, bn_a, bn_b, CdVariant::none);
    REQUIRE(out.size() == 4);
    CHECK(out[0] == doctest::Approx(6.0).epsilon(1e-9));
    CHECK(out[1] == doctest::Approx(15.0).epsilon(1e-9));
}

TEST_CASE("post-cd branch activations are standardized before the sum") {
    RngStream rng(118);
    const std::size_t xw = 3, fw = 16, out = 8, n_rows = 64;
    const CdWeights w = random_cd_weights(xw, fw, out, rng);
    std::vector<double> x(n_rows * xw), f(n_rows * fw);
    for (double& v : x) v = rng.uniform(-4, 2);   // deliberately imbalanced
    for (double& v : f) v = rng.uniform(-0.1, 0.1);

    // recompute one branch: wx . x, then training batch norm
    std::vector<double> zx(n_rows * out, 0.0);
    for (std::size_t r = 0; r < n_rows; ++r) {
        for (std::size_t o = 0; o < out; ++o) {
            double acc = 0;
            for (std::size_t i = 0; i < xw; ++i) acc += w.wx[o * xw + i] * x[r * xw + i];
            zx[r * out + o] = acc;
        }
    }
    BatchNormState bn = BatchNormState::create(out);
    const auto normed = bn.forward(zx, n_rows);
    for (std::size_t o = 0; o < out; ++o) {
        double mean = 0;
        for (std::size_t r = 0; r < n_rows; ++r) mean += normed[r * out + o];
        mean /= n_rows;
        double var = 0;
        for (std::size_t r = 0; r < n_rows; ++r) {
            const double d = normed[r * out + o] - mean;
            var += d * d;
        }
        var /= n_rows;
        CHECK(std::abs(mean) < 1e-5);
        CHECK(std::abs(var - 1.0) < 1e-3);
    }
}

TEST_CASE("pre-cd normalizes the raw inputs") {
    RngStream rng(119);
    const std::size_t xw = 3, fw = 4, out = 5, n_rows = 16;
    const CdWeights w = random_cd_weights(xw, fw, out, rng);
    std::vector<double> x(n_rows * xw), f(n_rows * fw);
    for (double& v : x) v = rng.uniform(-1, 1);
    for (double& v : f) v = rng.uniform(-1, 1);

    BatchNormState bn_x = BatchNormState::create(xw);
    BatchNormState bn_f = BatchNormState::create(fw);
    const auto outp = cd_forward(x, f, n_rows, w, bn_x, bn_f, CdVariant::pre);
    CHECK(outp.size() == n_rows * out);
    for (double v : outp) {
        CHECK(std::isfinite(v));
        CHECK(v >= 0.0);  // rectified
    }
    // mismatched widths are rejected
    BatchNormState wrong = BatchNormState::create(out);
    CHECK_THROWS_AS(cd_forward(x, f, n_rows, w, wrong, bn_f, CdVariant::pre), Error);
}
