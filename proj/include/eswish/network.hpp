// Copyright 2026 The eswish Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef ESWISH_NETWORK_HPP
#define ESWISH_NETWORK_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "eswish/activations.hpp"
#include "eswish/error.hpp"
#include "eswish/numerics.hpp"

namespace eswish {

enum class Mode { Train, Infer };

// ---------------------------------------------------------------------------
// Topology description

struct DenseSpec {
    std::size_t in = 0;
    std::size_t out = 0;
    friend bool operator==(const DenseSpec&, const DenseSpec&) = default;
};

struct BatchNormSpec {
    std::size_t features = 0;
    friend bool operator==(const BatchNormSpec&, const BatchNormSpec&) = default;
};

struct DropoutSpec {
    double rate = 0.0;
    friend bool operator==(const DropoutSpec&, const DropoutSpec&) = default;
};

struct ActivationLayerSpec {
    ActivationSpec activation;
    friend bool operator==(const ActivationLayerSpec&, const ActivationLayerSpec&) = default;
};

using LayerSpec = std::variant<DenseSpec, BatchNormSpec, DropoutSpec, ActivationLayerSpec>;
using NetworkSpec = std::vector<LayerSpec>;

inline std::string describe(const LayerSpec& layer) {
    return std::visit(
        [](const auto& l) -> std::string {
            using T = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<T, DenseSpec>) {
                return "Dense(" + std::to_string(l.in) + "->" + std::to_string(l.out) + ")";
            } else if constexpr (std::is_same_v<T, BatchNormSpec>) {
                return "BatchNorm(" + std::to_string(l.features) + ")";
            } else if constexpr (std::is_same_v<T, DropoutSpec>) {
                return "Dropout(" + detail::shortest_double(l.rate) + ")";
            } else {
                return "Activation(" + to_string(l.activation) + ")";
            }
        },
        layer);
}

/// Checks that feature widths chain through the stack and every layer
/// parameter is in range.
inline void validate(const NetworkSpec& spec) {
    std::size_t width = 0;  // 0 = not yet known
    for (std::size_t i = 0; i < spec.size(); ++i) {
        const std::string where = "layer " + std::to_string(i) + " " + describe(spec[i]);
        std::visit(
            [&](const auto& l) {
                using T = std::decay_t<decltype(l)>;
                if constexpr (std::is_same_v<T, DenseSpec>) {
                    if (l.in == 0 || l.out == 0) throw ConfigError(where + ": zero dimension");
                    if (width != 0 && l.in != width) {
                        throw ConfigError(where + ": expects " + std::to_string(l.in) +
                                          " inputs but previous layer yields " + std::to_string(width));
                    }
                    width = l.out;
                } else if constexpr (std::is_same_v<T, BatchNormSpec>) {
                    if (l.features == 0) throw ConfigError(where + ": zero features");
                    if (width != 0 && l.features != width) {
                        throw ConfigError(where + ": feature count does not match width " +
                                          std::to_string(width));
                    }
                    width = l.features;
                } else if constexpr (std::is_same_v<T, DropoutSpec>) {
                    if (!(l.rate >= 0.0 && l.rate < 1.0)) {
                        throw ConfigError(where + ": dropout rate must be in [0, 1)");
                    }
                } else {
                    validate(l.activation);
                }
            },
            spec[i]);
    }
}

// ---------------------------------------------------------------------------
// Layers with parameter state

struct DenseLayer {
    Matrix weights;  // in x out
    Matrix bias;     // 1 x out
};

struct BatchNormLayer {
    static constexpr double kEpsilon = 1e-5;
    static constexpr double kMomentum = 0.9;

    Matrix gamma;         // 1 x features
    Matrix shift;         // 1 x features
    Matrix running_mean;  // 1 x features
    Matrix running_var;   // 1 x features
    double epsilon = kEpsilon;

    static BatchNormLayer identity(std::size_t features) {
        return {Matrix(1, features, 1.0), Matrix(1, features, 0.0), Matrix(1, features, 0.0),
                Matrix(1, features, 1.0), kEpsilon};
    }
};

struct DropoutLayer {
    double rate = 0.0;
};

struct ActivationLayer {
    ActivationSpec activation;
};

using Layer = std::variant<DenseLayer, BatchNormLayer, DropoutLayer, ActivationLayer>;

// ---------------------------------------------------------------------------
// Dense

inline Matrix dense_forward(const Matrix& weights, const Matrix& bias, const Matrix& x) {
    if (x.cols() != weights.rows()) {
        throw ShapeError("dense_forward: input " + x.shape() + " does not fit weights " +
                         weights.shape());
    }
    Matrix out = matmul(x, weights);
    add_row_inplace(out, bias);
    return out;
}

struct DenseGrads {
    Matrix d_weights;
    Matrix d_bias;
    Matrix d_input;
};

/// Backward of x*W + b given the forward input `x` and upstream gradient `g`.
/// `need_input` = false leaves d_input empty (the first layer has no use for it).
inline DenseGrads dense_backward(const Matrix& weights, const Matrix& x, const Matrix& g, bool need_input = true) {
    if (g.rows() != x.rows() || g.cols() != weights.cols() || x.cols() != weights.rows()) {
        throw ShapeError("dense_backward: upstream " + g.shape() + ", input " + x.shape() +
                         ", weights " + weights.shape());
    }
    return {matmul_tn(x, g), column_sums(g), need_input ? matmul_nt(g, weights) : Matrix()};
}

// ---------------------------------------------------------------------------
// Batch normalization

struct BatchNormCache {
    Matrix normalized;  // x_hat
    Matrix inv_std;     // 1 x features
    bool valid = false;
};

/// Train mode normalizes each feature by the batch mean and biased batch
/// variance and folds those into the running statistics; Infer mode uses the
/// running statistics. `cache` (optional) receives what backward needs.
inline Matrix batchnorm_forward(BatchNormLayer& bn, const Matrix& x, Mode mode,
                                BatchNormCache* cache = nullptr) {
    const std::size_t n = x.rows();
    const std::size_t f = x.cols();
    if (f != bn.gamma.cols()) {
        throw ShapeError("batchnorm_forward: input " + x.shape() + " vs " +
                         std::to_string(bn.gamma.cols()) + " features");
    }
    Matrix out(n, f);
    if (mode == Mode::Infer) {
        for (std::size_t j = 0; j < f; ++j) {
            const double scale = bn.gamma(0, j) / std::sqrt(bn.running_var(0, j) + bn.epsilon);
            for (std::size_t i = 0; i < n; ++i) {
                out(i, j) = (x(i, j) - bn.running_mean(0, j)) * scale + bn.shift(0, j);
            }
        }
        if (cache) cache->valid = false;
        return out;
    }

    if (n < 2) throw DomainError("batchnorm_forward: Train mode needs batch size >= 2, got " +
                                 std::to_string(n));
    const Matrix sums = column_sums(x);
    Matrix mean(1, f);
    Matrix var(1, f);
    for (std::size_t j = 0; j < f; ++j) mean(0, j) = sums(0, j) / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < f; ++j) {
            const double d = x(i, j) - mean(0, j);
            var(0, j) += d * d;
        }
    }
    Matrix inv_std(1, f);
    for (std::size_t j = 0; j < f; ++j) {
        var(0, j) /= static_cast<double>(n);
        inv_std(0, j) = 1.0 / std::sqrt(var(0, j) + bn.epsilon);
    }
    Matrix normalized(n, f);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < f; ++j) {
            normalized(i, j) = (x(i, j) - mean(0, j)) * inv_std(0, j);
            out(i, j) = normalized(i, j) * bn.gamma(0, j) + bn.shift(0, j);
        }
    }
    constexpr double m = BatchNormLayer::kMomentum;
    for (std::size_t j = 0; j < f; ++j) {
        bn.running_mean(0, j) = m * bn.running_mean(0, j) + (1.0 - m) * mean(0, j);
        bn.running_var(0, j) = m * bn.running_var(0, j) + (1.0 - m) * var(0, j);
    }
    if (cache) *cache = {std::move(normalized), std::move(inv_std), true};
    return out;
}

struct BatchNormGrads {
    Matrix d_gamma;
    Matrix d_shift;
    Matrix d_input;
};

inline BatchNormGrads batchnorm_backward(const BatchNormLayer& bn, const BatchNormCache& cache,
                                         const Matrix& g) {
    if (!cache.valid) throw UsageError("batchnorm_backward: cache is not from a Train-mode forward");
    require_same_shape(cache.normalized, g, "batchnorm_backward");
    const std::size_t n = g.rows();
    const std::size_t f = g.cols();
    BatchNormGrads out{Matrix(1, f), Matrix(1, f), Matrix(n, f)};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < f; ++j) {
            out.d_gamma(0, j) += g(i, j) * cache.normalized(i, j);
            out.d_shift(0, j) += g(i, j);
        }
    }
    // dx = inv_std / n * (n * dxhat - sum(dxhat) - xhat * sum(dxhat * xhat)),
    // with dxhat = g * gamma, so the two sums are gamma * d_shift and gamma * d_gamma.
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < f; ++j) {
            const double gam = bn.gamma(0, j);
            const double dxhat = g(i, j) * gam;
            out.d_input(i, j) = cache.inv_std(0, j) * inv_n *
                                (static_cast<double>(n) * dxhat - gam * out.d_shift(0, j) -
                                 cache.normalized(i, j) * gam * out.d_gamma(0, j));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Dropout

struct DropoutResult {
    Matrix output;
    Matrix mask;  // 1 where the entry survived, 0 where dropped
};

/// Inverted dropout: survivors are scaled by 1 / (1 - rate) in Train mode so
/// that Infer mode is the identity.
inline DropoutResult dropout_forward(double rate, const Matrix& x, Rng& rng, Mode mode) {
    if (!(rate >= 0.0 && rate < 1.0)) {
        throw DomainError("dropout rate must be in [0, 1), got " + std::to_string(rate));
    }
    if (mode == Mode::Infer || rate == 0.0) return {x, Matrix(x.rows(), x.cols(), 1.0)};
    const double scale = 1.0 / (1.0 - rate);
    DropoutResult r{x, Matrix(x.rows(), x.cols(), 1.0)};
    auto out = r.output.values();
    auto mask = r.mask.values();
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (rng.uniform() < rate) {
            mask[i] = 0.0;
            out[i] = 0.0;
        } else {
            out[i] *= scale;
        }
    }
    return r;
}

// ---------------------------------------------------------------------------
// Loss

using Labels = std::vector<std::size_t>;

struct LossResult {
    double loss;
    Matrix d_logits;
};

/// Mean softmax cross-entropy over the batch and its gradient
/// (softmax - onehot) / batch_size.
inline LossResult softmax_cross_entropy(const Matrix& logits, const Labels& labels) {
    const std::size_t n = logits.rows();
    const std::size_t k = logits.cols();
    if (labels.size() != n) {
        throw ShapeError("softmax_cross_entropy: " + std::to_string(labels.size()) +
                         " labels for logits " + logits.shape());
    }
    if (n == 0) throw DomainError("softmax_cross_entropy: empty batch");
    LossResult r{0.0, Matrix(n, k)};
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (labels[i] >= k) {
            throw DomainError("softmax_cross_entropy: label " + std::to_string(labels[i]) +
                              " at row " + std::to_string(i) + " is not below " +
                              std::to_string(k) + " classes");
        }
        auto row = logits.row(i);
        const auto top = static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin());
        const double mx = row[top];
        // log1p keeps full precision when the non-max terms are tiny
        double tail = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            if (j != top) tail += std::exp(row[j] - mx);
        }
        const double log_sum = std::log1p(tail);
        r.loss += -(row[labels[i]] - mx - log_sum);
        for (std::size_t j = 0; j < k; ++j) {
            const double p = std::exp(row[j] - mx - log_sum);
            r.d_logits(i, j) = (p - (j == labels[i] ? 1.0 : 0.0)) * inv_n;
        }
    }
    r.loss *= inv_n;
    return r;
}

// ---------------------------------------------------------------------------
// Network

/// Non-owning handle to one trainable tensor.
struct ParamRef {
    std::string name;
    Matrix* value;
    // True for a Dense bias feeding straight into BatchNorm: in Train mode the
    // batch mean absorbs it, so the loss does not depend on it at all.
    bool batch_invariant = false;
};

struct DenseCache {
    Matrix input;
};
struct DropoutCache {
    Matrix mask;
    double scale = 1.0;
};
struct ActivationCache {
    Matrix input;
};
using LayerCache = std::variant<std::monostate, DenseCache, BatchNormCache, DropoutCache, ActivationCache>;

struct ForwardPass {
    Matrix output;
    std::vector<LayerCache> caches;  // empty unless the forward ran in Train mode
    std::uint64_t tag = 0;
};

/// One gradient per trainable tensor, in Network::parameters() order.
using Gradients = std::vector<Matrix>;

class Network {
public:
    Network() = default;
    explicit Network(std::vector<Layer> layers) : layers_(std::move(layers)) { validate(spec()); }

    /// Glorot-uniform weights, zero biases, identity batch-norm.
    static Network build(const NetworkSpec& spec, Rng& rng) {
        validate(spec);
        std::vector<Layer> layers;
        layers.reserve(spec.size());
        for (const auto& s : spec) {
            std::visit(
                [&](const auto& l) {
                    using T = std::decay_t<decltype(l)>;
                    if constexpr (std::is_same_v<T, DenseSpec>) {
                        layers.emplace_back(DenseLayer{glorot_uniform(l.in, l.out, rng), Matrix(1, l.out)});
                    } else if constexpr (std::is_same_v<T, BatchNormSpec>) {
                        layers.emplace_back(BatchNormLayer::identity(l.features));
                    } else if constexpr (std::is_same_v<T, DropoutSpec>) {
                        layers.emplace_back(DropoutLayer{l.rate});
                    } else {
                        layers.emplace_back(ActivationLayer{l.activation});
                    }
                },
                s);
        }
        return Network(std::move(layers));
    }

    NetworkSpec spec() const {
        NetworkSpec out;
        out.reserve(layers_.size());
        for (const auto& layer : layers_) {
            std::visit(
                [&](const auto& l) {
                    using T = std::decay_t<decltype(l)>;
                    if constexpr (std::is_same_v<T, DenseLayer>) {
                        out.emplace_back(DenseSpec{l.weights.rows(), l.weights.cols()});
                    } else if constexpr (std::is_same_v<T, BatchNormLayer>) {
                        out.emplace_back(BatchNormSpec{l.gamma.cols()});
                    } else if constexpr (std::is_same_v<T, DropoutLayer>) {
                        out.emplace_back(DropoutSpec{l.rate});
                    } else {
                        out.emplace_back(ActivationLayerSpec{l.activation});
                    }
                },
                layer);
        }
        return out;
    }

    const std::vector<Layer>& layers() const noexcept { return layers_; }
    std::vector<Layer>& layers() noexcept { return layers_; }

    Mode mode() const noexcept { return mode_; }
    void set_mode(Mode m) noexcept { mode_ = m; }

    /// Trainable tensors: W and b of each Dense, gamma and shift of each
    /// BatchNorm, in layer order.
    std::vector<ParamRef> parameters() {
        std::vector<ParamRef> out;
        for (std::size_t i = 0; i < layers_.size(); ++i) {
            const std::string prefix = "layer" + std::to_string(i);
            if (auto* d = std::get_if<DenseLayer>(&layers_[i])) {
                out.push_back({prefix + ".weights", &d->weights});
                const bool before_bn =
                    i + 1 < layers_.size() && std::holds_alternative<BatchNormLayer>(layers_[i + 1]);
                out.push_back({prefix + ".bias", &d->bias, before_bn});
            } else if (auto* b = std::get_if<BatchNormLayer>(&layers_[i])) {
                out.push_back({prefix + ".gamma", &b->gamma});
                out.push_back({prefix + ".shift", &b->shift});
            }
        }
        return out;
    }

    std::size_t parameter_count() {
        std::size_t n = 0;
        for (const auto& p : parameters()) n += p.value->size();
        return n;
    }

    std::uint64_t forward_count() const noexcept { return forward_count_; }

private:
    friend ForwardPass network_forward(Network&, const Matrix&, Rng&);

    std::vector<Layer> layers_;
    Mode mode_ = Mode::Train;
    std::uint64_t forward_count_ = 0;
};

/// Applies the layers in order. In Train mode the per-layer caches needed by
/// network_backward are kept, batch-norm running statistics advance, and
/// dropout draws masks from `rng`.
inline ForwardPass network_forward(Network& net, const Matrix& x, Rng& rng) {
    const Mode mode = net.mode_;
    ForwardPass pass;
    pass.output = x;
    if (mode == Mode::Train) {
        pass.caches.reserve(net.layers_.size());
        pass.tag = ++net.forward_count_;
    }
    for (auto& layer : net.layers_) {
        std::visit(
            [&](auto& l) {
                using T = std::decay_t<decltype(l)>;
                if constexpr (std::is_same_v<T, DenseLayer>) {
                    Matrix out = dense_forward(l.weights, l.bias, pass.output);
                    if (mode == Mode::Train) pass.caches.emplace_back(DenseCache{std::move(pass.output)});
                    pass.output = std::move(out);
                } else if constexpr (std::is_same_v<T, BatchNormLayer>) {
                    BatchNormCache cache;
                    pass.output = batchnorm_forward(l, pass.output, mode, &cache);
                    if (mode == Mode::Train) pass.caches.emplace_back(std::move(cache));
                } else if constexpr (std::is_same_v<T, DropoutLayer>) {
                    auto r = dropout_forward(l.rate, pass.output, rng, mode);
                    pass.output = std::move(r.output);
                    if (mode == Mode::Train) {
                        pass.caches.emplace_back(DropoutCache{std::move(r.mask), 1.0 / (1.0 - l.rate)});
                    }
                } else {
                    Matrix out = activation_forward(l.activation, pass.output);
                    if (mode == Mode::Train) pass.caches.emplace_back(ActivationCache{std::move(pass.output)});
                    pass.output = std::move(out);
                }
            },
            layer);
    }
    return pass;
}

/// Inference on a const network: running statistics, no dropout. Safe to
/// call concurrently on a shared network.
inline Matrix network_infer(const Network& net, const Matrix& x) {
    Matrix out = x;
    for (const auto& layer : net.layers()) {
        std::visit(
            [&](const auto& l) {
                using T = std::decay_t<decltype(l)>;
                if constexpr (std::is_same_v<T, DenseLayer>) {
                    out = dense_forward(l.weights, l.bias, out);
                } else if constexpr (std::is_same_v<T, BatchNormLayer>) {
                    BatchNormLayer copy = l;
                    out = batchnorm_forward(copy, out, Mode::Infer);
                } else if constexpr (std::is_same_v<T, ActivationLayer>) {
                    out = activation_forward(l.activation, out);
                }
            },
            layer);
    }
    return out;
}

/// Reverse-mode pass over the caches of the most recent Train forward.
inline Gradients network_backward(Network& net, const ForwardPass& pass, const Matrix& d_output) {
    const auto& layers = net.layers();
    if (pass.caches.size() != layers.size()) {
        throw UsageError("network_backward: " + std::to_string(pass.caches.size()) + " caches for " +
                         std::to_string(layers.size()) + " layers (was the forward run in Train mode?)");
    }
    if (pass.tag != net.forward_count()) {
        throw UsageError("network_backward: caches are stale; a newer forward pass has run");
    }
    require_same_shape(pass.output, d_output, "network_backward");

    // Gradients are collected back to front, then reversed per tensor pair.
    std::vector<std::pair<Matrix, Matrix>> per_layer;
    Matrix g = d_output;
    for (std::size_t idx = layers.size(); idx-- > 0;) {
        const auto& layer = layers[idx];
        const auto& cache = pass.caches[idx];
        if (const auto* d = std::get_if<DenseLayer>(&layer)) {
            const auto& c = std::get<DenseCache>(cache);
            auto grads = dense_backward(d->weights, c.input, g, idx > 0);
            per_layer.emplace_back(std::move(grads.d_weights), std::move(grads.d_bias));
            g = std::move(grads.d_input);
        } else if (const auto* b = std::get_if<BatchNormLayer>(&layer)) {
            auto grads = batchnorm_backward(*b, std::get<BatchNormCache>(cache), g);
            per_layer.emplace_back(std::move(grads.d_gamma), std::move(grads.d_shift));
            g = std::move(grads.d_input);
        } else if (std::holds_alternative<DropoutLayer>(layer)) {
            const auto& c = std::get<DropoutCache>(cache);
            g = hadamard(g, c.mask);
            for (double& v : g.values()) v *= c.scale;
        } else {
            const auto& a = std::get<ActivationLayer>(layer);
            const auto& c = std::get<ActivationCache>(cache);
            auto gv = g.values();
            auto in = c.input.values();
            for (std::size_t i = 0; i < gv.size(); ++i) gv[i] *= derivative_scalar(a.activation, in[i]);
        }
    }
    Gradients out;
    out.reserve(per_layer.size() * 2);
    for (auto it = per_layer.rbegin(); it != per_layer.rend(); ++it) {
        out.push_back(std::move(it->first));
        out.push_back(std::move(it->second));
    }
    return out;
}

struct Batch {
    Matrix inputs;
    Labels labels;
};

struct GradCheckResult {
    double max_relative_error = 0.0;
    std::size_t checked = 0;
    std::size_t skipped_invariant = 0;  // entries of batch-invariant tensors
    std::string worst_parameter;
    double worst_analytic = 0.0;
    double worst_numeric = 0.0;
};

/// Compares analytic gradients of the mean softmax cross-entropy loss with
/// central differences of step `h` on a sample of at least `samples`
/// parameter entries (all of them when there are fewer). Dropout masks are
/// frozen by reseeding the forward Rng with `seed` before every evaluation.
/// Relative error is |a - n| / max(|a|, |n|, denominator_floor).
/// Batch-invariant tensors are not sampled: their true gradient is exactly
/// zero and the central difference only measures loss roundoff (~1e-11).
inline GradCheckResult grad_check(const Network& network, const Batch& batch, double h,
                                  std::uint64_t seed, std::size_t samples = 200,
                                  double denominator_floor = 1e-8) {
    Network net = network;  // running statistics must not leak back
    net.set_mode(Mode::Train);

    auto loss_at = [&]() {
        Rng rng(seed);
        auto pass = network_forward(net, batch.inputs, rng);
        return softmax_cross_entropy(pass.output, batch.labels).loss;
    };
    if (loss_at() != loss_at()) {
        throw UsageError("grad_check: loss is not deterministic in the parameters");
    }

    Rng rng(seed);
    auto pass = network_forward(net, batch.inputs, rng);
    auto loss = softmax_cross_entropy(pass.output, batch.labels);
    const Gradients grads = network_backward(net, pass, loss.d_logits);

    auto params = net.parameters();
    std::vector<std::pair<std::size_t, std::size_t>> slots;  // (tensor, entry)
    GradCheckResult result;
    for (std::size_t t = 0; t < params.size(); ++t) {
        if (params[t].batch_invariant) {
            result.skipped_invariant += params[t].value->size();
            continue;
        }
        for (std::size_t e = 0; e < params[t].value->size(); ++e) slots.emplace_back(t, e);
    }
    if (slots.size() > samples) {
        Rng pick(seed ^ 0x9e3779b97f4a7c15ULL);
        pick.shuffle(slots);
        slots.resize(samples);
    }

    for (auto [t, e] : slots) {
        double& p = params[t].value->values()[e];
        const double saved = p;
        p = saved + h;
        const double up = loss_at();
        p = saved - h;
        const double down = loss_at();
        p = saved;
        const double numeric = (up - down) / (2.0 * h);
        const double analytic = grads[t].values()[e];
        const double denom = std::max({std::abs(analytic), std::abs(numeric), denominator_floor});
        const double rel = std::abs(analytic - numeric) / denom;
        ++result.checked;
        if (rel > result.max_relative_error || result.worst_parameter.empty()) {
            result.max_relative_error = std::max(rel, result.max_relative_error);
            result.worst_parameter = params[t].name + "[" + std::to_string(e) + "]";
            result.worst_analytic = analytic;
            result.worst_numeric = numeric;
        }
    }
    return result;
}

/// Row-wise argmax.
inline Labels predict(const Matrix& scores) {
    Labels out(scores.rows());
    for (std::size_t i = 0; i < scores.rows(); ++i) {
        auto r = scores.row(i);
        out[i] = static_cast<std::size_t>(std::max_element(r.begin(), r.end()) - r.begin());
    }
    return out;
}

}  // namespace eswish

#endif  // ESWISH_NETWORK_HPP
