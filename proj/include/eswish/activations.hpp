// Copyright 2026 The eswish Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef ESWISH_ACTIVATIONS_HPP
#define ESWISH_ACTIVATIONS_HPP

#include <charconv>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "eswish/error.hpp"
#include "eswish/numerics.hpp"

namespace eswish {

// Scalar kernels. These do not validate their arguments; the checked entry
// points below do.
namespace kernel {

inline double sigmoid(double x) noexcept {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

inline double eswish(double beta, double x) noexcept { return beta * x * sigmoid(x); }

inline double eswish_grad(double beta, double x) noexcept {
    const double s = sigmoid(x);
    const double f = beta * x * s;
    return f + s * (beta - f);
}

inline double softplus(double x) noexcept {
    return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

inline double elu(double alpha, double x) noexcept {
    return x > 0.0 ? x : alpha * std::expm1(x);
}

inline double elu_grad(double alpha, double x) noexcept {
    return x > 0.0 ? 1.0 : alpha * std::exp(x);
}

}  // namespace kernel

/// Logistic function, stable for any finite input: the exp(-x) branch is
/// used for x >= 0 and exp(x) / (1 + exp(x)) for x < 0.
inline double sigmoid_stable(double x) {
    if (std::isnan(x)) throw DomainError("sigmoid: NaN input");
    return kernel::sigmoid(x);
}

inline void validate_beta(double beta) {
    if (!std::isfinite(beta) || beta <= 0.0) {
        throw DomainError("E-swish beta must be finite and > 0, got " + std::to_string(beta));
    }
}

/// E-swish: beta * x * sigmoid(x).
inline double eswish(double beta, double x) {
    validate_beta(beta);
    if (std::isnan(x)) throw DomainError("eswish: NaN input");
    return kernel::eswish(beta, x);
}

/// d/dx of eswish, written as f(x) + sigmoid(x) * (beta - f(x)).
inline double eswish_grad(double beta, double x) {
    validate_beta(beta);
    if (std::isnan(x)) throw DomainError("eswish_grad: NaN input");
    return kernel::eswish_grad(beta, x);
}

/// Swish is E-swish at beta = 1 and shares its code path.
inline double swish(double x) { return eswish(1.0, x); }
inline double swish_grad(double x) { return eswish_grad(1.0, x); }

struct EswishMinimum {
    double x_min;
    double f_min;
};

/// Global minimum of eswish(beta, .). The stationary point solves
/// 1 + x * (1 - sigmoid(x)) = 0 on x < 0, which does not depend on beta;
/// it is bracketed in [-10, 0] and bisected to a width of 1e-12.
inline EswishMinimum eswish_min(double beta) {
    validate_beta(beta);
    auto h = [](double x) { return 1.0 + x * (1.0 - kernel::sigmoid(x)); };
    double lo = -10.0;  // h(lo) < 0
    double hi = 0.0;    // h(hi) > 0
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        if (h(mid) < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const double x = 0.5 * (lo + hi);
    return {x, kernel::eswish(beta, x)};
}

enum class ActivationKind { EswishBeta, Swish, Relu, Elu, Softplus, Sigmoid, Tanh, Linear };

/// Which activation to apply, with its fixed (non-learnable) coefficients.
/// `beta` is read only for EswishBeta and `elu_alpha` only for Elu.
struct ActivationSpec {
    ActivationKind kind = ActivationKind::Relu;
    double beta = 1.0;
    double elu_alpha = 1.0;

    static ActivationSpec eswish(double beta) { return {ActivationKind::EswishBeta, beta, 1.0}; }
    static ActivationSpec of(ActivationKind kind) { return {kind, 1.0, 1.0}; }

    friend bool operator==(const ActivationSpec&, const ActivationSpec&) = default;
};

inline void validate(const ActivationSpec& spec) {
    switch (spec.kind) {
        case ActivationKind::EswishBeta:
            validate_beta(spec.beta);
            return;
        case ActivationKind::Elu:
            if (!std::isfinite(spec.elu_alpha)) throw ConfigError("ELU alpha must be finite");
            return;
        case ActivationKind::Swish:
        case ActivationKind::Relu:
        case ActivationKind::Softplus:
        case ActivationKind::Sigmoid:
        case ActivationKind::Tanh:
        case ActivationKind::Linear:
            return;
    }
    throw ConfigError("unknown activation kind " + std::to_string(static_cast<int>(spec.kind)));
}

/// Advisory message when an E-swish beta falls outside [1, 2]. Such values
/// are allowed.
inline std::optional<std::string> beta_warning(const ActivationSpec& spec) {
    if (spec.kind != ActivationKind::EswishBeta) return std::nullopt;
    if (spec.beta >= 1.0 && spec.beta <= 2.0) return std::nullopt;
    return "E-swish beta " + std::to_string(spec.beta) +
           " is outside the recommended range [1, 2]";
}

namespace detail {

inline std::string shortest_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s, std::string_view context) {
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw ConfigError("cannot parse number '" + std::string(s) + "' in '" +
                          std::string(context) + "'");
    }
    return v;
}

}  // namespace detail

/// Canonical text form: relu, swish, eswish:<beta>, elu[:<alpha>], softplus,
/// sigmoid, tanh, linear.
inline std::string to_string(const ActivationSpec& spec) {
    switch (spec.kind) {
        case ActivationKind::EswishBeta:
            return "eswish:" + detail::shortest_double(spec.beta);
        case ActivationKind::Swish:
            return "swish";
        case ActivationKind::Relu:
            return "relu";
        case ActivationKind::Elu:
            return spec.elu_alpha == 1.0 ? "elu" : "elu:" + detail::shortest_double(spec.elu_alpha);
        case ActivationKind::Softplus:
            return "softplus";
        case ActivationKind::Sigmoid:
            return "sigmoid";
        case ActivationKind::Tanh:
            return "tanh";
        case ActivationKind::Linear:
            return "linear";
    }
    throw ConfigError("unknown activation kind");
}

inline ActivationSpec parse_activation(std::string_view text) {
    const auto colon = text.find(':');
    const std::string_view name = text.substr(0, colon);
    const std::optional<std::string_view> arg =
        colon == std::string_view::npos ? std::nullopt : std::optional(text.substr(colon + 1));

    auto no_arg = [&](ActivationKind kind) {
        if (arg) throw ConfigError("activation '" + std::string(name) + "' takes no parameter");
        return ActivationSpec::of(kind);
    };

    if (name == "eswish") {
        if (!arg) throw ConfigError("eswish requires a beta, e.g. eswish:1.5");
        ActivationSpec spec = ActivationSpec::eswish(detail::parse_double(*arg, text));
        validate(spec);
        return spec;
    }
    if (name == "elu") {
        ActivationSpec spec = ActivationSpec::of(ActivationKind::Elu);
        if (arg) spec.elu_alpha = detail::parse_double(*arg, text);
        validate(spec);
        return spec;
    }
    if (name == "swish") return no_arg(ActivationKind::Swish);
    if (name == "relu") return no_arg(ActivationKind::Relu);
    if (name == "softplus") return no_arg(ActivationKind::Softplus);
    if (name == "sigmoid") return no_arg(ActivationKind::Sigmoid);
    if (name == "tanh") return no_arg(ActivationKind::Tanh);
    if (name == "linear") return no_arg(ActivationKind::Linear);
    throw ConfigError("unknown activation '" + std::string(text) + "'");
}

/// Comma-separated list of canonical forms.
inline std::vector<ActivationSpec> parse_activation_list(std::string_view text) {
    std::vector<ActivationSpec> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto item = text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
        if (item.empty()) throw ConfigError("empty entry in activation list '" + std::string(text) + "'");
        out.push_back(parse_activation(item));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

/// Scalar forward map of `spec` (no validation).
inline double apply_scalar(const ActivationSpec& spec, double x) noexcept {
    switch (spec.kind) {
        case ActivationKind::EswishBeta: return kernel::eswish(spec.beta, x);
        case ActivationKind::Swish: return kernel::eswish(1.0, x);
        case ActivationKind::Relu: return x > 0.0 ? x : 0.0;
        case ActivationKind::Elu: return kernel::elu(spec.elu_alpha, x);
        case ActivationKind::Softplus: return kernel::softplus(x);
        case ActivationKind::Sigmoid: return kernel::sigmoid(x);
        case ActivationKind::Tanh: return std::tanh(x);
        case ActivationKind::Linear: return x;
    }
    return x;
}

/// Scalar derivative of `spec` w.r.t. its input. ReLU uses 0 at x = 0.
inline double derivative_scalar(const ActivationSpec& spec, double x) noexcept {
    switch (spec.kind) {
        case ActivationKind::EswishBeta: return kernel::eswish_grad(spec.beta, x);
        case ActivationKind::Swish: return kernel::eswish_grad(1.0, x);
        case ActivationKind::Relu: return x > 0.0 ? 1.0 : 0.0;
        case ActivationKind::Elu: return kernel::elu_grad(spec.elu_alpha, x);
        case ActivationKind::Softplus: return kernel::sigmoid(x);
        case ActivationKind::Sigmoid: {
            const double s = kernel::sigmoid(x);
            return s * (1.0 - s);
        }
        case ActivationKind::Tanh: {
            const double t = std::tanh(x);
            return 1.0 - t * t;
        }
        case ActivationKind::Linear: return 1.0;
    }
    return 0.0;
}

/// Points where a central difference cannot approximate the derivative to
/// second order (the derivative or its derivative jumps).
inline std::vector<double> kinks(const ActivationSpec& spec) {
    switch (spec.kind) {
        case ActivationKind::Relu:
        case ActivationKind::Elu:
            return {0.0};
        default:
            return {};
    }
}

inline Matrix activation_forward(const ActivationSpec& spec, const Matrix& z) {
    validate(spec);
    Matrix out = z;
    for (double& v : out.values()) v = apply_scalar(spec, v);
    return out;
}

inline Matrix activation_grad(const ActivationSpec& spec, const Matrix& z) {
    validate(spec);
    Matrix out = z;
    for (double& v : out.values()) v = derivative_scalar(spec, v);
    return out;
}

}  // namespace eswish

#endif  // ESWISH_ACTIVATIONS_HPP
