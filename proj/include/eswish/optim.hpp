// Copyright 2026 The eswish Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef ESWISH_OPTIM_HPP
#define ESWISH_OPTIM_HPP

#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "eswish/error.hpp"
#include "eswish/network.hpp"
#include "eswish/numerics.hpp"

namespace eswish {

/// Shared definition of "the validation metric improved": strictly greater,
/// no minimum delta. Ties do not count.
inline bool improves(double metric, double best) noexcept { return metric > best; }

/// Plain SGD with classical (heavy-ball) momentum. Velocity buffers are
/// created lazily to mirror the parameter shapes on the first step.
struct SgdState {
    double lr = 0.01;
    double momentum = 0.0;
    std::vector<Matrix> velocity;
};

/// v <- momentum * v - lr * g;  p <- p + v.
inline void sgd_step(std::span<const ParamRef> params, const Gradients& grads, SgdState& state) {
    if (params.size() != grads.size()) {
        throw ShapeError("sgd_step: " + std::to_string(params.size()) + " parameters but " +
                         std::to_string(grads.size()) + " gradients");
    }
    if (state.velocity.empty()) {
        for (const auto& p : params) state.velocity.emplace_back(p.value->rows(), p.value->cols());
    }
    if (state.velocity.size() != params.size()) {
        throw ShapeError("sgd_step: optimizer state tracks " + std::to_string(state.velocity.size()) +
                         " tensors, got " + std::to_string(params.size()));
    }
    for (std::size_t t = 0; t < params.size(); ++t) {
        require_same_shape(*params[t].value, grads[t], "sgd_step");
        require_same_shape(*params[t].value, state.velocity[t], "sgd_step");
        if (!all_finite(grads[t])) {
            throw TrainingError("sgd_step: non-finite gradient in " + params[t].name);
        }
    }
    for (std::size_t t = 0; t < params.size(); ++t) {
        auto p = params[t].value->values();
        auto v = state.velocity[t].values();
        auto g = grads[t].values();
        for (std::size_t i = 0; i < p.size(); ++i) {
            v[i] = state.momentum * v[i] - state.lr * g[i];
            p[i] += v[i];
        }
    }
}

/// Multiplies the learning rate by `factor` once `patience` consecutive
/// epochs fail to improve the validation metric.
struct PlateauSchedule {
    double factor = 0.35;
    int patience = 2;
    double best_metric = -std::numeric_limits<double>::infinity();
    int epochs_since_improve = 0;
};

inline double plateau_update(PlateauSchedule& sched, double val_metric, double lr) {
    if (!std::isfinite(val_metric)) throw DomainError("plateau_update: non-finite metric");
    if (improves(val_metric, sched.best_metric)) {
        sched.best_metric = val_metric;
        sched.epochs_since_improve = 0;
        return lr;
    }
    if (++sched.epochs_since_improve >= sched.patience) {
        sched.epochs_since_improve = 0;
        return lr * sched.factor;
    }
    return lr;
}

inline void validate_milestones(std::span<const int> milestones) {
    for (std::size_t i = 1; i < milestones.size(); ++i) {
        if (milestones[i] <= milestones[i - 1]) {
            throw ConfigError("milestones must be strictly increasing, got " +
                              std::to_string(milestones[i - 1]) + " then " + std::to_string(milestones[i]));
        }
    }
}

/// base_lr * factor^(number of milestones <= epoch).
inline double step_schedule(int epoch, std::span<const int> milestones, double factor, double base_lr) {
    validate_milestones(milestones);
    double lr = base_lr;
    for (int m : milestones) {
        if (m <= epoch) lr *= factor;
    }
    return lr;
}

struct EarlyStop {
    int patience = 5;
    double best_metric = -std::numeric_limits<double>::infinity();
    int epochs_since_improve = 0;
};

/// True once `patience` consecutive epochs have failed to beat the best.
inline bool early_stop_check(EarlyStop& es, double val_metric) {
    if (!std::isfinite(val_metric)) throw DomainError("early_stop_check: non-finite metric");
    if (improves(val_metric, es.best_metric)) {
        es.best_metric = val_metric;
        es.epochs_since_improve = 0;
        return false;
    }
    return ++es.epochs_since_improve >= es.patience;
}

}  // namespace eswish

#endif  // ESWISH_OPTIM_HPP
