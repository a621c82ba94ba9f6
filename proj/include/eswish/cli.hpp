// Copyright 2026 The eswish Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef ESWISH_CLI_HPP
#define ESWISH_CLI_HPP

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "eswish/activations.hpp"
#include "eswish/data.hpp"
#include "eswish/error.hpp"
#include "eswish/experiments.hpp"
#include "eswish/network.hpp"
#include "eswish/network_io.hpp"

namespace eswish::cli {

enum ExitCode : int { kOk = 0, kFailed = 1, kUsage = 2, kIo = 3 };

/// Every option of every subcommand. Optionals hold explicit overrides of
/// the preset defaults; resolve() materializes them.
struct CliConfig {
    std::string subcommand;
    std::string out = "out";
    std::size_t jobs = 0;  // 0 = available cores

    // shared
    std::string act;
    std::optional<std::uint64_t> seed;
    std::string seeds;
    std::string preset = "desk";
    std::string data_dir;
    bool synthetic = false;
    std::optional<double> data_fraction;
    std::string save_weights;
    std::string load_weights;

    // grad-check
    std::string beta;
    double tol = 1e-6;
    double net_tol = 1e-5;
    double h = 1e-5;

    // landscape
    std::size_t resolution = 256;
    double lo = -2.0;
    double hi = 2.0;
    std::size_t layers = 6;
    std::optional<std::size_t> width;
    double init_scale = 1.0;

    // training
    std::string depths;
    std::optional<int> epochs;
    std::optional<std::size_t> batch;
    std::optional<double> lr;
    std::optional<double> momentum;
    std::optional<double> plateau_factor;
    std::optional<int> plateau_patience;
    std::optional<int> early_stop_patience;
    std::string milestones;
    std::optional<double> milestone_factor;
    std::optional<double> dropout;

    // curves
    double step = 0.01;
    double curve_lo = -6.0;
    double curve_hi = 6.0;
};

namespace detail {

inline std::string num(double v) { return eswish::detail::shortest_double(v); }

template <typename T>
std::vector<T> parse_list(const std::string& text, const char* what) {
    std::vector<T> out;
    if (text.empty()) return out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) throw ConfigError(std::string("empty entry in ") + what + " list");
        if constexpr (std::is_floating_point_v<T>) {
            out.push_back(eswish::detail::parse_double(item, text));
        } else {
            T v{};
            auto res = std::from_chars(item.data(), item.data() + item.size(), v);
            if (res.ec != std::errc() || res.ptr != item.data() + item.size()) {
                throw ConfigError(std::string("cannot parse '") + item + "' in " + what + " list");
            }
            out.push_back(v);
        }
    }
    return out;
}

template <typename T>
std::string join(const std::vector<T>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        if constexpr (std::is_floating_point_v<T>) {
            s += num(v[i]);
        } else {
            s += std::to_string(v[i]);
        }
    }
    return s;
}

inline std::string join_acts(const std::vector<ActivationSpec>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + to_string(v[i]);
    return s;
}

}  // namespace detail

/// Builds the parser. Options bind directly into `cfg`.
inline void configure(CLI::App& app, CliConfig& cfg) {
    app.require_subcommand(1);
    app.allow_extras(false);

    auto common = [&](CLI::App* sub) {
        sub->add_option("--out", cfg.out, "Output directory");
        sub->add_option("--jobs", cfg.jobs, "Worker threads (0 = all cores)");
    };
    auto training = [&](CLI::App* sub) {
        common(sub);
        sub->add_option("--preset", cfg.preset, "paper or desk")->check(CLI::IsMember({"paper", "desk"}));
        sub->add_option("--act", cfg.act, "Comma-separated activations, e.g. relu,swish,eswish:1.5");
        sub->add_option("--seeds", cfg.seeds, "Comma-separated seeds");
        sub->add_option("--data-dir", cfg.data_dir, "Directory with the MNIST IDX files");
        sub->add_flag("--synthetic", cfg.synthetic, "Use the built-in synthetic dataset");
        sub->add_option("--data-fraction", cfg.data_fraction, "Share of MNIST to use");
        sub->add_option("--epochs", cfg.epochs);
        sub->add_option("--batch", cfg.batch);
        sub->add_option("--lr", cfg.lr);
        sub->add_option("--momentum", cfg.momentum);
        sub->add_option("--plateau-factor", cfg.plateau_factor);
        sub->add_option("--plateau-patience", cfg.plateau_patience, "0 disables the plateau schedule");
        sub->add_option("--early-stop-patience", cfg.early_stop_patience, "0 disables early stopping");
        sub->add_option("--milestones", cfg.milestones, "Comma-separated 0-based epochs for step decay");
        sub->add_option("--milestone-factor", cfg.milestone_factor);
        sub->add_option("--save-weights", cfg.save_weights, "Directory for trained weight files");
        sub->add_option("--load-weights", cfg.load_weights, "Evaluate this weight file on the test set instead of training");
    };

    auto* gc = app.add_subcommand("grad-check", "Check analytic derivatives against central differences");
    common(gc);
    gc->add_option("--act", cfg.act, "Activations to check (default: all)");
    gc->add_option("--beta", cfg.beta, "E-swish betas to check");
    gc->add_option("--tol", cfg.tol, "Max relative error for scalar derivatives");
    gc->add_option("--net-tol", cfg.net_tol, "Max relative error for the network check");
    gc->add_option("--step", cfg.h, "Finite-difference step");
    gc->add_option("--seed", cfg.seed);

    auto* ls = app.add_subcommand("landscape", "Output landscape of a random network");
    common(ls);
    ls->add_option("--act", cfg.act);
    ls->add_option("--seed", cfg.seed);
    ls->add_option("--resolution", cfg.resolution);
    ls->add_option("--lo", cfg.lo);
    ls->add_option("--hi", cfg.hi);
    ls->add_option("--layers", cfg.layers);
    ls->add_option("--width", cfg.width);
    ls->add_option("--init-scale", cfg.init_scale);

    auto* td = app.add_subcommand("train-depth", "Deep MLP trainability sweep");
    training(td);
    td->add_option("--depths", cfg.depths, "Comma-separated depths");
    td->add_option("--width", cfg.width);

    auto* tm = app.add_subcommand("train-mnist", "Five-layer MNIST MLP");
    training(tm);
    tm->add_option("--dropout", cfg.dropout);

    auto* cv = app.add_subcommand("curves", "Tabulate E-swish and its derivative");
    common(cv);
    cv->add_option("--beta", cfg.beta, "Comma-separated betas");
    cv->add_option("--lo", cfg.curve_lo);
    cv->add_option("--hi", cfg.curve_hi);
    cv->add_option("--step", cfg.step);

    for (auto* sub : {gc, ls, td, tm, cv}) {
        sub->allow_extras(false);
        sub->callback([&cfg, sub] { cfg.subcommand = sub->get_name(); });
    }
}

/// Parses argv-style arguments (without the program name).
inline CliConfig parse(std::vector<std::string> args) {
    CLI::App app{"E-swish activation experiments"};
    CliConfig cfg;
    configure(app, cfg);
    std::reverse(args.begin(), args.end());
    app.parse(args);
    return cfg;
}

// ---------------------------------------------------------------------------
// Resolution of presets and overrides

inline TrainConfig apply_overrides(TrainConfig t, const CliConfig& c) {
    if (c.epochs) t.epochs = *c.epochs;
    if (c.batch) t.batch_size = *c.batch;
    if (c.lr) t.lr = *c.lr;
    if (c.momentum) t.momentum = *c.momentum;
    if (c.plateau_patience) {
        if (*c.plateau_patience <= 0) {
            t.plateau.reset();
        } else {
            t.plateau = PlateauSchedule{t.plateau ? t.plateau->factor : 0.35, *c.plateau_patience};
        }
    }
    if (c.plateau_factor && t.plateau) t.plateau->factor = *c.plateau_factor;
    if (c.early_stop_patience) {
        if (*c.early_stop_patience <= 0) {
            t.early_stop_patience.reset();
        } else {
            t.early_stop_patience = *c.early_stop_patience;
        }
    }
    if (!c.milestones.empty()) t.milestones = detail::parse_list<int>(c.milestones, "milestone");
    if (c.milestone_factor) t.milestone_factor = *c.milestone_factor;
    if (t.epochs <= 0) throw ConfigError("--epochs must be positive");
    if (t.batch_size < 2) throw ConfigError("--batch must be at least 2");
    if (!(t.lr > 0.0)) throw ConfigError("--lr must be positive");
    if (!(t.momentum >= 0.0 && t.momentum < 1.0)) throw ConfigError("--momentum must be in [0, 1)");
    if (t.plateau && !(t.plateau->factor > 0.0 && t.plateau->factor < 1.0)) {
        throw ConfigError("--plateau-factor must be in (0, 1)");
    }
    validate_milestones(t.milestones);
    return t;
}

inline std::vector<std::uint64_t> resolve_seeds(const CliConfig& c) {
    auto seeds = c.seeds.empty() ? std::vector<std::uint64_t>{1, 2, 3} : detail::parse_list<std::uint64_t>(c.seeds, "seed");
    if (seeds.empty()) throw ConfigError("at least one seed is required");
    return seeds;
}

inline DepthExperimentConfig resolve_depth(const CliConfig& c) {
    DepthExperimentConfig d = c.preset == "paper" ? depth_paper_preset() : depth_desk_preset();
    if (!c.depths.empty()) d.depths = detail::parse_list<int>(c.depths, "depth");
    for (int v : d.depths) {
        if (v < 1) throw ConfigError("--depths entries must be >= 1");
    }
    if (c.width) d.width = *c.width;
    if (d.width == 0) throw ConfigError("--width must be positive");
    if (!c.act.empty()) d.activations = parse_activation_list(c.act);
    d.seeds = resolve_seeds(c);
    d.train = apply_overrides(d.train, c);
    if (c.data_fraction) d.data_fraction = *c.data_fraction;
    if (!(d.data_fraction > 0.0 && d.data_fraction <= 1.0)) throw ConfigError("--data-fraction must be in (0, 1]");
    return d;
}

inline MnistMlpConfig resolve_mnist(const CliConfig& c) {
    MnistMlpConfig m = c.preset == "paper" ? mnist_paper_preset() : mnist_desk_preset();
    if (!c.act.empty()) m.activations = parse_activation_list(c.act);
    m.seeds = resolve_seeds(c);
    m.train = apply_overrides(m.train, c);
    if (c.dropout) m.dropout = *c.dropout;
    if (!(m.dropout >= 0.0 && m.dropout < 1.0)) throw ConfigError("--dropout must be in [0, 1)");
    if (c.data_fraction) m.data_fraction = *c.data_fraction;
    if (!(m.data_fraction > 0.0 && m.data_fraction <= 1.0)) throw ConfigError("--data-fraction must be in (0, 1]");
    return m;
}

inline std::string train_flags(const TrainConfig& t) {
    std::string s = " --epochs " + std::to_string(t.epochs) + " --batch " + std::to_string(t.batch_size) + " --lr " +
                    detail::num(t.lr) + " --momentum " + detail::num(t.momentum);
    if (t.plateau) {
        s += " --plateau-factor " + detail::num(t.plateau->factor) + " --plateau-patience " +
             std::to_string(t.plateau->patience);
    } else {
        s += " --plateau-patience 0";
    }
    s += " --early-stop-patience " + std::to_string(t.early_stop_patience.value_or(0));
    if (!t.milestones.empty()) s += " --milestones " + detail::join(t.milestones);
    s += " --milestone-factor " + detail::num(t.milestone_factor);
    return s;
}

inline std::string data_flags(const CliConfig& c, double fraction) {
    std::string s = " --data-fraction " + detail::num(fraction);
    if (c.synthetic) {
        s += " --synthetic";
    } else if (auto dir = resolve_data_dir(c.data_dir)) {
        s += " --data-dir " + *dir;
    }
    return s;
}

inline std::string common_flags(const CliConfig& c) {
    return " --out " + c.out + " --jobs " + std::to_string(c.jobs);
}

/// The fully resolved configuration as a command line that parses back to
/// the same run.
inline std::string resolved_command(const CliConfig& c) {
    std::string s = "eswish " + c.subcommand;
    if (c.subcommand == "grad-check") {
        if (!c.act.empty() || c.beta.empty()) s += " --act " + (c.act.empty() ? std::string("all") : c.act);
        if (!c.beta.empty()) s += " --beta " + c.beta;
        s += " --tol " + detail::num(c.tol) + " --net-tol " + detail::num(c.net_tol) + " --step " + detail::num(c.h) +
             " --seed " + std::to_string(c.seed.value_or(7));
    } else if (c.subcommand == "landscape") {
        s += " --act " + (c.act.empty() ? std::string("relu,swish,eswish:1.5,eswish:2,elu") : c.act) + " --seed " +
             std::to_string(c.seed.value_or(0)) + " --resolution " + std::to_string(c.resolution) + " --lo " +
             detail::num(c.lo) + " --hi " + detail::num(c.hi) + " --layers " + std::to_string(c.layers) + " --width " +
             std::to_string(c.width.value_or(128)) + " --init-scale " + detail::num(c.init_scale);
    } else if (c.subcommand == "train-depth") {
        const auto d = resolve_depth(c);
        s += " --preset " + c.preset + " --depths " + detail::join(d.depths) + " --width " + std::to_string(d.width) +
             " --act " + detail::join_acts(d.activations) + " --seeds " + detail::join(d.seeds) + train_flags(d.train) +
             data_flags(c, d.data_fraction);
    } else if (c.subcommand == "train-mnist") {
        const auto m = resolve_mnist(c);
        s += " --preset " + c.preset + " --act " + detail::join_acts(m.activations) + " --seeds " +
             detail::join(m.seeds) + " --dropout " + detail::num(m.dropout) + train_flags(m.train) +
             data_flags(c, m.data_fraction);
    } else if (c.subcommand == "curves") {
        s += " --beta " + (c.beta.empty() ? std::string("1,1.25,1.5,1.75,2") : c.beta) + " --lo " +
             detail::num(c.curve_lo) + " --hi " + detail::num(c.curve_hi) + " --step " + detail::num(c.step);
    }
    if (c.subcommand == "train-depth" || c.subcommand == "train-mnist") {
        if (!c.save_weights.empty()) s += " --save-weights " + c.save_weights;
        if (!c.load_weights.empty()) s += " --load-weights " + c.load_weights;
    }
    return s + common_flags(c);
}

// ---------------------------------------------------------------------------
// Subcommands

struct ScalarCheck {
    double max_rel = 0.0;  // over points with |f'| >= 1e-3
    double max_abs = 0.0;  // over points with |f'| < 1e-3
    double worst_x = 0.0;
    bool passed = true;
    std::vector<double> skipped;
};

/// Central differences of step h on x = -10, -9.95, ..., 10. Points within
/// 2h of a kink are skipped. Relative error is used where |f'| >= 1e-3 and
/// absolute error (against tol / 100) below that.
inline ScalarCheck check_scalar_derivative(const ActivationSpec& spec, double h, double tol) {
    ScalarCheck r;
    const auto ks = kinks(spec);
    for (int k = -200; k <= 200; ++k) {
        const double x = k * 0.05;
        bool near_kink = false;
        for (double kink : ks) near_kink |= std::abs(x - kink) < 2.0 * h;
        if (near_kink) {
            r.skipped.push_back(x);
            continue;
        }
        const double analytic = derivative_scalar(spec, x);
        const double numeric = (apply_scalar(spec, x + h) - apply_scalar(spec, x - h)) / (2.0 * h);
        const double err = std::abs(analytic - numeric);
        if (std::abs(analytic) >= 1e-3) {
            const double rel = err / std::abs(analytic);
            if (rel > r.max_rel) {
                r.max_rel = rel;
                if (rel >= tol) r.worst_x = x;
            }
            if (rel >= tol) r.passed = false;
        } else {
            if (err > r.max_abs) {
                r.max_abs = err;
                if (err >= tol * 1e-2) r.worst_x = x;
            }
            if (err >= tol * 1e-2) r.passed = false;
        }
    }
    return r;
}

/// 8 inputs -> three hidden blocks of 10 (Dense, BatchNorm on the middle
/// block, activation, dropout 0.1) -> 4 classes; batch of 16 random points.
inline std::pair<Network, Batch> grad_check_fixture(const ActivationSpec& act, std::uint64_t seed) {
    NetworkSpec spec{DenseSpec{8, 10},  ActivationLayerSpec{act}, DropoutSpec{0.1},
                     DenseSpec{10, 10}, BatchNormSpec{10},        ActivationLayerSpec{act},
                     DropoutSpec{0.1},  DenseSpec{10, 10},        ActivationLayerSpec{act},
                     DenseSpec{10, 4}};
    Rng rng(seed);
    Network net = Network::build(spec, rng);
    // Non-trivial batch-norm and bias parameters exercise every gradient path.
    for (auto& p : net.parameters()) {
        if (p.name.ends_with(".bias") || p.name.ends_with(".shift")) {
            for (double& v : p.value->values()) v = rng.uniform(-0.2, 0.2);
        } else if (p.name.ends_with(".gamma")) {
            for (double& v : p.value->values()) v = rng.uniform(0.8, 1.2);
        }
    }
    Batch batch{Matrix(16, 8), Labels(16)};
    for (double& v : batch.inputs.values()) v = rng.uniform(-1.5, 1.5);
    for (auto& l : batch.labels) l = rng.index(4);
    return {std::move(net), std::move(batch)};
}

inline std::vector<ActivationSpec> all_activations() {
    return parse_activation_list("relu,swish,elu,softplus,sigmoid,tanh,eswish:1,eswish:1.125,eswish:1.25,eswish:1.5,"
                                 "eswish:1.75,eswish:2");
}

inline int cmd_grad_check(const CliConfig& c, std::ostream& out) {
    std::vector<ActivationSpec> acts;
    if (!c.act.empty() && c.act != "all") {
        acts = parse_activation_list(c.act);
    } else if (c.beta.empty()) {
        acts = all_activations();
    }
    for (double b : detail::parse_list<double>(c.beta, "beta")) acts.push_back(ActivationSpec::eswish(b));
    if (!(c.h > 0.0)) throw ConfigError("--step must be positive");
    const std::uint64_t seed = c.seed.value_or(7);

    bool ok = true;
    out << std::left << std::setw(16) << "activation" << std::setw(14) << "max_rel" << std::setw(14) << "max_abs"
        << std::setw(14) << "network" << "status\n";
    for (const auto& a : acts) {
        if (auto w = beta_warning(a)) out << "warning: " << *w << "\n";
        const ScalarCheck s = check_scalar_derivative(a, c.h, c.tol);
        auto [net, batch] = grad_check_fixture(a, seed);
        const GradCheckResult g = grad_check(net, batch, c.h, seed);
        const bool net_ok = g.max_relative_error < c.net_tol;
        const bool row_ok = s.passed && net_ok;
        ok &= row_ok;
        out << std::setw(16) << to_string(a) << std::setw(14) << std::scientific << std::setprecision(3) << s.max_rel
            << std::setw(14) << s.max_abs << std::setw(14) << g.max_relative_error << std::defaultfloat
            << (row_ok ? "ok" : "FAIL");
        if (!s.passed) out << "  scalar tolerance exceeded at x=" << s.worst_x;
        if (!net_ok) out << "  network tolerance exceeded at " << g.worst_parameter;
        for (double k : s.skipped) out << "  (kink at x=" << k << " skipped)";
        if (g.skipped_invariant) out << "  (" << g.skipped_invariant << " batch-invariant bias entries skipped)";
        out << "\n";
    }
    return ok ? kOk : kFailed;
}

inline int cmd_landscape(const CliConfig& c, std::ostream& out) {
    const auto acts = parse_activation_list(c.act.empty() ? "relu,swish,eswish:1.5,eswish:2,elu" : c.act);
    LandscapeConfig base;
    base.seed = c.seed.value_or(0);
    base.resolution = c.resolution;
    base.lo = c.lo;
    base.hi = c.hi;
    base.layers = c.layers;
    base.width = c.width.value_or(128);
    base.init_scale = c.init_scale;
    for (const auto& a : acts) {
        base.activation = a;
        validate(base);
    }
    if (base.resolution < 3) throw ConfigError("--resolution must be >= 3 to measure slopes");
    const std::filesystem::path dir(c.out);
    std::vector<double> slopes(acts.size());
    parallel_for(acts.size(), c.jobs ? c.jobs : default_jobs(), [&](std::size_t i) {
        LandscapeConfig cfg = base;
        cfg.activation = acts[i];
        const Matrix grid = generate_landscape(cfg);
        slopes[i] = landscape_slope(grid, cfg.spacing());
        write_text_file(dir / ("landscape_" + file_tag(acts[i]) + "_seed" + std::to_string(cfg.seed) + ".csv"),
                        landscape_csv(grid, cfg));
    });
    std::string summary = "activation,beta,rms_slope\n";
    for (std::size_t i = 0; i < acts.size(); ++i) {
        std::string beta;
        if (acts[i].kind == ActivationKind::EswishBeta) beta = detail::num(acts[i].beta);
        if (acts[i].kind == ActivationKind::Swish) beta = "1";
        summary += to_string(acts[i]) + "," + beta + "," + format_double(slopes[i]) + "\n";
        out << std::left << std::setw(14) << to_string(acts[i]) << " rms_slope=" << std::setprecision(6) << slopes[i]
            << "\n";
    }
    write_text_file(dir / "slopes.csv", summary);
    return kOk;
}

inline Dataset load_data(const CliConfig& c, double fraction, std::ostream& out) {
    if (c.synthetic) {
        const auto per_class = static_cast<std::size_t>(std::max(60.0, std::round(3000.0 * fraction)));
        out << "data: synthetic, " << per_class << " examples per class\n";
        return synthetic_dataset(2024, per_class, 10, 784);
    }
    const auto dir = resolve_data_dir(c.data_dir);
    if (!dir) throw ConfigError("no MNIST data: pass --data-dir, set ESWISH_DATA_DIR, or use --synthetic");
    Dataset d = load_mnist(*dir, 0.1, fraction);
    out << "data: MNIST from " << *dir << ", train " << d.train_x.rows() << ", val " << d.val_x.rows() << ", test "
        << d.test_x.rows() << "\n";
    return d;
}

inline int evaluate_weights(const CliConfig& c, const Dataset& data, std::ostream& out) {
    const Network net = load_weights(c.load_weights);
    const Evaluation e = evaluate(net, data.test_x, data.test_y);
    out << "weights " << c.load_weights << ": test_loss=" << e.loss << " test_acc=" << e.accuracy << "\n";
    return kOk;
}

inline Logger make_logger(std::ostream& out) {
    return [&out](const std::string& line) { out << line << std::endl; };
}

inline int cmd_train_depth(const CliConfig& c, std::ostream& out) {
    const DepthExperimentConfig cfg = resolve_depth(c);
    for (const auto& a : cfg.activations) {
        if (auto w = beta_warning(a)) out << "warning: " << *w << "\n";
    }
    const Dataset data = load_data(c, cfg.data_fraction, out);
    if (!c.load_weights.empty()) return evaluate_weights(c, data, out);
    for (int d : cfg.depths) {
        const auto spec = build_depth_network(d, cfg.width, cfg.activations.front(), data.input_dim(), data.num_classes);
        out << "topology depth " << d << " (batch norm after Dense indices " << detail::join(batchnorm_dense_indices(d))
            << "):\n"
            << topology_dump(spec);
    }
    const std::filesystem::path dir(c.out);
    std::optional<std::filesystem::path> weights_dir;
    if (!c.save_weights.empty()) weights_dir = c.save_weights;
    const auto result =
        run_depth_experiment(cfg, data, dir, c.jobs ? c.jobs : default_jobs(), make_logger(out), weights_dir);
    out << "\n" << depth_summary_csv(result.summary);
    return kOk;
}

inline int cmd_train_mnist(const CliConfig& c, std::ostream& out) {
    MnistMlpConfig cfg = resolve_mnist(c);
    for (const auto& a : cfg.activations) {
        if (auto w = beta_warning(a)) out << "warning: " << *w << "\n";
    }
    const Dataset data = load_data(c, cfg.data_fraction, out);
    if (!c.load_weights.empty()) return evaluate_weights(c, data, out);
    out << "topology:\n" << topology_dump(build_mlp_network(cfg.widths, cfg.dropout, cfg.activations.front(), data.input_dim()));
    const std::filesystem::path dir(c.out);
    std::optional<std::filesystem::path> weights_dir;
    if (!c.save_weights.empty()) weights_dir = c.save_weights;
    const auto result =
        run_mnist_mlp(cfg, data, dir, c.jobs ? c.jobs : default_jobs(), make_logger(out), weights_dir);
    out << "\n" << mlp_summary_csv(result.summary);
    return kOk;
}

inline int cmd_curves(const CliConfig& c, std::ostream& out) {
    auto betas = detail::parse_list<double>(c.beta.empty() ? "1,1.25,1.5,1.75,2" : c.beta, "beta");
    for (double b : betas) {
        if (auto w = beta_warning(ActivationSpec::eswish(b))) out << "warning: " << *w << "\n";
    }
    const std::string csv = emit_activation_curves(betas, c.curve_lo, c.curve_hi, c.step);
    const auto path = std::filesystem::path(c.out) / "curves.csv";
    write_text_file(path, csv);
    out << "wrote " << path.string() << " (" << betas.size() << " curve groups)\n";
    return kOk;
}

/// Entry point shared by the executable and the tests.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CliConfig cfg;
    try {
        cfg = parse(args);
    } catch (const CLI::CallForHelp&) {
        CLI::App app{"E-swish activation experiments"};
        CliConfig scratch;
        configure(app, scratch);
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    }
    try {
        out << "config: " << resolved_command(cfg) << std::endl;
        if (cfg.subcommand == "grad-check") return cmd_grad_check(cfg, out);
        if (cfg.subcommand == "landscape") return cmd_landscape(cfg, out);
        if (cfg.subcommand == "train-depth") return cmd_train_depth(cfg, out);
        if (cfg.subcommand == "train-mnist") return cmd_train_mnist(cfg, out);
        if (cfg.subcommand == "curves") return cmd_curves(cfg, out);
        err << "usage error: unknown subcommand\n";
        return kUsage;
    } catch (const ConfigError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const DomainError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const IoError& e) {
        err << "io error: " << e.what() << "\n";
        return kIo;
    } catch (const ParseError& e) {
        err << "io error: " << e.what() << "\n";
        return kIo;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "io error: " << e.what() << "\n";
        return kIo;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kFailed;
    }
}

}  // namespace eswish::cli

#endif  // ESWISH_CLI_HPP
