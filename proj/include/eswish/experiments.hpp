// Copyright 2026 The eswish Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef ESWISH_EXPERIMENTS_HPP
#define ESWISH_EXPERIMENTS_HPP

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "eswish/activations.hpp"
#include "eswish/data.hpp"
#include "eswish/error.hpp"
#include "eswish/network.hpp"
#include "eswish/network_io.hpp"
#include "eswish/numerics.hpp"
#include "eswish/optim.hpp"

namespace eswish {

// ---------------------------------------------------------------------------
// CSV helpers

/// 17 significant digits, enough to round-trip any double.
inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << text;
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

/// Activation text usable in a file name ("eswish:1.5" -> "eswish-1.5").
inline std::string file_tag(const ActivationSpec& spec) {
    std::string s = to_string(spec);
    std::replace(s.begin(), s.end(), ':', '-');
    return s;
}

// ---------------------------------------------------------------------------
// Training loop

struct TrainConfig {
    double lr = 0.01;
    double momentum = 0.0;
    std::size_t batch_size = 128;
    int epochs = 15;
    std::uint64_t seed = 1;
    std::optional<PlateauSchedule> plateau;
    std::optional<int> early_stop_patience;
    std::vector<int> milestones;  // epochs (0-based) at which lr is multiplied by milestone_factor
    double milestone_factor = 0.2;
    std::size_t eval_batch = 2000;
};

struct EpochRecord {
    int epoch = 0;
    double train_loss = 0.0;
    double train_acc = 0.0;
    double val_loss = 0.0;
    double val_acc = 0.0;
    double lr = 0.0;
    double test_acc = 0.0;  // kept in memory for best-epoch reporting; not in the per-epoch CSV
};

struct RunMetrics {
    std::vector<EpochRecord> epochs;
    double final_test_acc = 0.0;     // after the last completed epoch
    double best_val_test_acc = 0.0;  // at the first epoch reaching the best validation accuracy
    int best_val_epoch = 0;
    bool diverged = false;
    bool stopped_early = false;
    double wall_seconds = 0.0;
};

struct Evaluation {
    double loss = 0.0;
    double accuracy = 0.0;
};

inline Evaluation evaluate(const Network& net, const Matrix& x, const Labels& y, std::size_t chunk = 2000) {
    if (x.rows() == 0) return {0.0, 0.0};
    double loss_sum = 0.0;
    std::size_t correct = 0;
    std::vector<std::size_t> idx;
    for (std::size_t start = 0; start < x.rows(); start += chunk) {
        const std::size_t end = std::min(x.rows(), start + chunk);
        idx.resize(end - start);
        for (std::size_t i = start; i < end; ++i) idx[i - start] = i;
        const Matrix out = network_infer(net, gather_rows(x, idx));
        const Labels part(y.begin() + static_cast<std::ptrdiff_t>(start), y.begin() + static_cast<std::ptrdiff_t>(end));
        loss_sum += softmax_cross_entropy(out, part).loss * static_cast<double>(end - start);
        const Labels pred = predict(out);
        for (std::size_t i = 0; i < pred.size(); ++i) correct += pred[i] == part[i];
    }
    const auto n = static_cast<double>(x.rows());
    return {loss_sum / n, static_cast<double>(correct) / n};
}

/// Minibatch SGD over `data.train_*`. Train loss/accuracy are running means
/// over the epoch's minibatches; validation and test are evaluated in Infer
/// mode after each epoch, and only then do the plateau and early-stop
/// counters see the validation accuracy. A non-finite loss or gradient ends
/// the run with `diverged` set and both test accuracies reported as 0.
inline RunMetrics train_network(Network& net, const Dataset& data, const TrainConfig& cfg) {
    if (cfg.batch_size == 0) throw ConfigError("batch size must be positive");
    if (cfg.epochs <= 0) throw ConfigError("epochs must be positive");
    if ((cfg.plateau || cfg.early_stop_patience) && data.val_x.rows() == 0) {
        throw ConfigError("plateau / early-stop schedules need a validation set");
    }
    validate_milestones(cfg.milestones);
    const auto t0 = std::chrono::steady_clock::now();

    RunMetrics m;
    SgdState sgd{cfg.lr, cfg.momentum, {}};
    std::optional<PlateauSchedule> plateau = cfg.plateau;
    std::optional<EarlyStop> early;
    if (cfg.early_stop_patience) early = EarlyStop{*cfg.early_stop_patience};
    Rng rng(cfg.seed ^ 0x5851f42d4c957f2dULL);

    const std::size_t n = data.train_x.rows();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    double best_val = -std::numeric_limits<double>::infinity();

    for (int epoch = 1; epoch <= cfg.epochs && !m.diverged; ++epoch) {
        if (!cfg.milestones.empty()) {
            sgd.lr = step_schedule(epoch - 1, cfg.milestones, cfg.milestone_factor, cfg.lr);
        }
        rng.shuffle(order);
        net.set_mode(Mode::Train);
        double loss_sum = 0.0;
        std::size_t correct = 0;
        std::size_t seen = 0;
        for (std::size_t start = 0; start < n; start += cfg.batch_size) {
            const std::size_t end = std::min(n, start + cfg.batch_size);
            if (end - start < 2) break;  // batch norm needs two rows
            const std::span<const std::size_t> idx(order.data() + start, end - start);
            const Matrix x = gather_rows(data.train_x, idx);
            Labels y(idx.size());
            for (std::size_t i = 0; i < idx.size(); ++i) y[i] = data.train_y[idx[i]];

            auto pass = network_forward(net, x, rng);
            auto loss = softmax_cross_entropy(pass.output, y);
            if (!std::isfinite(loss.loss)) {
                m.diverged = true;
                break;
            }
            const Labels pred = predict(pass.output);
            for (std::size_t i = 0; i < y.size(); ++i) correct += pred[i] == y[i];
            loss_sum += loss.loss * static_cast<double>(y.size());
            seen += y.size();
            try {
                const Gradients grads = network_backward(net, pass, loss.d_logits);
                const auto params = net.parameters();
                sgd_step(params, grads, sgd);
            } catch (const TrainingError&) {
                m.diverged = true;
                break;
            }
        }
        if (m.diverged) break;

        net.set_mode(Mode::Infer);
        const Evaluation val = evaluate(net, data.val_x, data.val_y, cfg.eval_batch);
        const Evaluation test = evaluate(net, data.test_x, data.test_y, cfg.eval_batch);
        if (!std::isfinite(val.loss) && data.val_x.rows() > 0) {
            m.diverged = true;
            break;
        }
        EpochRecord rec{epoch,         loss_sum / static_cast<double>(std::max<std::size_t>(seen, 1)),
                        static_cast<double>(correct) / static_cast<double>(std::max<std::size_t>(seen, 1)),
                        val.loss,      val.accuracy,
                        sgd.lr,        test.accuracy};
        m.epochs.push_back(rec);
        m.final_test_acc = test.accuracy;
        if (val.accuracy > best_val) {
            best_val = val.accuracy;
            m.best_val_epoch = epoch;
            m.best_val_test_acc = test.accuracy;
        }
        if (plateau) sgd.lr = plateau_update(*plateau, val.accuracy, sgd.lr);
        if (early && early_stop_check(*early, val.accuracy)) {
            m.stopped_early = true;
            break;
        }
    }
    if (m.diverged) {
        m.final_test_acc = 0.0;
        m.best_val_test_acc = 0.0;
    }
    net.set_mode(Mode::Infer);
    m.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return m;
}

inline constexpr const char* kMetricsHeader = "epoch,train_loss,train_acc,val_loss,val_acc,lr";

inline std::string metrics_csv(const std::vector<EpochRecord>& records) {
    std::string s = std::string(kMetricsHeader) + "\n";
    for (const auto& r : records) {
        s += std::to_string(r.epoch) + "," + format_double(r.train_loss) + "," + format_double(r.train_acc) + "," +
             format_double(r.val_loss) + "," + format_double(r.val_acc) + "," + format_double(r.lr) + "\n";
    }
    return s;
}

// ---------------------------------------------------------------------------
// Aggregation

/// Lower median: the element at index (n - 1) / 2 after sorting.
inline double lower_median(std::vector<double> values) {
    if (values.empty()) throw AggregationError("median of an empty list");
    std::sort(values.begin(), values.end());
    return values[(values.size() - 1) / 2];
}

/// Field-wise lower median over runs with identical epoch sequences.
inline std::vector<EpochRecord> median_of_runs(const std::vector<std::vector<EpochRecord>>& runs) {
    if (runs.empty()) throw AggregationError("median_of_runs: no runs");
    const std::size_t len = runs.front().size();
    for (std::size_t r = 0; r < runs.size(); ++r) {
        if (runs[r].size() != len) {
            throw AggregationError("median_of_runs: run " + std::to_string(r) + " has " +
                                   std::to_string(runs[r].size()) + " epochs, run 0 has " + std::to_string(len));
        }
        for (std::size_t e = 0; e < len; ++e) {
            if (runs[r][e].epoch != runs.front()[e].epoch) {
                throw AggregationError("median_of_runs: epoch numbers differ between runs");
            }
        }
    }
    std::vector<EpochRecord> out(len);
    for (std::size_t e = 0; e < len; ++e) {
        auto field = [&](double EpochRecord::*member) {
            std::vector<double> v;
            v.reserve(runs.size());
            for (const auto& run : runs) v.push_back(run[e].*member);
            return lower_median(std::move(v));
        };
        out[e].epoch = runs.front()[e].epoch;
        out[e].train_loss = field(&EpochRecord::train_loss);
        out[e].train_acc = field(&EpochRecord::train_acc);
        out[e].val_loss = field(&EpochRecord::val_loss);
        out[e].val_acc = field(&EpochRecord::val_acc);
        out[e].lr = field(&EpochRecord::lr);
        out[e].test_acc = field(&EpochRecord::test_acc);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Worker pool

/// Runs job(0..count-1) on up to `jobs` threads. The first exception thrown
/// by any job is rethrown after all threads finish.
inline void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& job) {
    jobs = std::max<std::size_t>(1, std::min(jobs, count));
    if (jobs == 1) {
        for (std::size_t i = 0; i < count; ++i) job(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> workers;
    workers.reserve(jobs);
    for (std::size_t w = 0; w < jobs; ++w) {
        workers.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    job(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : workers) t.join();
    if (failure) std::rethrow_exception(failure);
}

inline std::size_t default_jobs() {
    return std::max(1u, std::thread::hardware_concurrency());
}

using Logger = std::function<void(const std::string&)>;

// ---------------------------------------------------------------------------
// Depth trainability sweep

struct DepthExperimentConfig {
    std::vector<int> depths;
    std::size_t width = 512;
    std::vector<ActivationSpec> activations;
    std::vector<std::uint64_t> seeds{1, 2, 3};
    TrainConfig train;
    double data_fraction = 1.0;
};

/// Hidden widths 512, depths 23..44, SGD 0.01 / momentum 0.9, plateau x0.35
/// after 2 flat epochs, early stop after 5, 15 epochs, batch 128.
inline DepthExperimentConfig depth_paper_preset() {
    DepthExperimentConfig c;
    for (int d = 23; d <= 44; ++d) c.depths.push_back(d);
    c.width = 512;
    c.activations = {ActivationSpec::of(ActivationKind::Relu), ActivationSpec::of(ActivationKind::Swish),
                     ActivationSpec::eswish(1.5)};
    c.train.lr = 0.01;
    c.train.momentum = 0.9;
    c.train.batch_size = 128;
    c.train.epochs = 15;
    c.train.plateau = PlateauSchedule{0.35, 2};
    c.train.early_stop_patience = 5;
    c.data_fraction = 1.0;
    return c;
}

/// Same recipe at depths 8, 16, 24, width 128, on 20% of the data.
inline DepthExperimentConfig depth_desk_preset() {
    DepthExperimentConfig c = depth_paper_preset();
    c.depths = {8, 16, 24};
    c.width = 128;
    c.data_fraction = 0.2;
    return c;
}

/// Zero-based Dense indices (excluding the classifier head) followed by
/// batch normalization: those with i % 3 == 1.
inline std::vector<int> batchnorm_dense_indices(int depth) {
    std::vector<int> out;
    for (int i = 0; i < depth; ++i) {
        if (i % 3 == 1) out.push_back(i);
    }
    return out;
}

/// `depth` blocks of Dense(width) [-> BatchNorm when the block's Dense
/// index i has i % 3 == 1] -> activation, then a Dense classifier head.
inline NetworkSpec build_depth_network(int depth, std::size_t width, const ActivationSpec& act,
                                       std::size_t input_dim = 784, std::size_t num_classes = 10) {
    if (depth < 1) throw ConfigError("depth must be >= 1, got " + std::to_string(depth));
    if (width == 0) throw ConfigError("width must be positive");
    NetworkSpec spec;
    std::size_t in = input_dim;
    for (int i = 0; i < depth; ++i) {
        spec.emplace_back(DenseSpec{in, width});
        if (i % 3 == 1) spec.emplace_back(BatchNormSpec{width});
        spec.emplace_back(ActivationLayerSpec{act});
        in = width;
    }
    spec.emplace_back(DenseSpec{in, num_classes});
    return spec;
}

inline std::string topology_dump(const NetworkSpec& spec) {
    std::string s;
    for (std::size_t i = 0; i < spec.size(); ++i) {
        s += "  [" + std::to_string(i) + "] " + describe(spec[i]) + "\n";
    }
    return s;
}

struct DepthRun {
    int depth = 0;
    ActivationSpec activation;
    std::uint64_t seed = 0;
    RunMetrics metrics;
};

struct DepthSummaryRow {
    int depth = 0;
    ActivationSpec activation;
    double median_test_acc = 0.0;
    int diverged_count = 0;
};

struct DepthSweepResult {
    std::vector<DepthRun> runs;
    std::vector<DepthSummaryRow> summary;
};

inline std::string depth_summary_csv(const std::vector<DepthSummaryRow>& rows) {
    std::string s = "depth,activation,median_test_acc,diverged_count\n";
    for (const auto& r : rows) {
        s += std::to_string(r.depth) + "," + to_string(r.activation) + "," + format_double(r.median_test_acc) + "," +
             std::to_string(r.diverged_count) + "\n";
    }
    return s;
}

/// Trains every (depth, activation, seed) cell and reports the per-cell
/// median over seeds of the test accuracy at the best validation epoch. The
/// seed drives both initialization and minibatch order, so activations at
/// equal seeds start from identical weights. Per-run CSVs and
/// depth_summary.csv go to `out_dir` when given, trained weights to
/// `weights_dir`.
inline DepthSweepResult run_depth_experiment(const DepthExperimentConfig& cfg, const Dataset& data,
                                             const std::optional<std::filesystem::path>& out_dir = std::nullopt,
                                             std::size_t jobs = 1, const Logger& log = nullptr,
                                             const std::optional<std::filesystem::path>& weights_dir = std::nullopt) {
    if (cfg.seeds.empty()) throw ConfigError("depth experiment needs at least one seed");
    if (cfg.depths.empty() || cfg.activations.empty()) throw ConfigError("depth experiment needs depths and activations");
    for (int d : cfg.depths) {
        if (d < 1) throw ConfigError("depths must be positive");
    }
    DepthSweepResult result;
    for (int d : cfg.depths) {
        for (const auto& a : cfg.activations) {
            for (auto s : cfg.seeds) result.runs.push_back({d, a, s, {}});
        }
    }
    std::mutex log_mutex;
    parallel_for(result.runs.size(), jobs, [&](std::size_t i) {
        DepthRun& run = result.runs[i];
        Rng init(run.seed);
        Network net = Network::build(
            build_depth_network(run.depth, cfg.width, run.activation, data.input_dim(), data.num_classes), init);
        TrainConfig tc = cfg.train;
        tc.seed = run.seed;
        run.metrics = train_network(net, data, tc);
        if (weights_dir) {
            std::filesystem::create_directories(*weights_dir);
            save_weights(net, (*weights_dir / ("depth_" + file_tag(run.activation) + "_" + std::to_string(run.depth) +
                                               "_" + std::to_string(run.seed) + ".eswnet"))
                                  .string());
        }
        if (out_dir) {
            write_text_file(*out_dir / ("depth_" + file_tag(run.activation) + "_" + std::to_string(run.depth) + "_" +
                                        std::to_string(run.seed) + ".csv"),
                            metrics_csv(run.metrics.epochs));
        }
        if (log) {
            std::lock_guard lock(log_mutex);
            char buf[256];
            std::snprintf(buf, sizeof buf, "depth=%d act=%s seed=%llu test_acc=%.4f epochs=%zu%s (%.1fs)", run.depth,
                          to_string(run.activation).c_str(), static_cast<unsigned long long>(run.seed),
                          run.metrics.best_val_test_acc, run.metrics.epochs.size(),
                          run.metrics.diverged ? " DIVERGED" : "", run.metrics.wall_seconds);
            log(buf);
        }
    });
    for (int d : cfg.depths) {
        for (const auto& a : cfg.activations) {
            std::vector<double> accs;
            int diverged = 0;
            for (const auto& run : result.runs) {
                if (run.depth != d || !(run.activation == a)) continue;
                accs.push_back(run.metrics.best_val_test_acc);
                diverged += run.metrics.diverged ? 1 : 0;
            }
            result.summary.push_back({d, a, lower_median(accs), diverged});
        }
    }
    if (out_dir) write_text_file(*out_dir / "depth_summary.csv", depth_summary_csv(result.summary));
    return result;
}

// ---------------------------------------------------------------------------
// Five-layer MNIST MLP

struct MnistMlpConfig {
    std::vector<std::size_t> widths{200, 100, 60, 30, 10};
    double dropout = 0.2;
    std::vector<ActivationSpec> activations;
    std::vector<std::uint64_t> seeds{1, 2, 3};
    TrainConfig train;
    double data_fraction = 1.0;
};

/// 200-100-60-30-10, dropout 0.2, SGD lr 0.1 without momentum, batch 64,
/// 20 epochs.
inline MnistMlpConfig mnist_paper_preset() {
    MnistMlpConfig c;
    c.activations = {ActivationSpec::of(ActivationKind::Relu), ActivationSpec::of(ActivationKind::Swish),
                     ActivationSpec::eswish(1.5), ActivationSpec::eswish(2.0)};
    c.train.lr = 0.1;
    c.train.momentum = 0.0;
    c.train.batch_size = 64;
    c.train.epochs = 20;
    return c;
}

/// Same network and optimizer on 20% of the data for 5 epochs.
inline MnistMlpConfig mnist_desk_preset() {
    MnistMlpConfig c = mnist_paper_preset();
    c.train.epochs = 5;
    c.data_fraction = 0.2;
    return c;
}

/// Dense -> activation -> dropout for every hidden width; the last width is
/// a linear classifier head.
inline NetworkSpec build_mlp_network(const std::vector<std::size_t>& widths, double dropout, const ActivationSpec& act,
                                     std::size_t input_dim = 784) {
    if (widths.empty()) throw ConfigError("MLP needs at least one layer width");
    NetworkSpec spec;
    std::size_t in = input_dim;
    for (std::size_t i = 0; i + 1 < widths.size(); ++i) {
        spec.emplace_back(DenseSpec{in, widths[i]});
        spec.emplace_back(ActivationLayerSpec{act});
        if (dropout > 0.0) spec.emplace_back(DropoutSpec{dropout});
        in = widths[i];
    }
    spec.emplace_back(DenseSpec{in, widths.back()});
    return spec;
}

struct MlpRun {
    ActivationSpec activation;
    std::uint64_t seed = 0;
    RunMetrics metrics;
};

struct MlpSummaryRow {
    ActivationSpec activation;
    double median_test_acc = 0.0;
    int diverged_count = 0;
    std::vector<EpochRecord> median_curve;  // empty when runs stopped at different epochs
};

struct MlpResult {
    std::vector<MlpRun> runs;
    std::vector<MlpSummaryRow> summary;
};

inline std::string mlp_summary_csv(const std::vector<MlpSummaryRow>& rows) {
    std::string s = "activation,median_test_acc,diverged_count\n";
    for (const auto& r : rows) {
        s += to_string(r.activation) + "," + format_double(r.median_test_acc) + "," + std::to_string(r.diverged_count) +
             "\n";
    }
    return s;
}

/// Trains the MLP per (activation, seed) and writes
/// mnist_<act>_mlp_<seed>.csv, mnist_<act>_median.csv and mnist_summary.csv
/// to `out_dir`, and trained weights to `weights_dir`, when given.
inline MlpResult run_mnist_mlp(const MnistMlpConfig& cfg, const Dataset& data,
                               const std::optional<std::filesystem::path>& out_dir = std::nullopt, std::size_t jobs = 1,
                               const Logger& log = nullptr,
                               const std::optional<std::filesystem::path>& weights_dir = std::nullopt) {
    if (cfg.seeds.empty() || cfg.activations.empty()) throw ConfigError("MNIST MLP needs seeds and activations");
    if (cfg.widths.back() != data.num_classes) {
        throw ConfigError("last MLP width " + std::to_string(cfg.widths.back()) + " must equal the class count " +
                          std::to_string(data.num_classes));
    }
    MlpResult result;
    for (const auto& a : cfg.activations) {
        for (auto s : cfg.seeds) result.runs.push_back({a, s, {}});
    }
    std::mutex log_mutex;
    parallel_for(result.runs.size(), jobs, [&](std::size_t i) {
        MlpRun& run = result.runs[i];
        Rng init(run.seed);
        Network net = Network::build(build_mlp_network(cfg.widths, cfg.dropout, run.activation, data.input_dim()), init);
        TrainConfig tc = cfg.train;
        tc.seed = run.seed;
        run.metrics = train_network(net, data, tc);
        if (weights_dir) {
            std::filesystem::create_directories(*weights_dir);
            save_weights(net, (*weights_dir / ("mnist_" + file_tag(run.activation) + "_mlp_" +
                                               std::to_string(run.seed) + ".eswnet"))
                                  .string());
        }
        if (out_dir) {
            write_text_file(*out_dir / ("mnist_" + file_tag(run.activation) + "_mlp_" + std::to_string(run.seed) + ".csv"),
                            metrics_csv(run.metrics.epochs));
        }
        if (log) {
            std::lock_guard lock(log_mutex);
            char buf[256];
            std::snprintf(buf, sizeof buf, "act=%s seed=%llu test_acc=%.4f%s (%.1fs)", to_string(run.activation).c_str(),
                          static_cast<unsigned long long>(run.seed), run.metrics.final_test_acc,
                          run.metrics.diverged ? " DIVERGED" : "", run.metrics.wall_seconds);
            log(buf);
        }
    });
    for (const auto& a : cfg.activations) {
        std::vector<double> accs;
        std::vector<std::vector<EpochRecord>> curves;
        int diverged = 0;
        for (const auto& run : result.runs) {
            if (!(run.activation == a)) continue;
            accs.push_back(run.metrics.final_test_acc);
            curves.push_back(run.metrics.epochs);
            diverged += run.metrics.diverged ? 1 : 0;
        }
        MlpSummaryRow row{a, lower_median(accs), diverged, {}};
        try {
            row.median_curve = median_of_runs(curves);
        } catch (const AggregationError&) {
            // diverged runs are shorter; no aligned curve exists
        }
        if (out_dir && !row.median_curve.empty()) {
            write_text_file(*out_dir / ("mnist_" + file_tag(a) + "_median.csv"), metrics_csv(row.median_curve));
        }
        result.summary.push_back(std::move(row));
    }
    if (out_dir) write_text_file(*out_dir / "mnist_summary.csv", mlp_summary_csv(result.summary));
    return result;
}

// ---------------------------------------------------------------------------
// Output landscape of a random network

struct LandscapeConfig {
    std::size_t layers = 6;
    std::size_t width = 128;
    std::size_t resolution = 256;
    double lo = -2.0;
    double hi = 2.0;
    double init_scale = 1.0;
    std::uint64_t seed = 0;
    ActivationSpec activation = ActivationSpec::of(ActivationKind::Relu);

    double spacing() const { return (hi - lo) / static_cast<double>(resolution - 1); }
    double coordinate(std::size_t i) const { return lo + static_cast<double>(i) * spacing(); }
};

inline void validate(const LandscapeConfig& cfg) {
    if (cfg.resolution < 2) throw ConfigError("landscape resolution must be >= 2");
    if (!(cfg.hi > cfg.lo)) throw ConfigError("landscape range needs hi > lo");
    if (cfg.layers == 0 || cfg.width == 0) throw ConfigError("landscape network needs layers and width");
    if (!std::isfinite(cfg.init_scale)) throw ConfigError("landscape init scale must be finite");
    validate(cfg.activation);
}

/// 2 inputs -> `layers` x (Dense(width) -> activation) -> Dense(1), Glorot
/// weights multiplied by init_scale, zero biases. Draws depend only on the
/// seed and the layer sizes, so every activation sees the same weights.
inline Network build_landscape_network(const LandscapeConfig& cfg) {
    validate(cfg);
    NetworkSpec spec;
    std::size_t in = 2;
    for (std::size_t i = 0; i < cfg.layers; ++i) {
        spec.emplace_back(DenseSpec{in, cfg.width});
        spec.emplace_back(ActivationLayerSpec{cfg.activation});
        in = cfg.width;
    }
    spec.emplace_back(DenseSpec{in, 1});
    Rng rng(cfg.seed);
    Network net = Network::build(spec, rng);
    if (cfg.init_scale != 1.0) {
        for (auto& layer : net.layers()) {
            if (auto* d = std::get_if<DenseLayer>(&layer)) {
                for (double& w : d->weights.values()) w *= cfg.init_scale;
            }
        }
    }
    net.set_mode(Mode::Infer);
    return net;
}

/// R x R grid; entry (i, j) is the network output at (x_j, y_i) with
/// x_j = lo + j * spacing and y_i = lo + i * spacing.
inline Matrix generate_landscape(const LandscapeConfig& cfg) {
    const Network net = build_landscape_network(cfg);
    const std::size_t r = cfg.resolution;
    Matrix grid(r, r);
    constexpr std::size_t kChunkRows = 16;
    for (std::size_t i0 = 0; i0 < r; i0 += kChunkRows) {
        const std::size_t i1 = std::min(r, i0 + kChunkRows);
        Matrix points((i1 - i0) * r, 2);
        for (std::size_t i = i0; i < i1; ++i) {
            for (std::size_t j = 0; j < r; ++j) {
                points((i - i0) * r + j, 0) = cfg.coordinate(j);
                points((i - i0) * r + j, 1) = cfg.coordinate(i);
            }
        }
        const Matrix out = network_infer(net, points);
        for (std::size_t i = i0; i < i1; ++i) {
            for (std::size_t j = 0; j < r; ++j) grid(i, j) = out((i - i0) * r + j, 0);
        }
    }
    return grid;
}

/// Root mean square, over interior points, of the central-difference
/// gradient magnitude.
inline double landscape_slope(const Matrix& grid, double spacing) {
    if (grid.rows() < 3 || grid.cols() < 3) {
        throw DomainError("landscape_slope: grid " + grid.shape() + " has no interior points");
    }
    if (!(spacing > 0.0)) throw DomainError("landscape_slope: spacing must be positive");
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 1; i + 1 < grid.rows(); ++i) {
        for (std::size_t j = 1; j + 1 < grid.cols(); ++j) {
            const double gx = (grid(i, j + 1) - grid(i, j - 1)) / (2.0 * spacing);
            const double gy = (grid(i + 1, j) - grid(i - 1, j)) / (2.0 * spacing);
            sum += gx * gx + gy * gy;
            ++count;
        }
    }
    return std::sqrt(sum / static_cast<double>(count));
}

inline std::string landscape_csv(const Matrix& grid, const LandscapeConfig& cfg) {
    std::string s = "x,y,z\n";
    s.reserve(grid.size() * 64);
    for (std::size_t i = 0; i < grid.rows(); ++i) {
        for (std::size_t j = 0; j < grid.cols(); ++j) {
            s += format_double(cfg.coordinate(j));
            s += ',';
            s += format_double(cfg.coordinate(i));
            s += ',';
            s += format_double(grid(i, j));
            s += '\n';
        }
    }
    return s;
}

// ---------------------------------------------------------------------------
// Activation curves

/// For each beta, rows (beta, x, f, f') on round((hi - lo) / step) + 1 evenly
/// spaced points from lo to hi, with the Swish value and derivative at the
/// same x as reference columns.
inline std::string emit_activation_curves(const std::vector<double>& betas, double lo, double hi, double step) {
    if (!(hi > lo) || !(step > 0.0)) throw ConfigError("curve range needs hi > lo and step > 0");
    for (double b : betas) validate_beta(b);
    const auto points = static_cast<std::size_t>(std::llround((hi - lo) / step)) + 1;
    std::string s = "beta,x,f,df,swish,dswish\n";
    for (double b : betas) {
        for (std::size_t i = 0; i < points; ++i) {
            const double t = static_cast<double>(i);
            const double last = static_cast<double>(points - 1);
            const double x = points == 1 ? lo : (lo * (last - t) + hi * t) / last;
            s += format_double(b) + "," + format_double(x) + "," + format_double(eswish(b, x)) + "," +
                 format_double(eswish_grad(b, x)) + "," + format_double(swish(x)) + "," + format_double(swish_grad(x)) +
                 "\n";
        }
    }
    return s;
}

}  // namespace eswish

#endif  // ESWISH_EXPERIMENTS_HPP
