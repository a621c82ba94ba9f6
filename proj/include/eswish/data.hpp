// Copyright 2026 The eswish Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef ESWISH_DATA_HPP
#define ESWISH_DATA_HPP

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <string>
#include <vector>

#include "eswish/error.hpp"
#include "eswish/network.hpp"
#include "eswish/numerics.hpp"

namespace eswish {

enum class DataSource { MnistIdx, Synthetic };

/// Train/validation/test partitions. Features lie in [0, 1].
struct Dataset {
    Matrix train_x;
    Labels train_y;
    Matrix val_x;
    Labels val_y;
    Matrix test_x;
    Labels test_y;
    std::size_t num_classes = 10;
    DataSource source = DataSource::Synthetic;

    std::size_t input_dim() const noexcept { return train_x.cols(); }
};

inline constexpr std::uint32_t kIdxImagesMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelsMagic = 0x00000801;

namespace detail {

inline std::vector<unsigned char> gunzip(const std::vector<unsigned char>& in, const std::string& path) {
    z_stream zs{};
    if (inflateInit2(&zs, 16 + MAX_WBITS) != Z_OK) throw IoError("zlib init failed for '" + path + "'");
    zs.next_in = const_cast<Bytef*>(in.data());
    zs.avail_in = static_cast<uInt>(in.size());
    std::vector<unsigned char> out;
    unsigned char buf[1 << 16];
    int rc = Z_OK;
    while (rc != Z_STREAM_END) {
        zs.next_out = buf;
        zs.avail_out = sizeof buf;
        rc = inflate(&zs, Z_NO_FLUSH);
        if (rc != Z_OK && rc != Z_STREAM_END) {
            inflateEnd(&zs);
            throw ParseError(ParseErrorKind::Truncated, "'" + path + "': corrupt or truncated gzip stream");
        }
        out.insert(out.end(), buf, buf + (sizeof buf - zs.avail_out));
    }
    inflateEnd(&zs);
    return out;
}

inline std::uint32_t read_be32(const std::vector<unsigned char>& b, std::size_t pos) {
    return (std::uint32_t{b[pos]} << 24) | (std::uint32_t{b[pos + 1]} << 16) |
           (std::uint32_t{b[pos + 2]} << 8) | std::uint32_t{b[pos + 3]};
}

inline void write_be32(std::ofstream& out, std::uint32_t v) {
    const char bytes[4] = {static_cast<char>(v >> 24), static_cast<char>(v >> 16),
                           static_cast<char>(v >> 8), static_cast<char>(v)};
    out.write(bytes, 4);
}

inline std::string hex32(std::uint32_t v) {
    char buf[11];
    std::snprintf(buf, sizeof buf, "0x%08x", v);
    return buf;
}

inline void require_bytes(const std::vector<unsigned char>& b, std::size_t need, const std::string& what) {
    if (b.size() < need) {
        throw ParseError(ParseErrorKind::Truncated, what + ": truncated, expected " + std::to_string(need) +
                                                        " bytes but found " + std::to_string(b.size()));
    }
}

}  // namespace detail

/// Whole file contents; gzip streams (0x1f 0x8b prefix) are inflated.
inline std::vector<unsigned char> read_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (bytes.size() >= 2 && bytes[0] == 0x1f && bytes[1] == 0x8b) return detail::gunzip(bytes, path);
    return bytes;
}

struct IdxImages {
    std::size_t count = 0;
    std::size_t rows = 0;
    std::size_t cols = 0;
    Matrix pixels;  // count x (rows * cols), scaled by 1/255
};

inline IdxImages parse_idx_images(const std::vector<unsigned char>& b, const std::string& name = "images") {
    detail::require_bytes(b, 4, name);
    const std::uint32_t magic = detail::read_be32(b, 0);
    if (magic != kIdxImagesMagic) {
        throw ParseError(ParseErrorKind::WrongMagic, name + ": wrong magic, expected " +
                                                         detail::hex32(kIdxImagesMagic) + " but found " +
                                                         detail::hex32(magic));
    }
    detail::require_bytes(b, 16, name);
    IdxImages out;
    out.count = detail::read_be32(b, 4);
    out.rows = detail::read_be32(b, 8);
    out.cols = detail::read_be32(b, 12);
    const std::size_t features = out.rows * out.cols;
    detail::require_bytes(b, 16 + out.count * features, name);
    if (b.size() != 16 + out.count * features) {
        throw ParseError(ParseErrorKind::Malformed, name + ": " + std::to_string(b.size() - 16 - out.count * features) +
                                                        " trailing bytes after payload");
    }
    out.pixels = Matrix(out.count, features);
    auto v = out.pixels.values();
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(b[16 + i]) / 255.0;
    return out;
}

inline Labels parse_idx_labels(const std::vector<unsigned char>& b, const std::string& name = "labels") {
    detail::require_bytes(b, 4, name);
    const std::uint32_t magic = detail::read_be32(b, 0);
    if (magic != kIdxLabelsMagic) {
        throw ParseError(ParseErrorKind::WrongMagic, name + ": wrong magic, expected " +
                                                         detail::hex32(kIdxLabelsMagic) + " but found " +
                                                         detail::hex32(magic));
    }
    detail::require_bytes(b, 8, name);
    const std::size_t count = detail::read_be32(b, 4);
    detail::require_bytes(b, 8 + count, name);
    if (b.size() != 8 + count) {
        throw ParseError(ParseErrorKind::Malformed, name + ": trailing bytes after payload");
    }
    return Labels(b.begin() + 8, b.end());
}

struct LabeledImages {
    Matrix images;
    Labels labels;
};

/// Reads an IDX image file and its IDX label file; counts must agree.
inline LabeledImages load_idx(const std::string& images_path, const std::string& labels_path) {
    auto images = parse_idx_images(read_file_bytes(images_path), images_path);
    auto labels = parse_idx_labels(read_file_bytes(labels_path), labels_path);
    if (images.count != labels.size()) {
        throw ParseError(ParseErrorKind::CountMismatch,
                         "'" + images_path + "' holds " + std::to_string(images.count) + " images but '" +
                             labels_path + "' holds " + std::to_string(labels.size()) + " labels");
    }
    return {std::move(images.pixels), std::move(labels)};
}

/// Writes uncompressed IDX files. `pixels` holds count * rows * cols bytes.
inline void write_idx_images(const std::string& path, const std::vector<std::uint8_t>& pixels,
                             std::uint32_t count, std::uint32_t rows, std::uint32_t cols) {
    if (pixels.size() != std::size_t{count} * rows * cols) {
        throw ShapeError("write_idx_images: pixel buffer does not match dims");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    detail::write_be32(out, kIdxImagesMagic);
    detail::write_be32(out, count);
    detail::write_be32(out, rows);
    detail::write_be32(out, cols);
    out.write(reinterpret_cast<const char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
}

inline void write_idx_labels(const std::string& path, const std::vector<std::uint8_t>& labels) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    detail::write_be32(out, kIdxLabelsMagic);
    detail::write_be32(out, static_cast<std::uint32_t>(labels.size()));
    out.write(reinterpret_cast<const char*>(labels.data()), static_cast<std::streamsize>(labels.size()));
}

/// Tail split: the last floor(n * val_fraction) examples become the
/// validation set, order preserved.
inline Dataset split(const Matrix& x, const Labels& y, double val_fraction) {
    if (!(val_fraction > 0.0 && val_fraction < 0.5)) {
        throw DomainError("split: val_fraction must be in (0, 0.5), got " + std::to_string(val_fraction));
    }
    if (x.rows() != y.size()) throw ShapeError("split: feature rows and label count differ");
    const std::size_t n = x.rows();
    const auto n_val = static_cast<std::size_t>(std::floor(static_cast<double>(n) * val_fraction));
    const std::size_t n_train = n - n_val;
    Dataset d;
    d.train_x = Matrix(n_train, x.cols(), std::vector<double>(x.values().begin(), x.values().begin() + n_train * x.cols()));
    d.val_x = Matrix(n_val, x.cols(), std::vector<double>(x.values().begin() + n_train * x.cols(), x.values().end()));
    d.train_y.assign(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(n_train));
    d.val_y.assign(y.begin() + static_cast<std::ptrdiff_t>(n_train), y.end());
    std::size_t max_label = 0;
    for (auto l : y) max_label = std::max(max_label, l);
    d.num_classes = y.empty() ? 0 : max_label + 1;
    return d;
}

inline Matrix head_rows(const Matrix& x, std::size_t n) {
    n = std::min(n, x.rows());
    return Matrix(n, x.cols(), std::vector<double>(x.values().begin(), x.values().begin() + n * x.cols()));
}

inline std::optional<std::string> find_idx_file(const std::filesystem::path& dir, const std::string& stem) {
    // Both the canonical "train-images-idx3-ubyte" and the common
    // "train-images.idx3-ubyte" spellings, each optionally gzipped.
    std::string dotted = stem;
    const auto dash = dotted.rfind("-idx");
    if (dash != std::string::npos) dotted[dash] = '.';
    for (const auto& name : {stem, stem + ".gz", dotted, dotted + ".gz"}) {
        const auto p = dir / name;
        if (std::filesystem::exists(p)) return p.string();
    }
    return std::nullopt;
}

/// The four standard MNIST files in `dir`. `fraction` keeps the leading
/// share of both train and test sets; validation is the tail of the kept
/// training examples.
inline Dataset load_mnist(const std::string& dir, double val_fraction = 0.1, double fraction = 1.0) {
    if (!(fraction > 0.0 && fraction <= 1.0)) throw DomainError("load_mnist: fraction must be in (0, 1]");
    auto need = [&](const std::string& stem) {
        auto p = find_idx_file(dir, stem);
        if (!p) throw IoError("MNIST file '" + stem + "' not found in '" + dir + "'");
        return *p;
    };
    auto train = load_idx(need("train-images-idx3-ubyte"), need("train-labels-idx1-ubyte"));
    auto test = load_idx(need("t10k-images-idx3-ubyte"), need("t10k-labels-idx1-ubyte"));
    const auto keep_train = static_cast<std::size_t>(std::floor(static_cast<double>(train.labels.size()) * fraction));
    const auto keep_test = static_cast<std::size_t>(std::floor(static_cast<double>(test.labels.size()) * fraction));
    for (const Labels* l : {&train.labels, &test.labels}) {
        for (auto v : *l) {
            if (v >= 10) throw ParseError(ParseErrorKind::Malformed, "MNIST label " + std::to_string(v) + " is not a digit");
        }
    }
    train.labels.resize(keep_train);
    test.labels.resize(keep_test);
    Dataset d = split(head_rows(train.images, keep_train), train.labels, val_fraction);
    d.test_x = head_rows(test.images, keep_test);
    d.test_y = std::move(test.labels);
    d.num_classes = 10;
    d.source = DataSource::MnistIdx;
    return d;
}

/// `flag` when non-empty, else $ESWISH_DATA_DIR, else nothing.
inline std::optional<std::string> resolve_data_dir(const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv("ESWISH_DATA_DIR"); env && *env) return std::string(env);
    return std::nullopt;
}

/// Gaussian blobs: class means with independent standard normal
/// coordinates and unit noise per feature, shifted down by one and clipped at
/// zero so that most features are zero (as with digit images), then min-max
/// scaled to [0, 1] per feature. Examples are shuffled, then the last sixth becomes the test set
/// and the last 10% of the rest the validation set.
inline Dataset synthetic_dataset(std::uint64_t seed, std::size_t n_per_class, std::size_t num_classes,
                                 std::size_t dim) {
    if (n_per_class == 0 || num_classes == 0 || dim == 0) {
        throw DomainError("synthetic_dataset: all sizes must be positive");
    }
    Rng rng(seed);
    Matrix means(num_classes, dim);
    for (double& v : means.values()) v = rng.normal();
    const std::size_t n = n_per_class * num_classes;
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    rng.shuffle(order);

    Matrix x(n, dim);
    Labels y(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t c = order[i] % num_classes;
        y[i] = c;
        auto row = x.row(i);
        auto mu = means.row(c);
        for (std::size_t j = 0; j < dim; ++j) row[j] = std::max(0.0, mu[j] + rng.normal() - 1.0);
    }
    for (std::size_t j = 0; j < dim; ++j) {
        double lo = x(0, j);
        double hi = x(0, j);
        for (std::size_t i = 1; i < n; ++i) {
            lo = std::min(lo, x(i, j));
            hi = std::max(hi, x(i, j));
        }
        const double span = hi > lo ? hi - lo : 1.0;
        for (std::size_t i = 0; i < n; ++i) x(i, j) = std::clamp((x(i, j) - lo) / span, 0.0, 1.0);
    }

    const std::size_t n_test = n / 6;
    const std::size_t n_rest = n - n_test;
    Labels rest_y(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(n_rest));
    Dataset d = n_rest >= 3 ? split(head_rows(x, n_rest), rest_y, 0.1) : Dataset{head_rows(x, n_rest), rest_y};
    d.test_x = Matrix(n_test, dim, std::vector<double>(x.values().begin() + n_rest * dim, x.values().end()));
    d.test_y.assign(y.begin() + static_cast<std::ptrdiff_t>(n_rest), y.end());
    d.num_classes = num_classes;
    d.source = DataSource::Synthetic;
    return d;
}

}  // namespace eswish

#endif  // ESWISH_DATA_HPP
