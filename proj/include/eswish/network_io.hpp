// Copyright 2026 The eswish Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef ESWISH_NETWORK_IO_HPP
#define ESWISH_NETWORK_IO_HPP

// Binary weight file layout (all integers little-endian):
//
//   "ESWNET1\0"                      8-byte magic
//   u32 layer_count
//   per layer, a u32 type tag then its dims:
//     0 Dense       u32 in, u32 out
//     1 BatchNorm   u32 features, f64 epsilon
//     2 Dropout     f64 rate
//     3 Activation  u32 kind, f64 beta, f64 elu_alpha
//   then f64 payloads in layer order:
//     Dense         weights (row-major, in x out), bias (out)
//     BatchNorm     gamma, shift, running_mean, running_var (features each)

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "eswish/error.hpp"
#include "eswish/network.hpp"

namespace eswish {

inline constexpr char kWeightsMagic[8] = {'E', 'S', 'W', 'N', 'E', 'T', '1', '\0'};

namespace detail {

class ByteWriter {
public:
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) bytes_.push_back(static_cast<unsigned char>(v >> (8 * i)));
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) bytes_.push_back(static_cast<unsigned char>(v >> (8 * i)));
    }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
    void matrix(const Matrix& m) {
        for (double v : m.values()) f64(v);
    }
    void raw(const char* p, std::size_t n) { bytes_.insert(bytes_.end(), p, p + n); }
    const std::vector<unsigned char>& bytes() const noexcept { return bytes_; }

private:
    std::vector<unsigned char> bytes_;
};

class ByteReader {
public:
    explicit ByteReader(const std::vector<unsigned char>& bytes) : bytes_(bytes) {}

    void need(std::size_t n) const {
        if (pos_ + n > bytes_.size()) {
            throw ParseError(ParseErrorKind::Truncated,
                             "weights file truncated at byte " + std::to_string(pos_) + " (need " +
                                 std::to_string(n) + " more, have " +
                                 std::to_string(bytes_.size() - pos_) + ")");
        }
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes_[pos_ + i]) << (8 * i);
        pos_ += 4;
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes_[pos_ + i]) << (8 * i);
        pos_ += 8;
        return v;
    }
    double f64() { return std::bit_cast<double>(u64()); }
    void fill(Matrix& m) {
        need(8 * m.size());
        for (double& v : m.values()) v = f64();
    }
    bool at_end() const noexcept { return pos_ == bytes_.size(); }
    std::size_t position() const noexcept { return pos_; }
    const unsigned char* current() const noexcept { return bytes_.data() + pos_; }
    void skip(std::size_t n) {
        need(n);
        pos_ += n;
    }

private:
    const std::vector<unsigned char>& bytes_;
    std::size_t pos_ = 0;
};

enum class LayerTag : std::uint32_t { Dense = 0, BatchNorm = 1, Dropout = 2, Activation = 3 };

}  // namespace detail

inline std::vector<unsigned char> encode_weights(const Network& net) {
    detail::ByteWriter w;
    w.raw(kWeightsMagic, sizeof kWeightsMagic);
    w.u32(static_cast<std::uint32_t>(net.layers().size()));
    for (const auto& layer : net.layers()) {
        if (const auto* d = std::get_if<DenseLayer>(&layer)) {
            w.u32(static_cast<std::uint32_t>(detail::LayerTag::Dense));
            w.u32(static_cast<std::uint32_t>(d->weights.rows()));
            w.u32(static_cast<std::uint32_t>(d->weights.cols()));
        } else if (const auto* b = std::get_if<BatchNormLayer>(&layer)) {
            w.u32(static_cast<std::uint32_t>(detail::LayerTag::BatchNorm));
            w.u32(static_cast<std::uint32_t>(b->gamma.cols()));
            w.f64(b->epsilon);
        } else if (const auto* o = std::get_if<DropoutLayer>(&layer)) {
            w.u32(static_cast<std::uint32_t>(detail::LayerTag::Dropout));
            w.f64(o->rate);
        } else {
            const auto& a = std::get<ActivationLayer>(layer).activation;
            w.u32(static_cast<std::uint32_t>(detail::LayerTag::Activation));
            w.u32(static_cast<std::uint32_t>(a.kind));
            w.f64(a.beta);
            w.f64(a.elu_alpha);
        }
    }
    for (const auto& layer : net.layers()) {
        if (const auto* d = std::get_if<DenseLayer>(&layer)) {
            w.matrix(d->weights);
            w.matrix(d->bias);
        } else if (const auto* b = std::get_if<BatchNormLayer>(&layer)) {
            w.matrix(b->gamma);
            w.matrix(b->shift);
            w.matrix(b->running_mean);
            w.matrix(b->running_var);
        }
    }
    return w.bytes();
}

inline Network decode_weights(const std::vector<unsigned char>& bytes) {
    detail::ByteReader r(bytes);
    r.need(sizeof kWeightsMagic);
    if (std::memcmp(r.current(), kWeightsMagic, sizeof kWeightsMagic) != 0) {
        throw ParseError(ParseErrorKind::WrongMagic, "weights file: bad magic, expected ESWNET1");
    }
    r.skip(sizeof kWeightsMagic);
    const std::uint32_t count = r.u32();
    std::vector<Layer> layers;
    for (std::uint32_t i = 0; i < count; ++i) {
        const std::uint32_t tag = r.u32();
        switch (static_cast<detail::LayerTag>(tag)) {
            case detail::LayerTag::Dense: {
                const std::uint32_t in = r.u32();
                const std::uint32_t out = r.u32();
                layers.emplace_back(DenseLayer{Matrix(in, out), Matrix(1, out)});
                break;
            }
            case detail::LayerTag::BatchNorm: {
                BatchNormLayer bn = BatchNormLayer::identity(r.u32());
                bn.epsilon = r.f64();
                layers.emplace_back(std::move(bn));
                break;
            }
            case detail::LayerTag::Dropout:
                layers.emplace_back(DropoutLayer{r.f64()});
                break;
            case detail::LayerTag::Activation: {
                const std::uint32_t kind = r.u32();
                if (kind > static_cast<std::uint32_t>(ActivationKind::Linear)) {
                    throw ParseError(ParseErrorKind::Malformed,
                                     "weights file: unknown activation kind " + std::to_string(kind));
                }
                ActivationSpec spec{static_cast<ActivationKind>(kind), 1.0, 1.0};
                spec.beta = r.f64();
                spec.elu_alpha = r.f64();
                layers.emplace_back(ActivationLayer{spec});
                break;
            }
            default:
                throw ParseError(ParseErrorKind::Malformed,
                                 "weights file: unknown layer tag " + std::to_string(tag) +
                                     " for layer " + std::to_string(i));
        }
    }
    for (auto& layer : layers) {
        if (auto* d = std::get_if<DenseLayer>(&layer)) {
            r.fill(d->weights);
            r.fill(d->bias);
        } else if (auto* b = std::get_if<BatchNormLayer>(&layer)) {
            r.fill(b->gamma);
            r.fill(b->shift);
            r.fill(b->running_mean);
            r.fill(b->running_var);
        }
    }
    if (!r.at_end()) {
        throw ParseError(ParseErrorKind::Malformed, "weights file: trailing bytes after payload");
    }
    try {
        return Network(std::move(layers));
    } catch (const ConfigError& e) {
        throw ParseError(ParseErrorKind::Malformed, std::string("weights file: ") + e.what());
    }
}

inline void save_weights(const Network& net, const std::string& path) {
    const auto bytes = encode_weights(net);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("failed writing '" + path + "'");
}

inline Network load_weights(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode_weights(bytes);
}

}  // namespace eswish

#endif  // ESWISH_NETWORK_IO_HPP
