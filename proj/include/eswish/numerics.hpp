// Copyright 2026 The eswish Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef ESWISH_NUMERICS_HPP
#define ESWISH_NUMERICS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <initializer_list>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "eswish/error.hpp"

namespace eswish {

/// Dense row-major matrix of doubles. Every vector quantity in the library
/// (inputs, weights, biases, activations) lives in one of these.
class Matrix {
public:
    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (data_.size() != rows_ * cols_) {
            throw ShapeError("matrix data length " + std::to_string(data_.size()) +
                             " does not match shape " + shape_string(rows_, cols_));
        }
    }

    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
        const std::size_t r = rows.size();
        const std::size_t c = r == 0 ? 0 : rows.begin()->size();
        std::vector<double> data;
        data.reserve(r * c);
        for (const auto& row : rows) {
            if (row.size() != c) throw ShapeError("ragged initializer for Matrix");
            data.insert(data.end(), row.begin(), row.end());
        }
        return Matrix(r, c, std::move(data));
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    std::span<double> values() noexcept { return data_; }
    std::span<const double> values() const noexcept { return data_; }

    std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const noexcept {
        return {data_.data() + r * cols_, cols_};
    }

    std::string shape() const { return shape_string(rows_, cols_); }

    static std::string shape_string(std::size_t r, std::size_t c) {
        return "(" + std::to_string(r) + "x" + std::to_string(c) + ")";
    }

    friend bool operator==(const Matrix&, const Matrix&) = default;

    friend std::ostream& operator<<(std::ostream& os, const Matrix& m) {
        os << m.shape() << "[";
        for (std::size_t i = 0; i < m.size(); ++i) os << (i ? ", " : "") << m.data_[i];
        return os << "]";
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

inline bool all_finite(const Matrix& m) {
    for (double v : m.values()) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

inline void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw ShapeError(std::string(op) + ": shape mismatch " + a.shape() + " vs " + b.shape());
    }
}

namespace detail {

/// c (m x n, row-major) = A * b where A(i, k) = a[i * a_row + k * a_col] and
/// b is k x n row-major. Each output sums k in increasing order, so results do
/// not depend on the tiling.
inline void gemm(std::size_t m, std::size_t n, std::size_t kk, const double* a, std::size_t a_row,
                 std::size_t a_col, const double* b, double* c) {
    // Mostly-zero operands (raw pixels, ReLU outputs) are cheaper row by row
    // with the zero terms skipped; skipping them leaves every sum unchanged.
    std::size_t zeros = 0;
    for (std::size_t e = 0; e < m * kk; ++e) zeros += a[e] == 0.0;  // a is dense either way round
    if (2 * zeros > m * kk) {
        for (std::size_t i = 0; i < m; ++i) {
            double* crow = c + i * n;
            for (std::size_t k = 0; k < kk; ++k) {
                const double aik = a[i * a_row + k * a_col];
                if (aik == 0.0) continue;
                const double* bk = b + k * n;
                for (std::size_t j = 0; j < n; ++j) crow[j] += aik * bk[j];
            }
        }
        return;
    }
    constexpr std::size_t kRows = 4;
    constexpr std::size_t kCols = 8;
    const std::size_t m_main = m - m % kRows;
    const std::size_t n_main = n - n % kCols;
    // Four vector lanes per register; the compiler lowers this to whatever
    // SIMD width the target offers.
    typedef double Lane4 __attribute__((vector_size(32)));
    for (std::size_t i0 = 0; i0 < m_main; i0 += kRows) {
        for (std::size_t j0 = 0; j0 < n_main; j0 += kCols) {
            Lane4 acc[kRows][2] = {};
            for (std::size_t k = 0; k < kk; ++k) {
                Lane4 b0;
                Lane4 b1;
                std::memcpy(&b0, b + k * n + j0, sizeof b0);
                std::memcpy(&b1, b + k * n + j0 + 4, sizeof b1);
                for (std::size_t r = 0; r < kRows; ++r) {
                    const double ar = a[(i0 + r) * a_row + k * a_col];
                    acc[r][0] += ar * b0;
                    acc[r][1] += ar * b1;
                }
            }
            for (std::size_t r = 0; r < kRows; ++r) {
                std::memcpy(c + (i0 + r) * n + j0, &acc[r][0], sizeof(Lane4));
                std::memcpy(c + (i0 + r) * n + j0 + 4, &acc[r][1], sizeof(Lane4));
            }
        }
    }
    // Ragged edges: remaining columns of the blocked rows, then remaining rows.
    auto edge = [&](std::size_t i_begin, std::size_t i_end, std::size_t j_begin) {
        for (std::size_t i = i_begin; i < i_end; ++i) {
            double* crow = c + i * n;
            for (std::size_t k = 0; k < kk; ++k) {
                const double aik = a[i * a_row + k * a_col];
                const double* bk = b + k * n;
                for (std::size_t j = j_begin; j < n; ++j) crow[j] += aik * bk[j];
            }
        }
    };
    if (n_main < n) edge(0, m_main, n_main);
    edge(m_main, m, 0);
}

}  // namespace detail

/// c = a * b.
inline Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) {
        throw ShapeError("matmul: incompatible shapes " + a.shape() + " * " + b.shape());
    }
    Matrix c(a.rows(), b.cols());
    detail::gemm(a.rows(), b.cols(), a.cols(), a.values().data(), a.cols(), 1, b.values().data(), c.values().data());
    return c;
}

/// c = transpose(a) * b without materializing the transpose.
inline Matrix matmul_tn(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows()) {
        throw ShapeError("matmul_tn: incompatible shapes " + a.shape() + "^T * " + b.shape());
    }
    Matrix c(a.cols(), b.cols());
    detail::gemm(a.cols(), b.cols(), a.rows(), a.values().data(), 1, a.cols(), b.values().data(), c.values().data());
    return c;
}

inline Matrix transpose(const Matrix& a) {
    Matrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    }
    return t;
}

/// c = a * transpose(b).
inline Matrix matmul_nt(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.cols()) {
        throw ShapeError("matmul_nt: incompatible shapes " + a.shape() + " * " + b.shape() + "^T");
    }
    return matmul(a, transpose(b));
}

/// Sum over rows, returned as a 1 x cols matrix.
inline Matrix column_sums(const Matrix& a) {
    Matrix s(1, a.cols());
    double* out = s.row(0).data();
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const double* r = a.row(i).data();
        for (std::size_t j = 0; j < a.cols(); ++j) out[j] += r[j];
    }
    return s;
}

/// Adds the 1 x cols row vector `bias` to every row of `a` in place.
inline void add_row_inplace(Matrix& a, const Matrix& bias) {
    if (bias.rows() != 1 || bias.cols() != a.cols()) {
        throw ShapeError("row broadcast: bias " + bias.shape() + " does not fit " + a.shape());
    }
    const double* b = bias.row(0).data();
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double* r = a.row(i).data();
        for (std::size_t j = 0; j < a.cols(); ++j) r[j] += b[j];
    }
}

inline Matrix hadamard(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b, "hadamard");
    Matrix c = a;
    auto cv = c.values();
    auto bv = b.values();
    for (std::size_t i = 0; i < cv.size(); ++i) cv[i] *= bv[i];
    return c;
}

/// Copies the listed rows of `a` into a new matrix, in order.
inline Matrix gather_rows(const Matrix& a, std::span<const std::size_t> indices) {
    Matrix out(indices.size(), a.cols());
    for (std::size_t i = 0; i < indices.size(); ++i) {
        auto src = a.row(indices[i]);
        std::copy(src.begin(), src.end(), out.row(i).begin());
    }
    return out;
}

/// Deterministic random source. The engine is std::mt19937_64, whose output
/// sequence is fixed by the C++ standard; all conversions to floating point
/// and integer ranges are done here rather than through <random>
/// distributions, whose algorithms vary between standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const noexcept { return seed_; }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer on [0, n), unbiased by rejection.
    std::uint64_t index(std::uint64_t n) {
        if (n == 0) throw DomainError("Rng::index: empty range");
        const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % n);
        std::uint64_t v;
        do {
            v = engine_();
        } while (v >= limit);
        return v % n;
    }

    /// Standard normal via the Box-Muller transform.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * 3.14159265358979323846 * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

    /// Fisher-Yates shuffle driven by index().
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(index(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

inline double glorot_limit(std::size_t fan_in, std::size_t fan_out) {
    return std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
}

/// fan_in x fan_out matrix with entries uniform on [-L, L],
/// L = sqrt(6 / (fan_in + fan_out)).
inline Matrix glorot_uniform(std::size_t fan_in, std::size_t fan_out, Rng& rng) {
    if (fan_in == 0 || fan_out == 0) {
        throw DomainError("glorot_uniform: fans must be positive, got fan_in=" +
                          std::to_string(fan_in) + " fan_out=" + std::to_string(fan_out));
    }
    const double limit = glorot_limit(fan_in, fan_out);
    Matrix w(fan_in, fan_out);
    for (double& v : w.values()) v = rng.uniform(-limit, limit);
    return w;
}

}  // namespace eswish

#endif  // ESWISH_NUMERICS_HPP
