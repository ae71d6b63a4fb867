#pragma once

#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mqubo/error.hpp"

namespace mqubo {

// Assignment of n binary variables, entries exactly 0 or 1.
using BinaryVector = std::vector<std::uint8_t>;

// Anything that looks like a square real matrix: size() and (i, j) access.
template <typename M>
concept SquareMatrix = requires(const M& m, std::size_t i) {
    { m.size() } -> std::convertible_to<std::size_t>;
    { m(i, i) } -> std::convertible_to<double>;
};

// Dense row-major n x n matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    explicit Matrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}

    Matrix(std::size_t n, std::vector<double> row_major) : n_(n), data_(std::move(row_major)) {
        if (data_.size() != n_ * n_) {
            throw DimensionError("matrix data length", n_ * n_, data_.size());
        }
    }

    std::size_t size() const noexcept { return n_; }

    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * n_ + j]; }

    std::span<const double> row(std::size_t i) const noexcept { return {data_.data() + i * n_, n_}; }
    std::span<const double> values() const noexcept { return data_; }

    Matrix transposed() const {
        Matrix t(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = 0; j < n_; ++j) {
                t(j, i) = (*this)(i, j);
            }
        }
        return t;
    }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

// A canonical QUBO objective f(x) = x^T Q x with Q symmetric and finite.
// Immutable after construction.
class QuboInstance {
public:
    QuboInstance() = default;

    // Takes ownership of an already symmetric matrix. Throws InvariantError if
    // any entry is non-finite or q(i, j) != q(j, i).
    static QuboInstance from_symmetric(Matrix q, std::string label = {}) {
        if (q.size() == 0) {
            throw InvariantError("QUBO instance must have at least one variable");
        }
        for (std::size_t i = 0; i < q.size(); ++i) {
            for (std::size_t j = 0; j < q.size(); ++j) {
                if (!std::isfinite(q(i, j))) {
                    throw InvariantError("non-finite coefficient at (" + std::to_string(i) + ", " +
                                         std::to_string(j) + ")");
                }
                if (j > i && q(i, j) != q(j, i)) {
                    throw InvariantError("matrix is not symmetric at (" + std::to_string(i) + ", " +
                                         std::to_string(j) + ")");
                }
            }
        }
        QuboInstance out;
        out.q_ = std::move(q);
        out.label_ = std::move(label);
        return out;
    }

    std::size_t size() const noexcept { return q_.size(); }
    double operator()(std::size_t i, std::size_t j) const noexcept { return q_(i, j); }
    const Matrix& matrix() const noexcept { return q_; }
    const std::string& label() const noexcept { return label_; }

    friend bool operator==(const QuboInstance&, const QuboInstance&) = default;

private:
    Matrix q_;
    std::string label_;
};

// x^T M x over the full double sum, for any square matrix (symmetric or not).
template <SquareMatrix M>
double evaluate(const M& q, std::span<const std::uint8_t> x) {
    const std::size_t n = q.size();
    if (x.size() != n) {
        throw DimensionError("binary vector length", n, x.size());
    }
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!x[i]) continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (x[j]) total += q(i, j);
        }
    }
    return total;
}

// Canonicalizes a raw square matrix: q(i, j) = (raw(i, j) + raw(j, i)) / 2.
// The objective value is unchanged for every x.
inline QuboInstance symmetrize(const Matrix& raw, std::string label = {}) {
    const std::size_t n = raw.size();
    Matrix q(n);
    for (std::size_t i = 0; i < n; ++i) {
        q(i, i) = raw(i, i);
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = (raw(i, j) + raw(j, i)) / 2.0;
            q(i, j) = v;
            q(j, i) = v;
        }
    }
    return QuboInstance::from_symmetric(std::move(q), std::move(label));
}

// Nested row-major input, e.g. {{0, 2}, {0, 0}}. Rejects ragged rows.
inline Matrix matrix_from_rows(const std::vector<std::vector<double>>& rows) {
    const std::size_t n = rows.size();
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != n) {
            throw DimensionError("matrix row " + std::to_string(i) + " length", n, rows[i].size());
        }
        for (std::size_t j = 0; j < n; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

inline QuboInstance scaled(const QuboInstance& q, double alpha) {
    Matrix m = q.matrix();
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t j = 0; j < m.size(); ++j) m(i, j) *= alpha;
    }
    return QuboInstance::from_symmetric(std::move(m), q.label());
}

inline QuboInstance negated(const QuboInstance& q) { return scaled(q, -1.0); }

// Ordered list of m >= 2 objectives over the same n variables.
class MultiObjectiveSet {
public:
    MultiObjectiveSet() = default;

    explicit MultiObjectiveSet(std::vector<QuboInstance> objectives) : objectives_(std::move(objectives)) {
        if (objectives_.size() < 2) {
            throw InvariantError("a multi-objective set needs at least 2 objectives, got " +
                                 std::to_string(objectives_.size()));
        }
        for (std::size_t k = 1; k < objectives_.size(); ++k) {
            if (objectives_[k].size() != objectives_[0].size()) {
                throw DimensionError("objective " + std::to_string(k) + " variable count",
                                     objectives_[0].size(), objectives_[k].size());
            }
        }
    }

    std::size_t size() const noexcept { return objectives_.size(); }
    std::size_t variables() const noexcept { return objectives_.empty() ? 0 : objectives_[0].size(); }
    const QuboInstance& operator[](std::size_t k) const { return objectives_[k]; }
    const std::vector<QuboInstance>& objectives() const noexcept { return objectives_; }

    auto begin() const noexcept { return objectives_.begin(); }
    auto end() const noexcept { return objectives_.end(); }

private:
    std::vector<QuboInstance> objectives_;
};

// F(x): one objective value per member of the set.
inline std::vector<double> evaluate_all(const MultiObjectiveSet& set, std::span<const std::uint8_t> x) {
    std::vector<double> out;
    out.reserve(set.size());
    for (const auto& q : set) out.push_back(evaluate(q, x));
    return out;
}

// Elementwise sum of w_k * Q_k. With all weights 1 this is the plain summed
// objective. Additive constants never enter a QUBO matrix; they do not move
// the argmin, so none is tracked here.
inline QuboInstance scalarize(const MultiObjectiveSet& set, std::span<const double> weights) {
    if (weights.size() != set.size()) {
        throw DimensionError("weight count", set.size(), weights.size());
    }
    for (std::size_t k = 0; k < weights.size(); ++k) {
        if (!(weights[k] > 0.0) || !std::isfinite(weights[k])) {
            throw InvariantError("weight " + std::to_string(k) + " must be positive and finite, got " +
                                 std::to_string(weights[k]));
        }
    }
    const std::size_t n = set.variables();
    Matrix acc(n);
    std::string label;
    for (std::size_t k = 0; k < set.size(); ++k) {
        const Matrix& q = set[k].matrix();
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) acc(i, j) += weights[k] * q(i, j);
        }
        label += (k ? "+" : "") + set[k].label();
    }
    return QuboInstance::from_symmetric(std::move(acc), std::move(label));
}

inline QuboInstance scalarize_equal(const MultiObjectiveSet& set) {
    const std::vector<double> ones(set.size(), 1.0);
    return scalarize(set, ones);
}

// "0101..." with index 0 leftmost.
inline std::string to_bit_string(std::span<const std::uint8_t> x) {
    std::string s(x.size(), '0');
    for (std::size_t i = 0; i < x.size(); ++i) s[i] = x[i] ? '1' : '0';
    return s;
}

inline BinaryVector from_bit_string(std::string_view s) {
    BinaryVector x(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '0' && s[i] != '1') {
            throw InvariantError("bit string contains '" + std::string(1, s[i]) + "' at position " +
                                 std::to_string(i));
        }
        x[i] = static_cast<std::uint8_t>(s[i] == '1');
    }
    return x;
}

}  // namespace mqubo
