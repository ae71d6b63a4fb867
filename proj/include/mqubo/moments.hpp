#pragma once

// Exact moments of a QUBO objective f(X) = X^T Q X when X is uniform over
// {0,1}^n (equivalently, n independent Bernoulli(1/2) variables).

#include <array>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "mqubo/error.hpp"
#include "mqubo/qubo.hpp"
#include "mqubo/scaling_report.hpp"

namespace mqubo {

enum class Summation { plain, compensated };

namespace detail {

// Neumaier's variant of Kahan summation.
class CompensatedSum {
public:
    void add(double v) noexcept {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v)) {
            comp_ += (sum_ - t) + v;
        } else {
            comp_ += (v - t) + sum_;
        }
        sum_ = t;
    }
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

template <SquareMatrix M>
std::pair<std::vector<double>, std::vector<double>> dense_rows_and_cols(const M& q) {
    const std::size_t n = q.size();
    std::vector<double> rows(n * n), cols(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            rows[i * n + j] = q(i, j);
            cols[j * n + i] = q(i, j);
        }
    }
    return {std::move(rows), std::move(cols)};
}

}  // namespace detail

// E[f(X)] = 1/2 sum_i Q_ii + 1/4 sum_{i != j} Q_ij. O(n^2).
template <SquareMatrix M>
double mean_uniform(const M& q) {
    const std::size_t n = q.size();
    double diag = 0.0;
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) {
                diag += q(i, i);
            } else {
                off += q(i, j);
            }
        }
    }
    return 0.5 * diag + 0.25 * off;
}

// E[f(X)^2] = sum_{i,j,k,l} Q_ij Q_kl 2^-|{i,j,k,l}|. Direct O(n^4) sum;
// meant as a reference path for n up to ~150.
template <SquareMatrix M>
double second_moment_uniform(const M& q) {
    const std::size_t n = q.size();
    constexpr std::array<double, 5> inv_pow2{1.0, 0.5, 0.25, 0.125, 0.0625};
    const auto rows = detail::dense_rows_and_cols(q).first;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double qij = rows[i * n + j];
            const std::size_t ij = (i == j) ? 1 : 2;
            for (std::size_t k = 0; k < n; ++k) {
                const std::size_t ijk = ij + ((k != i && k != j) ? 1 : 0);
                const double* row_k = rows.data() + k * n;
                double acc = 0.0;
                for (std::size_t l = 0; l < n; ++l) {
                    const bool fresh = l != i && l != j && l != k;
                    acc += row_k[l] * inv_pow2[ijk + (fresh ? 1 : 0)];
                }
                total += qij * acc;
            }
        }
    }
    return total;
}

// Var(f(X)) in O(n^3):
//
//   v = sum_{i != j} Q_ij (Q_ij + Q_ji) / 16
//     + sum_{i,j,k} Q_ij (Q_ki + Q_kj + Q_ik + Q_jk) / 16
//
// with k running over every index, i and j included. Valid for asymmetric Q
// as well. Column reads go through a transposed copy so the k loop is
// contiguous.
template <SquareMatrix M>
double variance_fast(const M& q, Summation mode = Summation::plain) {
    const std::size_t n = q.size();
    const auto [rows, cols] = detail::dense_rows_and_cols(q);
    detail::CompensatedSum comp_total;
    double plain_total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double* row_i = rows.data() + i * n;
        const double* col_i = cols.data() + i * n;
        for (std::size_t j = 0; j < n; ++j) {
            const double qij = row_i[j];
            const double* row_j = rows.data() + j * n;
            const double* col_j = cols.data() + j * n;
            double pair = 0.0;
            if (i != j) pair = qij * (qij + rows[j * n + i]) / 16.0;
            double inner;
            if (mode == Summation::compensated) {
                detail::CompensatedSum s;
                for (std::size_t k = 0; k < n; ++k) s.add(col_i[k] + col_j[k] + row_i[k] + row_j[k]);
                inner = s.value();
                comp_total.add(pair);
                comp_total.add(qij * inner / 16.0);
            } else {
                inner = 0.0;
                for (std::size_t k = 0; k < n; ++k) inner += col_i[k] + col_j[k] + row_i[k] + row_j[k];
                plain_total += pair + qij * inner / 16.0;
            }
        }
    }
    const double v = (mode == Summation::compensated) ? comp_total.value() : plain_total;
    // Rounding can leave a tiny negative value for near-constant objectives.
    return v < 0.0 ? 0.0 : v;
}

struct MomentSummary {
    double mean = 0.0;
    double second_moment = 0.0;
    double variance = 0.0;
    double std_dev = 0.0;
};

// Mean and variance via the fast paths; the second moment is mean^2 + variance.
template <SquareMatrix M>
MomentSummary moments(const M& q, Summation mode = Summation::plain) {
    MomentSummary s;
    s.mean = mean_uniform(q);
    s.variance = variance_fast(q, mode);
    s.std_dev = std::sqrt(s.variance);
    s.second_moment = s.variance + s.mean * s.mean;
    return s;
}

// Q / sigma for one objective; `index` only labels the report and the error.
inline std::pair<QuboInstance, ScalingReport> standardize_objective(const QuboInstance& q, std::size_t index,
                                                                    Summation mode = Summation::plain) {
    const MomentSummary s = moments(q, mode);
    if (!(s.variance > 0.0)) {
        throw DegenerateObjectiveError(index, "zero variance, cannot standardize");
    }
    ScalingReport r;
    r.index = index;
    r.method = ScalingMethod::standardize;
    r.mean = s.mean;
    r.variance = s.variance;
    r.sigma = s.std_dev;
    r.scale = 1.0 / s.std_dev;

    Matrix m = q.matrix();
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t j = 0; j < m.size(); ++j) m(i, j) /= s.std_dev;
    }
    return {QuboInstance::from_symmetric(std::move(m), q.label()), r};
}

// Scales every objective to unit variance: Q_k / sigma_k. The mean shift is a
// constant and is not materialized.
inline std::pair<MultiObjectiveSet, std::vector<ScalingReport>> standardize(const MultiObjectiveSet& set,
                                                                            Summation mode = Summation::plain) {
    std::vector<QuboInstance> out;
    std::vector<ScalingReport> reports;
    for (std::size_t k = 0; k < set.size(); ++k) {
        auto [q, r] = standardize_objective(set[k], k, mode);
        out.push_back(std::move(q));
        reports.push_back(r);
    }
    return {MultiObjectiveSet(std::move(out)), std::move(reports)};
}

}  // namespace mqubo
