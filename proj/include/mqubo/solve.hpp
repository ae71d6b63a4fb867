#pragma once

// QUBO minimization: exhaustive Gray-code enumeration for small n, and a
// restarted single-flip simulated annealer.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mqubo/error.hpp"
#include "mqubo/parallel.hpp"
#include "mqubo/qubo.hpp"
#include "mqubo/random.hpp"

namespace mqubo {

inline constexpr std::size_t kBruteForceMaxVariables = 26;

// Current assignment plus the cached local fields
//   h_i = sum_{j != i} 2 q_ij x_j,
// so that the change from flipping bit i is (1 - 2 x_i)(q_ii + h_i) and a
// flip costs O(n).
class FlipState {
public:
    FlipState(const QuboInstance& q, BinaryVector x) : q_(&q), x_(std::move(x)), field_(q.size(), 0.0) {
        if (x_.size() != q.size()) throw DimensionError("binary vector length", q.size(), x_.size());
        const std::size_t n = q.size();
        for (std::size_t i = 0; i < n; ++i) {
            double h = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j != i && x_[j]) h += 2.0 * q(i, j);
            }
            field_[i] = h;
        }
        value_ = evaluate(q, x_);
    }

    double value() const noexcept { return value_; }
    const BinaryVector& bits() const noexcept { return x_; }

    double delta(std::size_t i) const noexcept {
        const double gain = (*q_)(i, i) + field_[i];
        return x_[i] ? -gain : gain;
    }

    void flip(std::size_t i) noexcept {
        value_ += delta(i);
        x_[i] ^= 1;
        const double dir = x_[i] ? 2.0 : -2.0;
        const auto row = q_->matrix().row(i);
        for (std::size_t j = 0; j < row.size(); ++j) field_[j] += dir * row[j];
        // The loop above also touched field_[i]; h_i excludes the i term.
        field_[i] -= dir * row[i];
    }

private:
    const QuboInstance* q_;
    BinaryVector x_;
    std::vector<double> field_;
    double value_ = 0.0;
};

struct ExactSolution {
    BinaryVector bits;
    double value = 0.0;
};

namespace detail {

inline void check_brute_force_size(std::size_t n) {
    if (n > kBruteForceMaxVariables) {
        throw InvariantError("brute force is limited to " + std::to_string(kBruteForceMaxVariables) +
                             " variables (got " + std::to_string(n) + "); use the annealer instead");
    }
}

// Absolute tie tolerance for values of q.
inline double tie_tolerance(const QuboInstance& q, double rel) {
    double mass = 0.0;
    for (const double v : q.matrix().values()) mass += std::abs(v);
    return rel * (1.0 + mass);
}

// Visits every x in Gray-code order, calling visit(state).
template <typename Visit>
void gray_code_walk(const QuboInstance& q, Visit&& visit) {
    const std::size_t n = q.size();
    FlipState state(q, BinaryVector(n, 0));
    visit(state);
    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t step = 1; step < total; ++step) {
        state.flip(static_cast<std::size_t>(std::countr_zero(step)));
        visit(state);
    }
}

}  // namespace detail

// Exact global minimizer. Among minimizers (values within a relative 1e-12 of
// the minimum) the lexicographically smallest vector wins, index 0 first.
inline ExactSolution brute_force(const QuboInstance& q) {
    detail::check_brute_force_size(q.size());
    const double tol = detail::tie_tolerance(q, 1e-12);
    ExactSolution best;
    bool have = false;
    detail::gray_code_walk(q, [&](const FlipState& s) {
        const double v = s.value();
        if (!have || v < best.value - tol) {
            best.bits = s.bits();
            best.value = v;
            have = true;
        } else if (v <= best.value + tol && s.bits() < best.bits) {
            best.bits = s.bits();
            best.value = std::min(best.value, v);
        }
    });
    best.value = evaluate(q, best.bits);
    return best;
}

// Every x whose value is within rel_tol * (1 + sum |q_ij|) of the minimum,
// sorted lexicographically.
inline std::vector<BinaryVector> brute_force_minimizers(const QuboInstance& q, double rel_tol = 1e-9) {
    detail::check_brute_force_size(q.size());
    const double tol = detail::tie_tolerance(q, rel_tol);
    double min_value = 0.0;
    bool have = false;
    detail::gray_code_walk(q, [&](const FlipState& s) {
        if (!have || s.value() < min_value) min_value = s.value();
        have = true;
    });
    std::vector<BinaryVector> out;
    detail::gray_code_walk(q, [&](const FlipState& s) {
        if (s.value() <= min_value + tol) out.push_back(s.bits());
    });
    std::sort(out.begin(), out.end());
    return out;
}

// Minimum and maximum of f over all 2^n assignments.
inline std::pair<double, double> brute_force_extremes(const QuboInstance& q) {
    detail::check_brute_force_size(q.size());
    double lo = 0.0;
    double hi = 0.0;
    detail::gray_code_walk(q, [&](const FlipState& s) {
        lo = std::min(lo, s.value());
        hi = std::max(hi, s.value());
    });
    return {lo, hi};
}

struct SolveConfig {
    std::int64_t time_limit_ms = 2000;
    // When false the annealer runs its full fixed sweep budget and the result
    // is a pure function of (instance, config). When true it also stops once
    // the wall clock passes time_limit_ms, checked after every sweep.
    bool use_time_limit = false;
    int runs = 20;
    std::uint64_t seed = 0;
    int sweeps_per_temp = 10;
    int temperatures = 200;
    // Unset means scale-aware defaults: t_start = max|q_ij| * n and
    // t_end = 1e-3 * median of the nonzero |q_ij|.
    std::optional<double> t_start;
    std::optional<double> t_end;
    // Record the best value after every sweep (for diagnostics and tests).
    bool record_trace = false;

    void validate() const {
        if (time_limit_ms <= 0) throw InvariantError("time_limit_ms must be positive");
        if (runs < 1) throw InvariantError("runs must be at least 1");
        if (sweeps_per_temp < 1) throw InvariantError("sweeps_per_temp must be at least 1");
        if (temperatures < 2) throw InvariantError("temperatures must be at least 2");
        if (t_start && !(*t_start > 0.0)) throw InvariantError("t_start must be positive");
        if (t_end && !(*t_end > 0.0)) throw InvariantError("t_end must be positive");
        if (t_start && t_end && !(*t_start > *t_end)) throw InvariantError("t_start must exceed t_end");
    }
};

struct Schedule {
    double t_start = 1.0;
    double t_end = 1e-3;
    double factor = 1.0;
};

inline Schedule make_schedule(const QuboInstance& q, const SolveConfig& cfg) {
    std::vector<double> mags;
    mags.reserve(q.matrix().values().size());
    double max_mag = 0.0;
    for (const double v : q.matrix().values()) {
        if (v != 0.0) {
            mags.push_back(std::abs(v));
            max_mag = std::max(max_mag, std::abs(v));
        }
    }
    Schedule s;
    if (!mags.empty()) {
        auto mid = mags.begin() + static_cast<std::ptrdiff_t>(mags.size() / 2);
        std::nth_element(mags.begin(), mid, mags.end());
        s.t_start = max_mag * static_cast<double>(q.size());
        s.t_end = 1e-3 * *mid;
    }
    if (cfg.t_start) s.t_start = *cfg.t_start;
    if (cfg.t_end) s.t_end = *cfg.t_end;
    if (!(s.t_start > s.t_end)) s.t_end = s.t_start * 1e-3;
    s.factor = std::pow(s.t_end / s.t_start, 1.0 / static_cast<double>(cfg.temperatures - 1));
    return s;
}

struct RunResult {
    std::uint64_t seed = 0;
    BinaryVector bits;
    double value = 0.0;
    std::uint64_t evaluations = 0;
    std::vector<double> trace;
};

struct SolveOutcome {
    BinaryVector best;
    double best_value = 0.0;
    std::vector<RunResult> runs;  // one best per run, in run order
    std::uint64_t evaluations = 0;

    std::vector<BinaryVector> all_solutions() const {
        std::vector<BinaryVector> out;
        out.reserve(runs.size());
        for (const auto& r : runs) out.push_back(r.bits);
        return out;
    }
};

inline std::uint64_t run_seed(std::uint64_t seed, std::size_t run) { return derive_seed(seed, "anneal-run", {run}); }

// One annealing run: random start, sequential single-flip Metropolis sweeps,
// geometric cooling. Returns the best assignment seen.
inline RunResult anneal_once(const QuboInstance& q, const SolveConfig& cfg, const Schedule& sched,
                             std::uint64_t seed) {
    using Clock = std::chrono::steady_clock;
    const auto deadline = Clock::now() + std::chrono::milliseconds(cfg.time_limit_ms);
    const std::size_t n = q.size();
    Xoshiro256 rng(seed);
    BinaryVector x(n);
    for (auto& b : x) b = static_cast<std::uint8_t>(rng() >> 63);

    FlipState state(q, std::move(x));
    RunResult r;
    r.seed = seed;
    r.bits = state.bits();
    r.value = state.value();

    double t = sched.t_start;
    bool stop = false;
    for (int level = 0; level < cfg.temperatures && !stop; ++level, t *= sched.factor) {
        const double inv_t = 1.0 / t;
        for (int sweep = 0; sweep < cfg.sweeps_per_temp; ++sweep) {
            for (std::size_t i = 0; i < n; ++i) {
                const double d = state.delta(i);
                ++r.evaluations;
                if (d <= 0.0 || rng.uniform() < std::exp(-d * inv_t)) {
                    state.flip(i);
                    if (state.value() < r.value) {
                        r.value = state.value();
                        r.bits = state.bits();
                    }
                }
            }
            if (cfg.record_trace) r.trace.push_back(r.value);
            if (cfg.use_time_limit && Clock::now() >= deadline) {
                stop = true;
                break;
            }
        }
    }
    r.value = evaluate(q, r.bits);
    return r;
}

// cfg.runs independent runs with seeds run_seed(cfg.seed, r). Runs execute on
// up to `jobs` threads; results are ordered by run index.
inline SolveOutcome anneal(const QuboInstance& q, const SolveConfig& cfg, std::size_t jobs = 1) {
    cfg.validate();
    const Schedule sched = make_schedule(q, cfg);
    SolveOutcome out;
    out.runs.resize(static_cast<std::size_t>(cfg.runs));
    parallel_for(out.runs.size(), jobs,
                 [&](std::size_t r) { out.runs[r] = anneal_once(q, cfg, sched, run_seed(cfg.seed, r)); });
    std::size_t best = 0;
    for (std::size_t r = 0; r < out.runs.size(); ++r) {
        out.evaluations += out.runs[r].evaluations;
        if (out.runs[r].value < out.runs[best].value) best = r;
    }
    out.best = out.runs[best].bits;
    out.best_value = out.runs[best].value;
    return out;
}

}  // namespace mqubo
