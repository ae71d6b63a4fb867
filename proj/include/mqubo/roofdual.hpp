#pragma once

// Roof-dual bounds on the range of a QUBO objective.
//
// The objective is rewritten as a posiform
//
//   f(x) = C + sum_u c_u * u + sum_{u,v} c_uv * u * v,   c > 0,
//
// where u, v range over literals (x_i or its complement). Each quadratic term
// c*u*v becomes the arcs u -> ~v and v -> ~u with capacity c/2; a linear term
// c*u is treated as c*x0*u with x0 the source and ~x0 the sink. The roof-dual
// bound is C plus the value of a maximum flow in that implication network.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "mqubo/error.hpp"
#include "mqubo/maxflow.hpp"
#include "mqubo/qubo.hpp"
#include "mqubo/scaling_report.hpp"

namespace mqubo {

// Relative augmenting-path tolerance; multiplied by the largest arc capacity.
inline constexpr double kRoofDualEps = 1e-12;

struct RangeEstimate {
    double lower = 0.0;
    double upper = 0.0;
    double width() const noexcept { return upper - lower; }
};

namespace detail {

struct Posiform {
    double constant = 0.0;
    // Literal index: x_i -> i, ~x_i -> n + i.
    std::vector<std::pair<std::uint32_t, double>> linear;
    struct Quad {
        std::uint32_t u;
        std::uint32_t v;
        double c;
    };
    std::vector<Quad> quadratic;
};

template <SquareMatrix M>
Posiform make_posiform(const M& q) {
    const std::size_t n = q.size();
    const auto nn = static_cast<std::uint32_t>(n);
    Posiform p;
    std::vector<double> a(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = q(i, i);
    for (std::uint32_t i = 0; i < nn; ++i) {
        for (std::uint32_t j = i + 1; j < nn; ++j) {
            const double b = q(i, j) + q(j, i);
            if (b > 0.0) {
                p.quadratic.push_back({i, j, b});
            } else if (b < 0.0) {
                // b x_i x_j = b x_i - b x_i ~x_j
                a[i] += b;
                p.quadratic.push_back({i, nn + j, -b});
            }
        }
    }
    for (std::uint32_t i = 0; i < nn; ++i) {
        if (a[i] > 0.0) {
            p.linear.emplace_back(i, a[i]);
        } else if (a[i] < 0.0) {
            // a x_i = a - a ~x_i
            p.constant += a[i];
            p.linear.emplace_back(nn + i, -a[i]);
        }
    }
    return p;
}

}  // namespace detail

// Lower bound L <= min_x f(x).
template <SquareMatrix M>
double roof_dual_lower(const M& q) {
    const std::size_t n = q.size();
    const detail::Posiform p = detail::make_posiform(q);
    const auto nn = static_cast<std::uint32_t>(n);
    const std::uint32_t source = 2 * nn;
    const std::uint32_t sink = 2 * nn + 1;
    auto complement = [nn, source, sink](std::uint32_t u) -> std::uint32_t {
        if (u == source) return sink;
        if (u == sink) return source;
        return u < nn ? u + nn : u - nn;
    };

    FlowNetwork net(2 * n + 2);
    for (const auto& [u, c] : p.linear) {
        net.add_arc(source, complement(u), c / 2.0);
        net.add_arc(u, sink, c / 2.0);
    }
    for (const auto& t : p.quadratic) {
        net.add_arc(t.u, complement(t.v), t.c / 2.0);
        net.add_arc(t.v, complement(t.u), t.c / 2.0);
    }
    if (net.arcs() == 0) return p.constant;
    const double flow = net.max_flow(source, sink, kRoofDualEps * net.max_capacity());
    return p.constant + flow;
}

// lower = roof_dual_lower(Q), upper = -roof_dual_lower(-Q).
inline RangeEstimate roof_dual_range(const QuboInstance& q) {
    RangeEstimate r;
    r.lower = roof_dual_lower(q);
    r.upper = -roof_dual_lower(negated(q));
    return r;
}

inline std::pair<QuboInstance, ScalingReport> normalize_objective(const QuboInstance& q, std::size_t index) {
    const RangeEstimate range = roof_dual_range(q);
    if (!(range.width() > 0.0)) {
        throw DegenerateObjectiveError(index, "zero roof-dual range width, cannot normalize");
    }
    ScalingReport r;
    r.index = index;
    r.method = ScalingMethod::roof_dual;
    r.lower = range.lower;
    r.upper = range.upper;
    r.scale = 1.0 / range.width();
    return {scaled(q, r.scale), r};
}

// Divides every objective by its roof-dual range width. The shift by the
// lower bound is a constant and is not materialized.
inline std::pair<MultiObjectiveSet, std::vector<ScalingReport>> normalize_by_range(const MultiObjectiveSet& set) {
    std::vector<QuboInstance> out;
    std::vector<ScalingReport> reports;
    for (std::size_t k = 0; k < set.size(); ++k) {
        auto [q, r] = normalize_objective(set[k], k);
        out.push_back(std::move(q));
        reports.push_back(r);
    }
    return {MultiObjectiveSet(std::move(out)), std::move(reports)};
}

}  // namespace mqubo
