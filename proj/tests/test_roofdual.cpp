#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "mqubo/maxflow.hpp"
#include "mqubo/roofdual.hpp"
#include "mqubo/solve.hpp"
#include "test_support.hpp"

namespace mqubo {
namespace {

using testing::enumerate;
using testing::random_instance;
using testing::random_submodular;

struct LpCase {
    std::size_t n;
    std::vector<double> q;
    double lp_lower;
    double lp_upper;
    double exact_min;
    double exact_max;
};

// Roof-dual values from an independent LP relaxation (tests/oracles).
const std::vector<LpCase> kLpCases = {
#include "data/roof_dual_cases.inc"
};

QuboInstance from_row_major(std::size_t n, const std::vector<double>& v) {
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) m(i, j) = v[i * n + j];
    }
    return QuboInstance::from_symmetric(std::move(m));
}

TEST(MaxFlow, SmallNetwork) {
    FlowNetwork net(4);
    net.add_arc(0, 1, 3);
    net.add_arc(0, 2, 2);
    net.add_arc(1, 2, 5);
    net.add_arc(1, 3, 2);
    net.add_arc(2, 3, 3);
    EXPECT_DOUBLE_EQ(net.max_flow(0, 3, 1e-12), 5.0);
}

TEST(MaxFlow, DisconnectedIsZero) {
    FlowNetwork net(4);
    net.add_arc(0, 1, 3);
    net.add_arc(2, 3, 3);
    EXPECT_EQ(net.max_flow(0, 3, 1e-12), 0.0);
}

TEST(RoofDual, HandValues) {
    const auto pos = symmetrize(matrix_from_rows({{1, 0}, {0, 2}}));
    EXPECT_EQ(roof_dual_lower(pos), 0.0);
    EXPECT_DOUBLE_EQ(roof_dual_lower(symmetrize(matrix_from_rows({{-1}}))), -1.0);
    const auto r = roof_dual_range(symmetrize(matrix_from_rows({{1}})));
    EXPECT_DOUBLE_EQ(r.lower, 0.0);
    EXPECT_DOUBLE_EQ(r.upper, 1.0);
    const auto z = roof_dual_range(QuboInstance::from_symmetric(Matrix(3)));
    EXPECT_EQ(z.lower, 0.0);
    EXPECT_EQ(z.upper, 0.0);
}

TEST(RoofDual, MatchesLpRelaxationOracle) {
    ASSERT_FALSE(kLpCases.empty());
    std::size_t gaps = 0;
    for (const auto& c : kLpCases) {
        const auto q = from_row_major(c.n, c.q);
        const RangeEstimate r = roof_dual_range(q);
        const double tol = 1e-7 * (1.0 + std::abs(c.lp_lower) + std::abs(c.lp_upper));
        EXPECT_NEAR(r.lower, c.lp_lower, tol);
        EXPECT_NEAR(r.upper, c.lp_upper, tol);
        if (c.lp_lower < c.exact_min - 1e-9) ++gaps;
    }
    // The data set must exercise the non-tight case too.
    EXPECT_GT(gaps, 0U);
}

TEST(Properties, SandwichAgainstEnumeration) {
    Xoshiro256 rng(41);
    for (int trial = 0; trial < 200; ++trial) {
        const auto q = random_instance(rng, 1 + rng.below(14));
        const auto e = enumerate(q);
        const RangeEstimate r = roof_dual_range(q);
        const double tol = 1e-9 * (1.0 + std::abs(e.min) + std::abs(e.max));
        ASSERT_LE(r.lower, e.min + tol) << "trial " << trial;
        ASSERT_GE(r.upper, e.max - tol) << "trial " << trial;
        ASSERT_LE(r.lower, r.upper);
    }
}

TEST(Properties, ExactOnSubmodular) {
    Xoshiro256 rng(42);
    for (int trial = 0; trial < 100; ++trial) {
        const auto q = random_submodular(rng, 1 + rng.below(12));
        const auto e = enumerate(q);
        ASSERT_NEAR(roof_dual_lower(q), e.min, 1e-9 * (1.0 + std::abs(e.min))) << "trial " << trial;
    }
}

TEST(Properties, ScaleEquivariance) {
    Xoshiro256 rng(43);
    for (int trial = 0; trial < 30; ++trial) {
        const auto q = random_instance(rng, 2 + rng.below(12));
        const double alpha = std::pow(10.0, -2.0 + 4.0 * rng.uniform());
        const RangeEstimate a = roof_dual_range(q);
        const RangeEstimate b = roof_dual_range(scaled(q, alpha));
        const double tol = 1e-9 * alpha * (1.0 + a.width());
        EXPECT_NEAR(b.lower, alpha * a.lower, tol);
        EXPECT_NEAR(b.upper, alpha * a.upper, tol);
    }
}

TEST(NormalizeByRange, HandValue) {
    const auto q = symmetrize(matrix_from_rows({{2}}));
    const auto [set, reports] = normalize_by_range(MultiObjectiveSet({q, q}));
    EXPECT_DOUBLE_EQ(set[0](0, 0), 1.0);
    EXPECT_EQ(reports[1].method, ScalingMethod::roof_dual);
    EXPECT_DOUBLE_EQ(*reports[1].lower, 0.0);
    EXPECT_DOUBLE_EQ(*reports[1].upper, 2.0);
}

TEST(NormalizeByRange, ZeroMatrixFailsWithIndex) {
    const auto q = symmetrize(matrix_from_rows({{2, 0}, {0, 1}}));
    try {
        (void)normalize_by_range(MultiObjectiveSet({QuboInstance::from_symmetric(Matrix(2)), q}));
        FAIL() << "expected DegenerateObjectiveError";
    } catch (const DegenerateObjectiveError& e) {
        EXPECT_EQ(e.index(), 0U);
    }
}

TEST(NormalizeByRange, ScaledWidthIsOne) {
    Xoshiro256 rng(44);
    const MultiObjectiveSet set({random_instance(rng, 10), random_instance(rng, 10, -50, 50)});
    const auto [out, reports] = normalize_by_range(set);
    for (const auto& q : out) EXPECT_NEAR(roof_dual_range(q).width(), 1.0, 1e-9);
}

}  // namespace
}  // namespace mqubo
