#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <vector>

#include "mqubo/problems.hpp"
#include "test_support.hpp"

namespace mqubo {
namespace {

using testing::bits_of;
using testing::reference_value;

// Cut weight computed directly from the weighted pairs.
double cut_weight(const std::vector<WeightedPair>& pairs, const BinaryVector& x) {
    double s = 0.0;
    for (const auto& p : pairs) {
        if (x[p.i] != x[p.j]) s += p.w;
    }
    return s;
}

// Recovers pair weights from a max-cut instance (q_ij = w_ij).
std::vector<WeightedPair> pairs_of(const QuboInstance& q) {
    std::vector<WeightedPair> out;
    for (std::uint32_t i = 0; i < q.size(); ++i) {
        for (std::uint32_t j = i + 1; j < q.size(); ++j) {
            if (q(i, j) != 0.0) out.push_back({i, j, q(i, j)});
        }
    }
    return out;
}

void expect_cut_oracle(const QuboInstance& q) {
    const auto pairs = pairs_of(q);
    const std::size_t n = q.size();
    for (std::uint64_t c = 0; c < (std::uint64_t{1} << n); ++c) {
        const auto x = bits_of(c, n);
        ASSERT_NEAR(-reference_value(q, x), cut_weight(pairs, x), 1e-9);
        BinaryVector flipped = x;
        for (auto& b : flipped) b ^= 1;
        ASSERT_NEAR(reference_value(q, x), reference_value(q, flipped), 1e-9);
    }
}

TEST(BarabasiAlbert, ForcedTopology) {
    const Graph g = barabasi_albert(3, 2, 7);
    const std::vector<std::pair<std::uint32_t, std::uint32_t>> want{{0, 2}, {1, 2}};
    EXPECT_EQ(g.edges(), want);
}

TEST(BarabasiAlbert, EdgeCountAndConnectivity) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Graph g = barabasi_albert(100, 2, seed);
        EXPECT_EQ(g.edges().size(), 196U);
        EXPECT_TRUE(g.connected());
    }
}

TEST(BarabasiAlbert, Deterministic) {
    EXPECT_EQ(barabasi_albert(200, 3, 9).edges(), barabasi_albert(200, 3, 9).edges());
    EXPECT_NE(barabasi_albert(200, 3, 9).edges(), barabasi_albert(200, 3, 10).edges());
}

TEST(BarabasiAlbert, RejectsBadParameters) {
    EXPECT_THROW(barabasi_albert(3, 3, 1), InvariantError);
    EXPECT_THROW(barabasi_albert(3, 0, 1), InvariantError);
}

TEST(Graph, RejectsSelfLoopsAndDuplicates) {
    EXPECT_THROW(Graph(3, {{1, 1}}), InvariantError);
    EXPECT_THROW(Graph(3, {{0, 1}, {1, 0}}), InvariantError);
    EXPECT_THROW(Graph(3, {{0, 3}}), InvariantError);
}

TEST(Random, BetaMomentsMatch) {
    Xoshiro256 rng(51);
    const int draws = 200000;
    double s = 0.0;
    double s2 = 0.0;
    for (int k = 0; k < draws; ++k) {
        const double b = rng.beta_johnk(0.2, 0.8);
        ASSERT_GE(b, 0.0);
        ASSERT_LE(b, 1.0);
        s += b;
        s2 += b * b;
    }
    const double mean = s / draws;
    const double var = s2 / draws - mean * mean;
    // Beta(a, b): mean a/(a+b) = 0.2, variance ab/((a+b)^2 (a+b+1)) = 0.08.
    EXPECT_NEAR(mean, 0.2, 4.0 * std::sqrt(0.08 / draws));
    EXPECT_NEAR(var, 0.08, 0.002);
}

TEST(Random, BoundedIntegersCoverRange) {
    Xoshiro256 rng(52);
    std::vector<int> counts(5, 0);
    for (int k = 0; k < 50000; ++k) ++counts[rng.below(5)];
    for (const int c : counts) EXPECT_NEAR(c, 10000, 500);
}

TEST(Random, DeriveSeedSeparatesStreams) {
    EXPECT_NE(derive_seed(1, "a"), derive_seed(1, "b"));
    EXPECT_NE(derive_seed(1, "a", {0}), derive_seed(1, "a", {1}));
    EXPECT_EQ(derive_seed(1, "a", {3}), derive_seed(1, "a", {3}));
}

TEST(Mc01, SingleEdgeHandValues) {
    const auto q = maxcut_qubo(2, {{0, 1, 0.5}}, "x");
    EXPECT_DOUBLE_EQ(evaluate(q, BinaryVector{1, 0}), -0.5);
    EXPECT_DOUBLE_EQ(evaluate(q, BinaryVector{1, 1}), 0.0);
}

TEST(Mc01, ZeroWeightsGiveZeroMatrix) {
    EXPECT_EQ(maxcut_qubo(3, {{0, 1, 0.0}}, "x").matrix(), Matrix(3));
}

TEST(Mc01, WeightsOnlyOnEdges) {
    const Graph g = barabasi_albert(30, 2, 3);
    const auto q = gen_mc01(g, 5);
    for (std::size_t i = 0; i < 30; ++i) {
        for (std::size_t j = i + 1; j < 30; ++j) {
            if (!g.has_edge(i, j)) {
                EXPECT_EQ(q(i, j), 0.0);
            } else {
                EXPECT_GE(q(i, j), 0.0);
                EXPECT_LE(q(i, j), 1.0);
            }
        }
    }
}

TEST(Mc01, CutOracle) { expect_cut_oracle(gen_mc01(barabasi_albert(10, 2, 1), 2)); }

TEST(Mcb, GraphEdgesWeighOne) {
    const Graph g(2, {{0, 1}});
    EXPECT_DOUBLE_EQ(gen_mcb(g, 1)(0, 1), 1.0);
    const Graph h(3, {{0, 1}});
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto q = gen_mcb(h, seed);
        EXPECT_DOUBLE_EQ(q(0, 1), 1.0);
        EXPECT_TRUE(q(0, 2) == 0.0 || q(0, 2) == 1.0);
        EXPECT_TRUE(q(1, 2) == 0.0 || q(1, 2) == 1.0);
    }
}

TEST(Mcb, CutOracle) { expect_cut_oracle(gen_mcb(barabasi_albert(10, 2, 1), 3)); }

TEST(Mcz, WeightRules) {
    const Graph g = barabasi_albert(40, 2, 4);
    const auto q = gen_mcz(g, 6);
    std::set<double> seen;
    for (std::size_t i = 0; i < 40; ++i) {
        for (std::size_t j = i + 1; j < 40; ++j) {
            if (g.has_edge(i, j)) {
                EXPECT_EQ(q(i, j), 5.0);
            } else {
                seen.insert(q(i, j));
            }
        }
    }
    EXPECT_EQ(seen, (std::set<double>{1, 2, 3, 4, 5}));
}

TEST(Mcz, CutOracle) { expect_cut_oracle(gen_mcz(barabasi_albert(10, 2, 1), 4)); }

TEST(MaxCut, MinimumNonPositiveAndZeroAtOrigin) {
    const auto q = gen_mc01(barabasi_albert(12, 2, 8), 8);
    EXPECT_EQ(evaluate(q, BinaryVector(12, 0)), 0.0);
}

TEST(Generators, Deterministic) {
    const Graph g = barabasi_albert(25, 2, 11);
    for (const Family f : kAllFamilies) {
        EXPECT_EQ(generate(f, g, 12).matrix(), generate(f, g, 12).matrix()) << family_id(f);
    }
}

TEST(SubSum, StarIdentity) {
    const Graph star(4, {{0, 1}, {0, 2}, {0, 3}});
    const auto d = subsum_data(star);
    EXPECT_EQ(d.weights, (std::vector<double>{3, 1, 1, 1}));
    EXPECT_DOUBLE_EQ(d.target, 1.5);
    const auto q = gen_subsum(star);
    for (std::uint64_t c = 0; c < 16; ++c) {
        const auto x = bits_of(c, 4);
        double s = 0.0;
        for (std::size_t i = 0; i < 4; ++i) s += d.weights[i] * x[i];
        EXPECT_NEAR(reference_value(q, x), (s - 1.5) * (s - 1.5) - 2.25, 1e-12);
    }
    EXPECT_EQ(evaluate(q, BinaryVector(4, 0)), 0.0);
}

TEST(SubSum, CompletedSquareOnRandomGraph) {
    const Graph g = barabasi_albert(12, 2, 13);
    const auto d = subsum_data(g);
    const auto q = gen_subsum(g);
    for (std::uint64_t c = 0; c < 4096; c += 3) {
        const auto x = bits_of(c, 12);
        double s = 0.0;
        for (std::size_t i = 0; i < 12; ++i) s += d.weights[i] * x[i];
        ASSERT_NEAR(evaluate(q, x) + d.target * d.target, (s - d.target) * (s - d.target), 1e-9);
        ASSERT_GE(evaluate(q, x) + d.target * d.target, -1e-9);
    }
}

TEST(Families, IdsRoundTrip) {
    for (const Family f : kAllFamilies) EXPECT_EQ(parse_family(family_id(f)), f);
    EXPECT_FALSE(parse_family("MC2").has_value());
}

}  // namespace
}  // namespace mqubo
