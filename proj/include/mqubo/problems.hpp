#pragma once

// Random graphs and the four benchmark QUBO families built on them: three
// weighted max-cut variants and a degree-weighted subset-sum.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mqubo/error.hpp"
#include "mqubo/qubo.hpp"
#include "mqubo/random.hpp"

namespace mqubo {

// Simple undirected graph. Edges are stored as (i, j) with i < j, sorted.
class Graph {
public:
    Graph() = default;

    Graph(std::size_t n, std::vector<std::pair<std::uint32_t, std::uint32_t>> edges)
        : n_(n), adjacent_(n * n, 0), degree_(n, 0) {
        for (auto& [a, b] : edges) {
            if (a == b) throw InvariantError("self-loop on node " + std::to_string(a));
            if (a >= n || b >= n) throw InvariantError("edge references a node outside the graph");
            if (a > b) std::swap(a, b);
            if (adjacent_[a * n + b]) {
                throw InvariantError("duplicate edge (" + std::to_string(a) + ", " + std::to_string(b) + ")");
            }
            adjacent_[a * n + b] = adjacent_[b * n + a] = 1;
            ++degree_[a];
            ++degree_[b];
        }
        std::sort(edges.begin(), edges.end());
        edges_ = std::move(edges);
    }

    std::size_t nodes() const noexcept { return n_; }
    const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges() const noexcept { return edges_; }
    bool has_edge(std::size_t a, std::size_t b) const noexcept { return adjacent_[a * n_ + b] != 0; }
    std::size_t degree(std::size_t v) const noexcept { return degree_[v]; }

    bool connected() const {
        if (n_ == 0) return true;
        std::vector<std::uint8_t> seen(n_, 0);
        std::vector<std::size_t> stack{0};
        seen[0] = 1;
        std::size_t count = 1;
        while (!stack.empty()) {
            const std::size_t v = stack.back();
            stack.pop_back();
            for (std::size_t w = 0; w < n_; ++w) {
                if (!seen[w] && has_edge(v, w)) {
                    seen[w] = 1;
                    ++count;
                    stack.push_back(w);
                }
            }
        }
        return count == n_;
    }

private:
    std::size_t n_ = 0;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges_;
    std::vector<std::uint8_t> adjacent_;
    std::vector<std::size_t> degree_;
};

// Preferential attachment by the repeated-nodes urn: start from attach_m
// isolated nodes; node attach_m links to all of them; every later node links
// to attach_m distinct earlier nodes drawn from the urn, in which each node
// appears once per incident edge.
inline Graph barabasi_albert(std::size_t n, std::size_t attach_m, std::uint64_t seed) {
    if (attach_m < 1 || attach_m >= n) {
        throw InvariantError("barabasi_albert requires 1 <= attach_m < n (attach_m=" + std::to_string(attach_m) +
                             ", n=" + std::to_string(n) + ")");
    }
    Xoshiro256 rng(derive_seed(seed, "barabasi_albert"));
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    edges.reserve((n - attach_m) * attach_m);
    std::vector<std::uint32_t> urn;
    urn.reserve(2 * (n - attach_m) * attach_m);
    std::vector<std::uint32_t> targets(attach_m);
    for (std::size_t t = 0; t < attach_m; ++t) targets[t] = static_cast<std::uint32_t>(t);

    std::vector<std::uint8_t> picked(n, 0);
    for (auto source = static_cast<std::uint32_t>(attach_m); source < n; ++source) {
        for (const std::uint32_t t : targets) edges.emplace_back(t, source);
        urn.insert(urn.end(), targets.begin(), targets.end());
        urn.insert(urn.end(), attach_m, source);

        targets.clear();
        while (targets.size() < attach_m) {
            const std::uint32_t v = urn[rng.below(urn.size())];
            if (!picked[v]) {
                picked[v] = 1;
                targets.push_back(v);
            }
        }
        for (const std::uint32_t v : targets) picked[v] = 0;
    }
    return Graph(n, std::move(edges));
}

enum class Family { mc01, mcb, mcz, subsum };

inline constexpr std::array<Family, 4> kAllFamilies{Family::mc01, Family::mcb, Family::mcz, Family::subsum};

// Identifier used in config files and CSV headers.
inline std::string_view family_id(Family f) {
    switch (f) {
        case Family::mc01: return "MC01";
        case Family::mcb: return "MCB";
        case Family::mcz: return "MCZ";
        case Family::subsum: return "SUBSUM";
    }
    return "?";
}

// Human-readable name, e.g. for tables.
inline std::string_view family_name(Family f) {
    switch (f) {
        case Family::mc01: return "MC[0,1]";
        case Family::mcb: return "MC{0,1}";
        case Family::mcz: return "MC[1,5]";
        case Family::subsum: return "SubSum";
    }
    return "?";
}

inline std::optional<Family> parse_family(std::string_view s) {
    for (const Family f : kAllFamilies) {
        if (s == family_id(f)) return f;
    }
    return std::nullopt;
}

struct GeneratorConfig {
    std::size_t n = 1000;
    std::size_t attach_m = 2;
    std::uint64_t seed = 1;
    std::vector<Family> families{kAllFamilies.begin(), kAllFamilies.end()};

    void validate() const {
        if (attach_m < 1 || attach_m >= n) {
            throw InvariantError("generator config requires 1 <= attach_m < n");
        }
        if (families.empty()) throw InvariantError("generator config lists no families");
    }
};

struct WeightedPair {
    std::uint32_t i;
    std::uint32_t j;
    double w;
};

// f(x) = sum_{i<j} 2 w_ij x_i x_j - sum_i x_i sum_{j != i} w_ij, i.e. minus the
// weight of the cut induced by x. Stored as q(i,j) = q(j,i) = w_ij and
// q(i,i) = -sum_j w_ij.
inline QuboInstance maxcut_qubo(std::size_t n, const std::vector<WeightedPair>& pairs, std::string label) {
    Matrix q(n);
    for (const auto& p : pairs) {
        q(p.i, p.j) += p.w;
        q(p.j, p.i) += p.w;
        q(p.i, p.i) -= p.w;
        q(p.j, p.j) -= p.w;
    }
    return QuboInstance::from_symmetric(std::move(q), std::move(label));
}

// Beta(0.2, 0.8) weights on the graph's edges only. Edge e (in sorted edge
// order) draws from its own stream derive_seed(seed, "MC01", {e}).
inline QuboInstance gen_mc01(const Graph& g, std::uint64_t seed) {
    std::vector<WeightedPair> pairs;
    pairs.reserve(g.edges().size());
    for (std::size_t e = 0; e < g.edges().size(); ++e) {
        Xoshiro256 rng(derive_seed(seed, "MC01", {e}));
        const auto [i, j] = g.edges()[e];
        pairs.push_back({i, j, rng.beta_johnk(0.2, 0.8)});
    }
    return maxcut_qubo(g.nodes(), pairs, std::string(family_id(Family::mc01)));
}

namespace detail {

// Complete-graph weights: graph edges get `edge_weight`, every other pair
// draws from `draw`. Pairs are visited row-major over i < j; pair p uses the
// stream derive_seed(seed, tag, {p}).
template <typename Draw>
std::vector<WeightedPair> complete_graph_weights(const Graph& g, std::uint64_t seed, std::string_view tag,
                                                 double edge_weight, Draw draw) {
    const std::size_t n = g.nodes();
    std::vector<WeightedPair> pairs;
    pairs.reserve(n * (n - 1) / 2);
    std::uint64_t p = 0;
    for (std::uint32_t i = 0; i < n; ++i) {
        for (std::uint32_t j = i + 1; j < n; ++j, ++p) {
            double w = edge_weight;
            if (!g.has_edge(i, j)) {
                Xoshiro256 rng(derive_seed(seed, tag, {p}));
                w = draw(rng);
            }
            if (w != 0.0) pairs.push_back({i, j, w});
        }
    }
    return pairs;
}

}  // namespace detail

// Complete graph; graph edges weigh 1, other pairs Bernoulli(1/2).
inline QuboInstance gen_mcb(const Graph& g, std::uint64_t seed) {
    const auto pairs = detail::complete_graph_weights(g, seed, "MCB", 1.0,
                                                      [](Xoshiro256& r) { return r.bernoulli(0.5) ? 1.0 : 0.0; });
    return maxcut_qubo(g.nodes(), pairs, std::string(family_id(Family::mcb)));
}

// Complete graph; graph edges weigh 5, other pairs uniform on {1, ..., 5}.
inline QuboInstance gen_mcz(const Graph& g, std::uint64_t seed) {
    const auto pairs = detail::complete_graph_weights(
        g, seed, "MCZ", 5.0, [](Xoshiro256& r) { return static_cast<double>(1 + r.below(5)); });
    return maxcut_qubo(g.nodes(), pairs, std::string(family_id(Family::mcz)));
}

struct SubsetSumData {
    std::vector<double> weights;
    double target = 0.0;
};

// Vertex weights are degrees; the target is a quarter of their total.
inline SubsetSumData subsum_data(const Graph& g) {
    SubsetSumData d;
    d.weights.resize(g.nodes());
    double total = 0.0;
    for (std::size_t v = 0; v < g.nodes(); ++v) {
        d.weights[v] = static_cast<double>(g.degree(v));
        total += d.weights[v];
    }
    d.target = total / 4.0;
    return d;
}

// f(x) = sum_{i,j} w_i w_j x_i x_j - 2 tau sum_i w_i x_i = (w.x - tau)^2 - tau^2.
inline QuboInstance gen_subsum(const Graph& g) {
    const SubsetSumData d = subsum_data(g);
    const std::size_t n = g.nodes();
    Matrix q(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) q(i, j) = d.weights[i] * d.weights[j];
        q(i, i) -= 2.0 * d.target * d.weights[i];
    }
    return QuboInstance::from_symmetric(std::move(q), std::string(family_id(Family::subsum)));
}

inline QuboInstance generate(Family f, const Graph& g, std::uint64_t seed) {
    switch (f) {
        case Family::mc01: return gen_mc01(g, seed);
        case Family::mcb: return gen_mcb(g, seed);
        case Family::mcz: return gen_mcz(g, seed);
        case Family::subsum: return gen_subsum(g);
    }
    throw InvariantError("unknown problem family");
}

}  // namespace mqubo
