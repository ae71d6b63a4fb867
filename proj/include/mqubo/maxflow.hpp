#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

namespace mqubo {

// Dinic's algorithm (blocking flows on BFS level graphs, i.e. shortest
// augmenting paths) over real capacities. Arcs with residual <= eps count as
// saturated.
//
// Usage: add_arc() for every arc, then max_flow(). Arcs are stored in CSR form
// once the first flow is requested; adding arcs afterwards is not supported.
class FlowNetwork {
public:
    explicit FlowNetwork(std::size_t nodes) : nodes_(nodes) {}

    std::size_t nodes() const noexcept { return nodes_; }
    std::size_t arcs() const noexcept { return pending_.size(); }

    void add_arc(std::uint32_t from, std::uint32_t to, double capacity) {
        if (capacity <= 0.0 || from == to) return;
        pending_.push_back({from, to, capacity});
        max_capacity_ = std::max(max_capacity_, capacity);
    }

    double max_capacity() const noexcept { return max_capacity_; }

    double max_flow(std::uint32_t source, std::uint32_t sink, double eps) {
        build();
        double total = 0.0;
        level_.assign(nodes_, -1);
        cursor_.assign(nodes_, 0);
        while (bfs(source, sink, eps)) {
            for (std::size_t v = 0; v < nodes_; ++v) cursor_[v] = first_[v];
            for (;;) {
                const double pushed = augment(source, sink, std::numeric_limits<double>::infinity(), eps);
                if (pushed <= eps) break;
                total += pushed;
            }
        }
        return total;
    }

private:
    struct PendingArc {
        std::uint32_t from;
        std::uint32_t to;
        double capacity;
    };

    void build() {
        if (built_) return;
        built_ = true;
        first_.assign(nodes_ + 1, 0);
        for (const auto& a : pending_) {
            ++first_[a.from + 1];
            ++first_[a.to + 1];
        }
        for (std::size_t v = 0; v < nodes_; ++v) first_[v + 1] += first_[v];
        const std::size_t m = first_[nodes_];
        head_.assign(m, 0);
        residual_.assign(m, 0.0);
        twin_.assign(m, 0);
        std::vector<std::size_t> fill(first_.begin(), first_.end() - 1);
        for (const auto& a : pending_) {
            const std::size_t fwd = fill[a.from]++;
            const std::size_t rev = fill[a.to]++;
            head_[fwd] = a.to;
            residual_[fwd] = a.capacity;
            twin_[fwd] = rev;
            head_[rev] = a.from;
            residual_[rev] = 0.0;
            twin_[rev] = fwd;
        }
        pending_.clear();
        pending_.shrink_to_fit();
    }

    bool bfs(std::uint32_t source, std::uint32_t sink, double eps) {
        std::fill(level_.begin(), level_.end(), -1);
        queue_.clear();
        queue_.push_back(source);
        level_[source] = 0;
        for (std::size_t q = 0; q < queue_.size(); ++q) {
            const std::uint32_t v = queue_[q];
            for (std::size_t e = first_[v]; e < first_[v + 1]; ++e) {
                const std::uint32_t w = head_[e];
                if (level_[w] < 0 && residual_[e] > eps) {
                    level_[w] = level_[v] + 1;
                    queue_.push_back(w);
                }
            }
        }
        return level_[sink] >= 0;
    }

    // Iterative DFS along the level graph; returns the bottleneck pushed.
    double augment(std::uint32_t source, std::uint32_t sink, double limit, double eps) {
        path_.clear();
        std::uint32_t v = source;
        for (;;) {
            if (v == sink) {
                double bottleneck = limit;
                for (const std::size_t e : path_) bottleneck = std::min(bottleneck, residual_[e]);
                for (const std::size_t e : path_) {
                    residual_[e] -= bottleneck;
                    residual_[twin_[e]] += bottleneck;
                }
                return bottleneck;
            }
            bool advanced = false;
            for (std::size_t& e = cursor_[v]; e < first_[v + 1]; ++e) {
                const std::uint32_t w = head_[e];
                if (residual_[e] > eps && level_[w] == level_[v] + 1) {
                    path_.push_back(e);
                    v = w;
                    advanced = true;
                    break;
                }
            }
            if (advanced) continue;
            // Dead end: drop v from this phase and retreat.
            level_[v] = -1;
            if (path_.empty()) return 0.0;
            const std::size_t back = path_.back();
            path_.pop_back();
            v = head_[twin_[back]];
            ++cursor_[v];
        }
    }

    std::size_t nodes_;
    bool built_ = false;
    double max_capacity_ = 0.0;
    std::vector<PendingArc> pending_;
    std::vector<std::size_t> first_;
    std::vector<std::uint32_t> head_;
    std::vector<double> residual_;
    std::vector<std::size_t> twin_;
    std::vector<int> level_;
    std::vector<std::size_t> cursor_;
    std::vector<std::uint32_t> queue_;
    std::vector<std::size_t> path_;
};

}  // namespace mqubo
