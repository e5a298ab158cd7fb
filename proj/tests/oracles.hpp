#pragma once

// Test-only reference computations, deliberately independent of the library's
// own traversal code.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <utility>
#include <vector>

#include "gbandit/generators.hpp"
#include "gbandit/graph.hpp"

namespace gbandit::oracle {

inline constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max() / 4;

/// Floyd-Warshall over the edge set.
inline std::vector<std::vector<std::size_t>> distances(std::size_t n, const std::vector<Edge>& edges) {
    std::vector<std::vector<std::size_t>> d(n, std::vector<std::size_t>(n, kInf));
    for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
    for (const auto& e : edges) d[e.a][e.b] = d[e.b][e.a] = 1;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    return d;
}

inline std::vector<std::vector<std::size_t>> distances(const Graph& g) { return distances(g.node_count(), g.edges()); }

inline std::size_t diameter(const Graph& g) {
    std::size_t best = 0;
    for (const auto& row : distances(g))
        for (auto v : row) best = std::max(best, v);
    return best;
}

/// Calls visit(edge subset) for every spanning tree of g (exponential; small graphs only).
inline void for_each_spanning_tree(const Graph& g, const std::function<void(const std::vector<Edge>&)>& visit) {
    const std::size_t n = g.node_count();
    const auto& all = g.edges();
    std::vector<Edge> chosen;
    std::function<void(std::size_t)> rec = [&](std::size_t next) {
        if (chosen.size() + 1 == n) {
            visit(chosen);
            return;
        }
        if (all.size() - next < n - 1 - chosen.size()) return;
        for (std::size_t k = next; k < all.size(); ++k) {
            chosen.push_back(all[k]);
            // acyclic check via union-find rebuilt from scratch
            std::vector<std::size_t> root(n);
            for (std::size_t v = 0; v < n; ++v) root[v] = v;
            std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
                return root[x] == x ? x : root[x] = find(root[x]);
            };
            bool acyclic = true;
            for (const auto& e : chosen) {
                auto a = find(e.a), b = find(e.b);
                if (a == b) {
                    acyclic = false;
                    break;
                }
                root[a] = b;
            }
            if (acyclic) rec(k + 1);
            chosen.pop_back();
        }
    };
    if (n == 1) {
        visit(chosen);
        return;
    }
    rec(0);
}

/// All labeled connected simple graphs on n nodes (n <= 6).
inline std::vector<Graph> all_connected_graphs(std::size_t n) {
    std::vector<std::pair<Node, Node>> slots;
    for (Node i = 0; i < n; ++i)
        for (Node j = i + 1; j < n; ++j) slots.emplace_back(i, j);
    std::vector<Graph> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << slots.size()); ++mask) {
        std::vector<std::pair<Node, Node>> edges;
        std::vector<Edge> canon;
        for (std::size_t k = 0; k < slots.size(); ++k) {
            if (mask >> k & 1) {
                edges.push_back(slots[k]);
                canon.push_back({slots[k].first, slots[k].second});
            }
        }
        auto d = distances(n, canon);
        bool connected = true;
        for (std::size_t v = 0; v < n; ++v) connected = connected && d[0][v] < kInf;
        if (connected) out.emplace_back(n, edges);
    }
    return out;
}

}  // namespace gbandit::oracle

namespace gbandit::testing {

/// Connected G(n, p) with p above the connectivity threshold.
inline Graph random_connected(std::size_t n, std::mt19937_64& rng) {
    const double base = n > 1 ? 1.5 * std::log(static_cast<double>(n)) / static_cast<double>(n) : 0.0;
    const double p = std::min(1.0, base + 0.3 * unit_double(rng()));
    return erdos_renyi_connected(n, p, rng());
}

}  // namespace gbandit::testing
