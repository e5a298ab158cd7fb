#pragma once

#include <algorithm>
#include <queue>
#include <utility>
#include <vector>

#include "gbandit/graph.hpp"

namespace gbandit {

/// Diameter of a tree via double-sweep breadth-first search.
inline std::size_t tree_diameter(const Graph& tree) {
    auto first = bfs_distances(tree, 0);
    const Node far = static_cast<Node>(std::max_element(first.begin(), first.end()) - first.begin());
    auto second = bfs_distances(tree, far);
    return *std::max_element(second.begin(), second.end());
}

namespace detail {

/// Breadth-first tree grown simultaneously from every root (roots must form a
/// connected set; for two roots they are joined by their edge). Each node's
/// parent is its lowest-numbered neighbor in the previous layer.
inline Graph layered_bfs_tree(const Graph& g, const std::vector<Node>& roots) {
    const std::size_t n = g.node_count();
    std::vector<std::size_t> depth(n, kUnreachable);
    std::queue<Node> queue;
    for (Node r : roots) {
        depth[r] = 0;
        queue.push(r);
    }
    while (!queue.empty()) {
        Node v = queue.front();
        queue.pop();
        for (Node w : g.neighbors(v)) {
            if (depth[w] == kUnreachable) {
                depth[w] = depth[v] + 1;
                queue.push(w);
            }
        }
    }
    std::vector<std::pair<Node, Node>> edges;
    edges.reserve(n - 1);
    for (std::size_t k = 1; k < roots.size(); ++k) edges.emplace_back(roots[k - 1], roots[k]);
    for (Node v = 0; v < n; ++v) {
        if (depth[v] == 0) continue;
        Node parent = kUnreachable;
        for (Node w : g.neighbors(v)) {
            if (depth[w] + 1 == depth[v] && w < parent) parent = w;
        }
        edges.emplace_back(parent, v);
    }
    return Graph(n, edges);
}

}  // namespace detail

/// Minimum-diameter spanning tree. For unweighted graphs the optimum is a
/// shortest-path tree from the absolute center, which sits on a vertex or on
/// an edge midpoint; every such candidate is tried and the first with the
/// smallest diameter wins (vertices in index order, then edges in edge order).
inline Graph min_diameter_spanning_tree(const Graph& g) {
    Graph best = detail::layered_bfs_tree(g, {0});
    std::size_t best_diameter = tree_diameter(best);
    auto consider = [&](const std::vector<Node>& roots) {
        Graph candidate = detail::layered_bfs_tree(g, roots);
        const std::size_t d = tree_diameter(candidate);
        if (d < best_diameter) {
            best_diameter = d;
            best = std::move(candidate);
        }
    };
    for (Node v = 1; v < g.node_count(); ++v) consider({v});
    for (const Edge& e : g.edges()) consider({e.a, e.b});
    return best;
}

/// Spanning tree with heuristically large diameter: a double sweep picks the
/// endpoint of a longest shortest path, then a depth-first search from it
/// follows each node's neighbor order, extending the current chain while an
/// unvisited neighbor exists. Not optimal in general.
inline Graph max_diameter_spanning_tree(const Graph& g) {
    const std::size_t n = g.node_count();
    auto sweep = [&](Node from) {
        auto dist = bfs_distances(g, from);
        return static_cast<Node>(std::max_element(dist.begin(), dist.end()) - dist.begin());
    };
    const Node start = sweep(sweep(0));

    std::vector<char> visited(n, 0);
    std::vector<std::pair<Node, Node>> edges;
    edges.reserve(n - 1);
    // (node, next neighbor position)
    std::vector<std::pair<Node, std::size_t>> stack{{start, 0}};
    visited[start] = 1;
    while (!stack.empty()) {
        auto& [v, next] = stack.back();
        const auto& nbrs = g.neighbors(v);
        while (next < nbrs.size() && visited[nbrs[next]]) ++next;
        if (next == nbrs.size()) {
            stack.pop_back();
            continue;
        }
        const Node w = nbrs[next++];
        visited[w] = 1;
        edges.emplace_back(v, w);
        stack.emplace_back(w, 0);
    }
    return Graph(n, edges);
}

}  // namespace gbandit
