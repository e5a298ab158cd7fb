#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <queue>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gbandit/errors.hpp"

namespace gbandit {

/// Node identifier. Nodes are 0-based inside the library; every text format
/// and the CLI use 1-based numbering.
using Node = std::size_t;

inline constexpr std::size_t kUnreachable = std::numeric_limits<std::size_t>::max();

/// Undirected edge stored in canonical orientation (a < b).
struct Edge {
    Node a = 0;
    Node b = 0;

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

inline Edge make_edge(Node i, Node j) { return i < j ? Edge{i, j} : Edge{j, i}; }

/// Sequence of nodes where consecutive entries are adjacent. A single node is
/// the trivial path.
struct Path {
    std::vector<Node> nodes;

    std::size_t length() const { return nodes.empty() ? 0 : nodes.size() - 1; }
    Node front() const { return nodes.front(); }
    Node back() const { return nodes.back(); }
    bool is_cycle() const { return nodes.size() > 1 && nodes.front() == nodes.back(); }

    friend bool operator==(const Path&, const Path&) = default;
};

/// Undirected, connected, simple graph. The per-node neighbor order is part of
/// the value: traversal-based heuristics (spanning trees, tie-breaking) follow it.
class Graph {
public:
    Graph() = default;

    /// Builds from an edge list; each node's neighbors appear in edge order.
    Graph(std::size_t node_count, const std::vector<std::pair<Node, Node>>& edges)
        : adjacency_(node_count) {
        for (const auto& [i, j] : edges) {
            add_edge(i, j);
            adjacency_[i].push_back(j);
            adjacency_[j].push_back(i);
        }
        validate();
    }

    /// Builds from explicit neighbor lists, keeping their order. Lists must be symmetric.
    static Graph from_adjacency(std::vector<std::vector<Node>> adjacency) {
        Graph g;
        const std::size_t n = adjacency.size();
        for (Node i = 0; i < n; ++i) {
            for (Node j : adjacency[i]) {
                if (j >= n) throw ValidationError("neighbor index out of range");
                if (j == i) throw ValidationError("self-loop on node " + std::to_string(i + 1));
                if (std::count(adjacency[j].begin(), adjacency[j].end(), i) != 1) {
                    throw ValidationError("adjacency lists are not symmetric");
                }
                if (i < j) g.add_edge(i, j, n);
            }
        }
        g.adjacency_ = std::move(adjacency);
        g.validate();
        return g;
    }

    std::size_t node_count() const { return adjacency_.size(); }
    std::size_t edge_count() const { return edges_.size(); }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<Node>& neighbors(Node v) const { return adjacency_.at(v); }
    std::size_t degree(Node v) const { return adjacency_.at(v).size(); }

    bool adjacent(Node i, Node j) const { return edge_index(i, j).has_value(); }

    /// Position of edge {i, j} in edges(), if present.
    std::optional<std::size_t> edge_index(Node i, Node j) const {
        if (i == j || i >= node_count() || j >= node_count()) return std::nullopt;
        auto it = index_.find(key(make_edge(i, j)));
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    /// Like edge_index but a missing edge is an illegal observation.
    std::size_t require_edge(Node i, Node j) const {
        auto idx = edge_index(i, j);
        if (!idx) {
            throw ModelError("nodes " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                             " are not adjacent");
        }
        return *idx;
    }

private:
    std::uint64_t key(Edge e) const {
        return static_cast<std::uint64_t>(e.a) * static_cast<std::uint64_t>(node_count()) + e.b;
    }

    void add_edge(Node i, Node j, std::size_t n = 0) {
        if (n == 0) n = node_count();
        if (i >= n || j >= n) throw ValidationError("edge endpoint out of range");
        if (i == j) throw ValidationError("self-loop on node " + std::to_string(i + 1));
        const Edge e = make_edge(i, j);
        const std::uint64_t k = static_cast<std::uint64_t>(e.a) * n + e.b;
        if (!index_.emplace(k, edges_.size()).second) {
            throw ValidationError("duplicate edge " + std::to_string(e.a + 1) + " " + std::to_string(e.b + 1));
        }
        edges_.push_back(e);
    }

    void validate() const {
        if (adjacency_.empty()) throw ValidationError("graph must have at least one node");
        std::vector<char> seen(node_count(), 0);
        std::vector<Node> stack{0};
        seen[0] = 1;
        std::size_t reached = 1;
        while (!stack.empty()) {
            Node v = stack.back();
            stack.pop_back();
            for (Node w : adjacency_[v]) {
                if (!seen[w]) {
                    seen[w] = 1;
                    ++reached;
                    stack.push_back(w);
                }
            }
        }
        if (reached != node_count()) throw ModelError("graph is disconnected");
    }

    std::vector<std::vector<Node>> adjacency_;
    std::vector<Edge> edges_;
    std::unordered_map<std::uint64_t, std::size_t> index_;
};

/// Throws ModelError unless every consecutive pair of p is an edge of g.
inline void validate_path(const Graph& g, const Path& p) {
    if (p.nodes.empty()) throw ModelError("empty path");
    for (Node v : p.nodes) {
        if (v >= g.node_count()) throw ModelError("path node out of range");
    }
    for (std::size_t k = 1; k < p.nodes.size(); ++k) {
        if (!g.adjacent(p.nodes[k - 1], p.nodes[k])) {
            throw ModelError("invalid path: nodes " + std::to_string(p.nodes[k - 1] + 1) + " and " +
                             std::to_string(p.nodes[k] + 1) + " are not adjacent");
        }
    }
}

inline std::vector<std::size_t> bfs_distances(const Graph& g, Node source) {
    std::vector<std::size_t> dist(g.node_count(), kUnreachable);
    std::queue<Node> queue;
    dist.at(source) = 0;
    queue.push(source);
    while (!queue.empty()) {
        Node v = queue.front();
        queue.pop();
        for (Node w : g.neighbors(v)) {
            if (dist[w] == kUnreachable) {
                dist[w] = dist[v] + 1;
                queue.push(w);
            }
        }
    }
    return dist;
}

inline std::size_t eccentricity(const Graph& g, Node v) {
    auto dist = bfs_distances(g, v);
    return *std::max_element(dist.begin(), dist.end());
}

/// Diameter by breadth-first search from every node.
inline std::size_t graph_diameter(const Graph& g) {
    std::size_t best = 0;
    for (Node v = 0; v < g.node_count(); ++v) best = std::max(best, eccentricity(g, v));
    return best;
}

inline std::size_t graph_radius(const Graph& g) {
    std::size_t best = kUnreachable;
    for (Node v = 0; v < g.node_count(); ++v) best = std::min(best, eccentricity(g, v));
    return best;
}

inline bool is_tree(const Graph& g) { return g.edge_count() + 1 == g.node_count(); }

inline bool is_path_graph(const Graph& g) {
    if (!is_tree(g)) return false;
    for (Node v = 0; v < g.node_count(); ++v) {
        if (g.degree(v) > 2) return false;
    }
    return true;
}

// Edge-list text format: one "i j" pair per line, 1-based, '#' starts a comment.

inline Graph read_edge_list(std::istream& in) {
    std::vector<std::pair<Node, Node>> edges;
    std::size_t max_node = 0;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        long long i = 0;
        long long j = 0;
        if (!(fields >> i)) continue;
        std::string rest;
        if (!(fields >> j) || (fields >> rest)) {
            throw ValidationError("edge list line " + std::to_string(line_no) + ": expected two node indices");
        }
        if (i < 1 || j < 1) {
            throw ValidationError("edge list line " + std::to_string(line_no) + ": node indices are 1-based");
        }
        edges.emplace_back(static_cast<Node>(i - 1), static_cast<Node>(j - 1));
        max_node = std::max({max_node, static_cast<std::size_t>(i), static_cast<std::size_t>(j)});
    }
    if (edges.empty()) throw ValidationError("edge list contains no edges");
    return Graph(max_node, edges);
}

inline void write_edge_list(std::ostream& out, const Graph& g) {
    out << "# " << g.node_count() << " nodes, " << g.edge_count() << " edges\n";
    for (const Edge& e : g.edges()) out << e.a + 1 << ' ' << e.b + 1 << '\n';
}

}  // namespace gbandit
