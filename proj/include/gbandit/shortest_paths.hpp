#pragma once

#include <algorithm>
#include <cstddef>
#include <set>
#include <vector>

#include "gbandit/errors.hpp"
#include "gbandit/graph.hpp"

namespace gbandit {

/// Edge subset of a host graph, in the host's node numbering. Node set is the
/// union of edge endpoints (or a single node when there are no edges).
struct Subgraph {
    std::vector<Node> nodes;  // sorted
    std::vector<Edge> edges;  // sorted, canonical

    bool contains_node(Node v) const { return std::binary_search(nodes.begin(), nodes.end(), v); }

    bool is_connected() const {
        if (nodes.empty()) return false;
        std::vector<std::size_t> parent(nodes.size());
        for (std::size_t k = 0; k < parent.size(); ++k) parent[k] = k;
        auto find = [&](std::size_t x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        auto pos = [&](Node v) {
            return static_cast<std::size_t>(std::lower_bound(nodes.begin(), nodes.end(), v) - nodes.begin());
        };
        std::size_t components = nodes.size();
        for (const Edge& e : edges) {
            auto ra = find(pos(e.a));
            auto rb = find(pos(e.b));
            if (ra != rb) {
                parent[ra] = rb;
                --components;
            }
        }
        return components == 1;
    }

    /// Relabels nodes to 0..k-1 in sorted order and returns the standalone graph.
    Graph to_graph() const {
        std::vector<std::pair<Node, Node>> relabeled;
        relabeled.reserve(edges.size());
        auto pos = [&](Node v) {
            return static_cast<Node>(std::lower_bound(nodes.begin(), nodes.end(), v) - nodes.begin());
        };
        for (const Edge& e : edges) relabeled.emplace_back(pos(e.a), pos(e.b));
        return Graph(nodes.size(), relabeled);
    }
};

/// All-pairs shortest paths held as one breadth-first spanning tree per
/// surviving root. Distances are fixed at construction on the full graph;
/// eliminating a node drops its tree and prunes it (and any relay ancestors
/// left without purpose) from the other trees, so stored paths between the
/// remaining survivors never change.
///
/// Tie-breaking: in the tree rooted at r, the parent of v is its
/// lowest-numbered neighbor one step closer to r. The stored path between
/// i < j walks the tree rooted at j starting from i, i.e. every hop takes the
/// lowest-numbered next node; path(j, i) is its reverse.
class ShortestPathSet {
public:
    explicit ShortestPathSet(const Graph& g)
        : n_(g.node_count()),
          distance_(n_ * n_, kUnreachable),
          parent_(n_ * n_, kNoParent),
          children_(n_ * n_, 0),
          retained_(n_ * n_, 1),
          alive_(n_, 1),
          survivor_count_(n_) {
        for (Node root = 0; root < n_; ++root) {
            auto dist = bfs_distances(g, root);
            for (Node v = 0; v < n_; ++v) {
                if (dist[v] == kUnreachable) throw ModelError("graph is disconnected");
                distance_[at(root, v)] = dist[v];
            }
            for (Node v = 0; v < n_; ++v) {
                if (v == root) continue;
                Node best = kNoParent;
                for (Node w : g.neighbors(v)) {
                    if (dist[w] + 1 == dist[v] && w < best) best = w;
                }
                parent_[at(root, v)] = best;
                ++children_[at(root, best)];
            }
        }
    }

    std::size_t node_count() const { return n_; }
    std::size_t survivor_count() const { return survivor_count_; }
    bool is_survivor(Node v) const { return alive_.at(v) != 0; }

    std::vector<Node> survivors() const {
        std::vector<Node> out;
        out.reserve(survivor_count_);
        for (Node v = 0; v < n_; ++v) {
            if (alive_[v]) out.push_back(v);
        }
        return out;
    }

    /// Shortest-path distance in the original graph.
    std::size_t distance(Node i, Node j) const { return distance_.at(at(i, j)); }

    /// Whether v is still part of the tree rooted at the survivor `root`.
    bool tree_contains(Node root, Node v) const {
        return is_survivor(root) && retained_.at(at(root, v)) != 0;
    }

    Path path(Node i, Node j) const {
        if (!is_survivor(i) || !is_survivor(j)) {
            throw InvalidStateError("path lookup between non-surviving nodes");
        }
        if (i == j) return Path{{i}};
        const Node lo = std::min(i, j);
        const Node hi = std::max(i, j);
        Path p;
        p.nodes.reserve(distance(lo, hi) + 1);
        for (Node v = lo; v != hi; v = parent_[at(hi, v)]) p.nodes.push_back(v);
        p.nodes.push_back(hi);
        if (i != lo) std::reverse(p.nodes.begin(), p.nodes.end());
        return p;
    }

    /// Maximum stored path length over surviving pairs (0 for one survivor).
    std::size_t diameter() const {
        std::size_t best = 0;
        for (Node i = 0; i < n_; ++i) {
            if (!alive_[i]) continue;
            for (Node j = i + 1; j < n_; ++j) {
                if (alive_[j]) best = std::max(best, distance_[at(i, j)]);
            }
        }
        return best;
    }

    /// True when the stored path between survivors u and v has no other
    /// survivor as an internal node.
    bool comparison_adjacent(Node u, Node v) const {
        if (u == v) return false;
        const auto p = path(u, v);
        for (std::size_t k = 1; k + 1 < p.nodes.size(); ++k) {
            if (alive_[p.nodes[k]]) return false;
        }
        return true;
    }

    /// Eliminates survivor v in place.
    void prune(Node v) {
        if (!is_survivor(v)) throw InvalidStateError("node " + std::to_string(v + 1) + " is not a survivor");
        if (survivor_count_ < 2) throw InvalidStateError("cannot prune the last survivor");
        alive_[v] = 0;
        --survivor_count_;
        std::fill(retained_.begin() + static_cast<std::ptrdiff_t>(at(v, 0)),
                  retained_.begin() + static_cast<std::ptrdiff_t>(at(v, 0) + n_), 0);
        for (Node root = 0; root < n_; ++root) {
            if (!alive_[root]) continue;
            // Peel v, then any non-survivor ancestor that became a leaf.
            Node w = v;
            while (w != root && retained_[at(root, w)] && !alive_[w] && children_[at(root, w)] == 0) {
                retained_[at(root, w)] = 0;
                const Node p = parent_[at(root, w)];
                --children_[at(root, p)];
                w = p;
            }
        }
    }

    ShortestPathSet pruned(Node v) const {
        ShortestPathSet copy(*this);
        copy.prune(v);
        return copy;
    }

    /// Union of edges on stored paths between every pair of current survivors.
    Subgraph sampled_subgraph() const { return sampled_subgraph(survivors()); }

    Subgraph sampled_subgraph(const std::vector<Node>& survivors) const {
        if (survivors.empty()) throw InvalidStateError("sampled subgraph of an empty survivor set");
        std::set<Edge> edges;
        std::set<Node> nodes(survivors.begin(), survivors.end());
        for (std::size_t x = 0; x < survivors.size(); ++x) {
            for (std::size_t y = x + 1; y < survivors.size(); ++y) {
                const auto p = path(survivors[x], survivors[y]);
                for (std::size_t k = 1; k < p.nodes.size(); ++k) {
                    edges.insert(make_edge(p.nodes[k - 1], p.nodes[k]));
                    nodes.insert(p.nodes[k]);
                }
            }
        }
        return Subgraph{{nodes.begin(), nodes.end()}, {edges.begin(), edges.end()}};
    }

private:
    static constexpr Node kNoParent = kUnreachable;

    std::size_t at(Node root, Node v) const { return root * n_ + v; }

    std::size_t n_ = 0;
    std::vector<std::size_t> distance_;
    std::vector<Node> parent_;
    std::vector<std::size_t> children_;
    std::vector<char> retained_;
    std::vector<char> alive_;
    std::size_t survivor_count_ = 0;
};

inline ShortestPathSet all_pairs_shortest_paths(const Graph& g) { return ShortestPathSet(g); }

}  // namespace gbandit
