#pragma once

#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "gbandit/errors.hpp"
#include "gbandit/graph.hpp"
#include "gbandit/rng.hpp"

namespace gbandit {

struct SpiderWebSpec {
    std::size_t rings = 3;
    std::size_t nodes_per_ring = 5;

    void validate() const {
        if (rings < 1) throw ValidationError("spider web needs at least one ring");
        if (nodes_per_ring < 3) throw ValidationError("spider web rings need at least 3 nodes");
    }
};

/// Concentric rings joined by aligned radial spokes. Node (ring r, position p)
/// is r * nodes_per_ring + p, ring 0 innermost. Neighbor order is ring
/// successor, ring predecessor, outward spoke, inward spoke, which lets the
/// depth-first spanning-tree heuristic follow the Hamiltonian spiral.
inline Graph spider_web(const SpiderWebSpec& spec) {
    spec.validate();
    const std::size_t m = spec.nodes_per_ring;
    std::vector<std::vector<Node>> adj(spec.rings * m);
    auto id = [m](std::size_t r, std::size_t p) { return r * m + p; };
    for (std::size_t r = 0; r < spec.rings; ++r) {
        for (std::size_t p = 0; p < m; ++p) {
            auto& list = adj[id(r, p)];
            list.push_back(id(r, (p + 1) % m));
            list.push_back(id(r, (p + m - 1) % m));
            if (r + 1 < spec.rings) list.push_back(id(r + 1, p));
            if (r > 0) list.push_back(id(r - 1, p));
        }
    }
    return Graph::from_adjacency(std::move(adj));
}

inline Graph line_graph(std::size_t n) {
    if (n < 1) throw ValidationError("line graph needs at least one node");
    std::vector<std::pair<Node, Node>> edges;
    for (Node v = 1; v < n; ++v) edges.emplace_back(v - 1, v);
    return Graph(n, edges);
}

inline Graph cycle_graph(std::size_t n) {
    if (n < 3) throw ValidationError("cycle graph needs at least 3 nodes");
    std::vector<std::pair<Node, Node>> edges;
    for (Node v = 0; v < n; ++v) edges.emplace_back(v, (v + 1) % n);
    return Graph(n, edges);
}

/// Star with node `center` joined to every other node.
inline Graph star_graph(std::size_t n, Node center = 0) {
    if (n < 2 || center >= n) throw ValidationError("star graph needs n >= 2 and a valid center");
    std::vector<std::pair<Node, Node>> edges;
    for (Node v = 0; v < n; ++v) {
        if (v != center) edges.emplace_back(center, v);
    }
    return Graph(n, edges);
}

inline Graph complete_graph(std::size_t n) {
    if (n < 1) throw ValidationError("complete graph needs at least one node");
    std::vector<std::pair<Node, Node>> edges;
    for (Node i = 0; i < n; ++i) {
        for (Node j = i + 1; j < n; ++j) edges.emplace_back(i, j);
    }
    return Graph(n, edges);
}

/// Random recursive tree: node k attaches to a uniformly chosen earlier node.
inline Graph random_tree(std::size_t n, std::uint64_t seed) {
    if (n < 1) throw ValidationError("random tree needs at least one node");
    std::mt19937_64 engine(seed);
    std::vector<std::pair<Node, Node>> edges;
    for (Node v = 1; v < n; ++v) {
        const auto parent = static_cast<Node>(unit_double(engine()) * static_cast<double>(v));
        edges.emplace_back(parent, v);
    }
    return Graph(n, edges);
}

/// G(n, p) conditioned on connectivity by resampling.
inline Graph erdos_renyi_connected(std::size_t n, double p, std::uint64_t seed, std::size_t max_attempts = 1000) {
    if (n < 1) throw ValidationError("random graph needs at least one node");
    if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("edge probability must lie in [0, 1]");
    std::mt19937_64 engine(seed);
    for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
        std::vector<std::pair<Node, Node>> edges;
        std::vector<Node> root(n);
        std::iota(root.begin(), root.end(), Node{0});
        auto find = [&](Node x) {
            while (root[x] != x) x = root[x] = root[root[x]];
            return x;
        };
        std::size_t components = n;
        for (Node i = 0; i < n; ++i) {
            for (Node j = i + 1; j < n; ++j) {
                if (unit_double(engine()) >= p) continue;
                edges.emplace_back(i, j);
                const Node a = find(i);
                const Node b = find(j);
                if (a != b) {
                    root[a] = b;
                    --components;
                }
            }
        }
        if (components == 1) return Graph(n, edges);
    }
    throw ValidationError("no connected G(" + std::to_string(n) + ", " + std::to_string(p) + ") sample within " +
                          std::to_string(max_attempts) + " attempts");
}

struct LineSpec {
    std::size_t n = 2;
};
struct RandomTreeSpec {
    std::size_t n = 2;
    std::uint64_t seed = 0;
};
struct ErdosRenyiSpec {
    std::size_t n = 2;
    double p = 0.5;
    std::uint64_t seed = 0;
};

using GraphSpec = std::variant<LineSpec, RandomTreeSpec, SpiderWebSpec, ErdosRenyiSpec>;

inline Graph generate_graph(const GraphSpec& spec) {
    struct Visitor {
        Graph operator()(const LineSpec& s) const { return line_graph(s.n); }
        Graph operator()(const RandomTreeSpec& s) const { return random_tree(s.n, s.seed); }
        Graph operator()(const SpiderWebSpec& s) const { return spider_web(s); }
        Graph operator()(const ErdosRenyiSpec& s) const { return erdos_renyi_connected(s.n, s.p, s.seed); }
    };
    return std::visit(Visitor{}, spec);
}

}  // namespace gbandit
