#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <span>
#include <vector>

#include "gbandit/errors.hpp"
#include "gbandit/graph.hpp"
#include "gbandit/spanning_tree.hpp"

namespace gbandit {

/// Anything that answers edge pulls and counts them. Algorithms never see
/// node rewards.
template <class T>
concept EdgeOracle = requires(T& oracle, Node i, Node j) {
    { oracle.pull(i, j) } -> std::convertible_to<double>;
    { oracle.total_pulls() } -> std::convertible_to<std::uint64_t>;
};

/// Empirical mean of `count` pulls of (i, j), oriented from i to j.
template <EdgeOracle Oracle>
double sample_edge_mean(Oracle& oracle, Node i, Node j, std::uint64_t count) {
    if (count == 0) throw InvalidStateError("an edge mean needs at least one pull");
    double sum = 0.0;
    if constexpr (requires { oracle.pull_sum(i, j, count); }) {
        sum = oracle.pull_sum(i, j, count);
    } else {
        for (std::uint64_t k = 0; k < count; ++k) sum += oracle.pull(i, j);
    }
    return sum / static_cast<double>(count);
}

struct PacParams {
    double epsilon = 0.1;
    double delta = 0.1;
    double gap_hint = 0.0;

    /// max(epsilon, gap_hint).
    double effective_accuracy() const { return std::max(epsilon, gap_hint); }

    void validate() const {
        if (!(epsilon >= 0.0) || !(gap_hint >= 0.0)) throw ValidationError("epsilon and gap_hint must be non-negative");
        if (!(delta > 0.0 && delta < 1.0)) throw ValidationError("delta must lie in (0, 1)");
        if (effective_accuracy() > 2.0) throw ValidationError("effective accuracy cannot exceed 2");
        if (effective_accuracy() == 0.0) throw ValidationError("zero accuracy needs an infinite sample size");
    }
};

namespace detail {

// Relative guard so values that are integers in exact arithmetic (e.g. 8 ln e^2)
// do not round up past themselves.
inline std::uint64_t ceil_count(double x) {
    return static_cast<std::uint64_t>(std::ceil(x * (1.0 - 1e-12)));
}

}  // namespace detail

/// ceil(log2 n), the phase budget of the halving argument; 0 for n <= 1.
inline std::size_t ceil_log2(std::size_t n) {
    return n <= 1 ? 0 : static_cast<std::size_t>(std::bit_width(n - 1));
}

/// Per-edge pulls for the line algorithm: ceil(4n / eps^2 * ln(2/delta)).
inline std::uint64_t line_sample_size(const PacParams& params, std::size_t n) {
    params.validate();
    if (n < 2) throw ValidationError("line sample size needs n >= 2");
    const double eps = params.effective_accuracy();
    return detail::ceil_count(4.0 * static_cast<double>(n) / (eps * eps) * std::log(2.0 / params.delta));
}

/// Per-edge pulls for the tree algorithm: ceil(4D / eps^2 * ln(2|L|/delta)).
inline std::uint64_t tree_sample_size(const PacParams& params, std::size_t diameter, std::size_t leaf_count) {
    params.validate();
    if (diameter < 1 || leaf_count < 1) throw ValidationError("tree sample size needs D >= 1 and |L| >= 1");
    const double eps = params.effective_accuracy();
    return detail::ceil_count(4.0 * static_cast<double>(diameter) / (eps * eps) *
                              std::log(2.0 * static_cast<double>(leaf_count) / params.delta));
}

/// Per-edge pulls in one elimination phase: the tree bound with the phase's
/// diameter and survivor count, at accuracy eps/L and confidence delta/L,
/// L = ceil(log2 n_total).
inline std::uint64_t nne_phase_sample_size(const PacParams& params, std::size_t n_total, std::size_t n_phase,
                                           std::size_t phase_diameter) {
    params.validate();
    if (n_phase < 2 || phase_diameter < 1 || n_total < n_phase) {
        throw ValidationError("phase sample size needs 2 <= n_i <= n and D_i >= 1");
    }
    const double phases = static_cast<double>(ceil_log2(n_total));
    const double eps = params.effective_accuracy() / phases;
    const double delta = params.delta / phases;
    return detail::ceil_count(4.0 * static_cast<double>(phase_diameter) / (eps * eps) *
                              std::log(2.0 * static_cast<double>(n_phase) / delta));
}

/// Right-hand side of Hoeffding's maximal inequality:
/// P(max_i S_i > eps) <= exp(-eps^2 / sum (b_i - a_i)^2).
inline double hoeffding_maximal_bound(double epsilon, std::span<const double> ranges) {
    double denom = 0.0;
    for (double w : ranges) denom += w * w;
    return std::exp(-epsilon * epsilon / denom);
}

/// Whether heterogeneous per-edge budgets meet the line-graph PAC condition
/// (sum 4/T_i)^-1 >= ln(2/delta) / eps^2.
inline bool line_budgets_sufficient(const PacParams& params, std::span<const std::uint64_t> per_edge) {
    params.validate();
    double inv = 0.0;
    for (auto t : per_edge) {
        if (t == 0) return false;
        inv += 4.0 / static_cast<double>(t);
    }
    const double eps = params.effective_accuracy();
    return 1.0 / inv >= std::log(2.0 / params.delta) / (eps * eps);
}

/// Per-edge pull counts and observation sums; means are oriented.
class EdgeStats {
public:
    explicit EdgeStats(const Graph& g) : graph_(&g), count_(g.edge_count(), 0), sum_(g.edge_count(), 0.0) {}

    template <EdgeOracle Oracle>
    void sample(Oracle& oracle, Node i, Node j, std::uint64_t count) {
        const std::size_t e = graph_->require_edge(i, j);
        const Edge& edge = graph_->edges()[e];
        sum_[e] += sample_edge_mean(oracle, edge.a, edge.b, count) * static_cast<double>(count);
        count_[e] += count;
    }

    std::uint64_t count(Node i, Node j) const { return count_[graph_->require_edge(i, j)]; }

    /// Empirical mean of (i, j); empty when the edge was never pulled.
    std::optional<double> mean(Node i, Node j) const {
        const std::size_t e = graph_->require_edge(i, j);
        if (count_[e] == 0) return std::nullopt;
        const double m = sum_[e] / static_cast<double>(count_[e]);
        return i == graph_->edges()[e].a ? m : -m;
    }

    double require_mean(Node i, Node j) const {
        auto m = mean(i, j);
        if (!m) throw InvalidStateError("edge was never pulled");
        return *m;
    }

private:
    const Graph* graph_;
    std::vector<std::uint64_t> count_;
    std::vector<double> sum_;
};

/// One elimination phase.
struct PhaseRecord {
    std::size_t phase = 0;  // 1-based
    std::size_t survivors_before = 0;
    std::size_t survivors_after = 0;
    std::size_t sampled_edges = 0;
    std::size_t diameter = 0;
    std::uint64_t per_edge_pulls = 0;  // budget cap for width-driven sampling
    std::uint64_t pulls = 0;
    bool safeguard = false;
    bool best_in_sampled = true;  // filled by callers that know the ground truth
};

struct IdentificationResult {
    Node chosen = 0;
    std::uint64_t total_pulls = 0;
    std::vector<PhaseRecord> phases;
    /// Final estimates relative to the algorithm's reference node; NaN where none.
    std::vector<double> estimates;
};

/// Ties broken toward the lower node index.
inline bool beats(double value_a, Node a, double value_b, Node b) {
    return value_a > value_b || (value_a == value_b && a < b);
}

/// Nodes of a path graph in line order, starting from the lower-indexed endpoint.
inline std::vector<Node> line_order(const Graph& g) {
    if (!is_path_graph(g)) throw ValidationError("graph is not a path graph");
    const std::size_t n = g.node_count();
    if (n == 1) return {0};
    Node start = kUnreachable;
    for (Node v = 0; v < n && start == kUnreachable; ++v) {
        if (g.degree(v) == 1) start = v;
    }
    std::vector<Node> order{start};
    Node prev = kUnreachable;
    Node cur = start;
    while (order.size() < n) {
        for (Node w : g.neighbors(cur)) {
            if (w != prev) {
                prev = cur;
                cur = w;
                break;
            }
        }
        order.push_back(cur);
    }
    return order;
}

/// Line algorithm with a given per-edge budget.
template <EdgeOracle Oracle>
IdentificationResult run_line_with_budget(Oracle& oracle, const Graph& g, std::uint64_t per_edge) {
    const auto order = line_order(g);
    const std::uint64_t before = oracle.total_pulls();
    IdentificationResult result;
    result.estimates.assign(g.node_count(), 0.0);
    double prefix = 0.0;
    Node best = order.front();
    for (std::size_t k = 1; k < order.size(); ++k) {
        prefix += sample_edge_mean(oracle, order[k - 1], order[k], per_edge);
        result.estimates[order[k]] = prefix;
        if (beats(prefix, order[k], result.estimates[best], best)) best = order[k];
    }
    result.chosen = best;
    result.total_pulls = oracle.total_pulls() - before;
    return result;
}

/// (epsilon, delta)-PAC identification on a path graph.
template <EdgeOracle Oracle>
IdentificationResult run_line(Oracle& oracle, const Graph& g, const PacParams& params) {
    if (!is_path_graph(g)) throw ValidationError("graph is not a path graph");
    if (g.node_count() == 1) return IdentificationResult{0, 0, {}, {0.0}};
    return run_line_with_budget(oracle, g, line_sample_size(params, g.node_count()));
}

/// Non-root degree-1 nodes of a tree rooted at `root`.
inline std::vector<Node> tree_leaves(const Graph& tree, Node root = 0) {
    std::vector<Node> leaves;
    for (Node v = 0; v < tree.node_count(); ++v) {
        if (v != root && tree.degree(v) == 1) leaves.push_back(v);
    }
    return leaves;
}

/// Tree algorithm with a given per-edge budget: every edge is pulled
/// `per_edge` times once, estimates are root-relative prefix sums, each leaf
/// contributes the best node on its root path, and the best contributor wins.
template <EdgeOracle Oracle>
IdentificationResult run_tree_with_budget(Oracle& oracle, const Graph& tree, std::uint64_t per_edge,
                                          Node root = 0) {
    if (!is_tree(tree)) throw ValidationError("graph is not a tree");
    const std::size_t n = tree.node_count();
    const std::uint64_t before = oracle.total_pulls();
    IdentificationResult result;
    result.estimates.assign(n, 0.0);
    std::vector<Node> parent(n, kUnreachable);
    std::vector<char> seen(n, 0);
    std::queue<Node> queue;
    queue.push(root);
    seen[root] = 1;
    while (!queue.empty()) {
        Node v = queue.front();
        queue.pop();
        for (Node w : tree.neighbors(v)) {
            if (seen[w]) continue;
            seen[w] = 1;
            parent[w] = v;
            result.estimates[w] = result.estimates[v] + sample_edge_mean(oracle, v, w, per_edge);
            queue.push(w);
        }
    }
    const auto& est = result.estimates;
    Node winner = root;
    for (Node leaf : tree_leaves(tree, root)) {
        Node leaf_best = leaf;
        for (Node v = leaf; v != kUnreachable; v = parent[v]) {
            if (beats(est[v], v, est[leaf_best], leaf_best)) leaf_best = v;
        }
        if (beats(est[leaf_best], leaf_best, est[winner], winner)) winner = leaf_best;
    }
    result.chosen = winner;
    result.total_pulls = oracle.total_pulls() - before;
    return result;
}

/// (epsilon, delta)-PAC identification on a tree rooted at node `root`.
template <EdgeOracle Oracle>
IdentificationResult run_tree(Oracle& oracle, const Graph& tree, const PacParams& params, Node root = 0) {
    if (!is_tree(tree)) throw ValidationError("graph is not a tree");
    if (tree.node_count() == 1) return IdentificationResult{0, 0, {}, {0.0}};
    const auto leaves = tree_leaves(tree, root);
    const auto per_edge = tree_sample_size(params, tree_diameter(tree), leaves.size());
    return run_tree_with_budget(oracle, tree, per_edge, root);
}

}  // namespace gbandit
