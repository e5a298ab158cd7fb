#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "gbandit/errors.hpp"
#include "gbandit/graph.hpp"
#include "gbandit/pac.hpp"
#include "gbandit/shortest_paths.hpp"

namespace gbandit {

/// What a phase sampler sees.
struct PhaseView {
    std::size_t phase = 1;
    std::size_t node_total = 0;
    const std::vector<Node>& survivors;
    const Subgraph& sampled;
    std::size_t diameter = 0;
};

/// Sampler output: oriented (a -> b) edge means aligned with sampled.edges.
struct PhaseSample {
    std::vector<double> edge_means;
    std::uint64_t per_edge_pulls = 0;
    std::uint64_t pulls = 0;
};

struct EliminationOutcome {
    /// Empty only when the very first phase could not be sampled.
    std::optional<Node> chosen;
    bool truncated = false;
    std::vector<PhaseRecord> phases;
    std::vector<double> estimates;
    std::size_t safeguard_activations = 0;
};

namespace detail {

/// Estimates of r_v - r_ref for each survivor, composed along stored paths
/// from the lowest-indexed survivor.
inline std::vector<double> survivor_estimates(const ShortestPathSet& sp, const Graph& g,
                                              const std::vector<Node>& survivors, const std::vector<double>& edge_mean,
                                              std::size_t node_count) {
    std::vector<double> est(node_count, std::numeric_limits<double>::quiet_NaN());
    const Node ref = survivors.front();
    for (Node v : survivors) {
        const auto p = sp.path(ref, v);
        double sum = 0.0;
        for (std::size_t k = 1; k < p.nodes.size(); ++k) {
            const Node a = p.nodes[k - 1];
            const Node b = p.nodes[k];
            const double m = edge_mean[g.require_edge(a, b)];
            sum += a < b ? m : -m;
        }
        est[v] = sum;
    }
    return est;
}

/// Survivors that are local maxima of the comparison graph, plus the
/// matched-pair thinning used when the maxima fail to halve the survivor set.
struct Selection {
    std::vector<Node> next;
    bool safeguard = false;
};

inline Selection select_survivors(const ShortestPathSet& sp, const std::vector<Node>& survivors,
                                  const std::vector<double>& est) {
    const std::size_t k = survivors.size();
    std::vector<std::vector<char>> adjacent(k, std::vector<char>(k, 0));
    for (std::size_t x = 0; x < k; ++x) {
        for (std::size_t y = x + 1; y < k; ++y) {
            adjacent[x][y] = adjacent[y][x] = sp.comparison_adjacent(survivors[x], survivors[y]) ? 1 : 0;
        }
    }
    std::vector<char> keep(k, 1);
    for (std::size_t x = 0; x < k; ++x) {
        for (std::size_t y = 0; y < k && keep[x]; ++y) {
            if (adjacent[x][y] && beats(est[survivors[y]], survivors[y], est[survivors[x]], survivors[x])) keep[x] = 0;
        }
    }
    Selection out;
    const auto kept = static_cast<std::size_t>(std::count(keep.begin(), keep.end(), 1));
    if (kept > (k + 1) / 2) {
        out.safeguard = true;
        std::vector<char> matched(k, 0);
        for (std::size_t x = 0; x < k; ++x) {
            for (std::size_t y = x + 1; y < k && !matched[x]; ++y) {
                if (!adjacent[x][y] || matched[y]) continue;
                matched[x] = matched[y] = 1;
                const bool x_wins = beats(est[survivors[x]], survivors[x], est[survivors[y]], survivors[y]);
                keep[x_wins ? y : x] = 0;
            }
        }
    }
    for (std::size_t x = 0; x < k; ++x) {
        if (keep[x]) out.next.push_back(survivors[x]);
    }
    return out;
}

}  // namespace detail

/// Phased node elimination over stored shortest paths. Each phase forms the
/// sampled subgraph of the survivors, asks `sampler` for edge means, scores
/// survivors by composed estimates and keeps the local maxima. The sampler may
/// return nullopt to stop early (budget exhausted); the leader of the last
/// completed phase is then reported.
template <class Sampler>
EliminationOutcome run_elimination(const Graph& g, Sampler&& sampler) {
    const std::size_t n = g.node_count();
    EliminationOutcome out;
    out.estimates.assign(n, std::numeric_limits<double>::quiet_NaN());
    ShortestPathSet sp(g);
    if (n == 1) {
        out.chosen = 0;
        out.estimates[0] = 0.0;
        return out;
    }
    std::optional<Node> leader;
    std::size_t previous_diameter = std::numeric_limits<std::size_t>::max();
    for (std::size_t phase = 1; sp.survivor_count() > 1; ++phase) {
        const auto survivors = sp.survivors();
        const Subgraph sampled = sp.sampled_subgraph(survivors);
        const std::size_t diameter = sp.diameter();
        if (diameter > previous_diameter) throw InvalidStateError("phase diameter increased");
        previous_diameter = diameter;

        std::optional<PhaseSample> sample = sampler(PhaseView{phase, n, survivors, sampled, diameter});
        if (!sample) {
            out.truncated = true;
            out.chosen = leader;
            return out;
        }
        if (sample->edge_means.size() != sampled.edges.size()) {
            throw InvalidStateError("sampler returned the wrong number of edge means");
        }
        std::vector<double> edge_mean(g.edge_count(), 0.0);
        for (std::size_t k = 0; k < sampled.edges.size(); ++k) {
            edge_mean[g.require_edge(sampled.edges[k].a, sampled.edges[k].b)] = sample->edge_means[k];
        }
        auto est = detail::survivor_estimates(sp, g, survivors, edge_mean, n);
        auto selection = detail::select_survivors(sp, survivors, est);
        if (selection.next.empty() || selection.next.size() >= survivors.size()) {
            throw InvalidStateError("elimination phase made no progress");
        }
        leader = survivors.front();
        for (Node v : survivors) {
            if (beats(est[v], v, est[*leader], *leader)) leader = v;
        }
        for (Node v : survivors) {
            if (!std::binary_search(selection.next.begin(), selection.next.end(), v)) sp.prune(v);
        }
        if (selection.safeguard) ++out.safeguard_activations;

        PhaseRecord record;
        record.phase = phase;
        record.survivors_before = survivors.size();
        record.survivors_after = selection.next.size();
        record.sampled_edges = sampled.edges.size();
        record.diameter = diameter;
        record.per_edge_pulls = sample->per_edge_pulls;
        record.pulls = sample->pulls;
        record.safeguard = selection.safeguard;
        out.phases.push_back(record);
        out.estimates = std::move(est);
    }
    out.chosen = sp.survivors().front();
    return out;
}

/// Network node elimination: every phase pulls each sampled edge
/// nne_phase_sample_size(...) times with fresh estimates.
template <EdgeOracle Oracle>
IdentificationResult run_nne(Oracle& oracle, const Graph& g, const PacParams& params) {
    if (g.node_count() > 1) params.validate();
    const std::uint64_t before = oracle.total_pulls();
    auto outcome = run_elimination(g, [&](const PhaseView& view) -> std::optional<PhaseSample> {
        PhaseSample s;
        s.per_edge_pulls = nne_phase_sample_size(params, view.node_total, view.survivors.size(), view.diameter);
        s.edge_means.reserve(view.sampled.edges.size());
        for (const Edge& e : view.sampled.edges) {
            s.edge_means.push_back(sample_edge_mean(oracle, e.a, e.b, s.per_edge_pulls));
            s.pulls += s.per_edge_pulls;
        }
        return s;
    });
    IdentificationResult result;
    result.chosen = *outcome.chosen;
    result.total_pulls = oracle.total_pulls() - before;
    result.phases = std::move(outcome.phases);
    result.estimates = std::move(outcome.estimates);
    return result;
}

/// Sum over phases of |edges(G_i^S)| * t_i, the pull budget NNE commits to.
inline std::uint64_t nne_pull_bound(const std::vector<PhaseRecord>& phases) {
    std::uint64_t total = 0;
    for (const auto& p : phases) total += static_cast<std::uint64_t>(p.sampled_edges) * p.per_edge_pulls;
    return total;
}

}  // namespace gbandit
