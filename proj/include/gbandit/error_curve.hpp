#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

#include "gbandit/environment.hpp"
#include "gbandit/errors.hpp"
#include "gbandit/nne.hpp"
#include "gbandit/pac.hpp"
#include "gbandit/spanning_tree.hpp"

namespace gbandit {

enum class CurveAlgorithm { nne, min_tree, max_tree };

inline std::string_view to_string(CurveAlgorithm a) {
    switch (a) {
        case CurveAlgorithm::nne: return "nne";
        case CurveAlgorithm::min_tree: return "min_tree";
        case CurveAlgorithm::max_tree: return "max_tree";
    }
    return "unknown";
}

inline CurveAlgorithm parse_curve_algorithm(std::string_view name) {
    if (name == "nne") return CurveAlgorithm::nne;
    if (name == "min_tree") return CurveAlgorithm::min_tree;
    if (name == "max_tree") return CurveAlgorithm::max_tree;
    throw ValidationError("unknown algorithm '" + std::string(name) + "' (expected nne, min_tree or max_tree)");
}

/// Outcome of a run truncated at a pull budget. `chosen` is empty when the
/// budget cannot pay for the first round of sampling.
struct BudgetedRun {
    std::optional<Node> chosen;
    std::uint64_t pulls = 0;
    std::size_t phases = 0;
};

/// Tree algorithm with floor(B / (n - 1)) pulls per tree edge.
template <EdgeOracle Oracle>
BudgetedRun run_tree_budgeted(Oracle& oracle, const Graph& tree, std::uint64_t budget) {
    if (tree.node_count() == 1) return {0, 0, 0};
    const std::uint64_t per_edge = budget / tree.edge_count();
    if (per_edge == 0) return {};
    const std::uint64_t before = oracle.total_pulls();
    auto result = run_tree_with_budget(oracle, tree, per_edge);
    return {result.chosen, oracle.total_pulls() - before, 1};
}

/// NNE under a total pull budget. A phase with more than two survivors gets
/// half of the remaining pulls (the final pair gets all of them), spread evenly
/// over the phase's sampled edges. If a later phase cannot afford one pull per
/// edge, the previous phase's leader is returned.
template <EdgeOracle Oracle>
BudgetedRun run_nne_budgeted(Oracle& oracle, const Graph& g, std::uint64_t budget) {
    const std::uint64_t before = oracle.total_pulls();
    std::uint64_t remaining = budget;
    auto outcome = run_elimination(g, [&](const PhaseView& view) -> std::optional<PhaseSample> {
        const std::uint64_t phase_budget = view.survivors.size() > 2 ? remaining / 2 : remaining;
        const std::uint64_t per_edge = phase_budget / view.sampled.edges.size();
        if (per_edge == 0) return std::nullopt;
        PhaseSample s;
        s.per_edge_pulls = per_edge;
        for (const Edge& e : view.sampled.edges) {
            s.edge_means.push_back(sample_edge_mean(oracle, e.a, e.b, per_edge));
            s.pulls += per_edge;
        }
        remaining -= s.pulls;
        return s;
    });
    return {outcome.chosen, oracle.total_pulls() - before, outcome.phases.size()};
}

struct CurvePoint {
    CurveAlgorithm algorithm = CurveAlgorithm::nne;
    std::uint64_t budget = 0;
    std::size_t repetitions = 0;
    std::size_t errors = 0;
    /// Budget too small to produce a winner; no error rate is reported.
    bool flagged = false;

    double error_rate() const {
        if (flagged || repetitions == 0) return std::numeric_limits<double>::quiet_NaN();
        return static_cast<double>(errors) / static_cast<double>(repetitions);
    }

    /// Binomial standard error of error_rate().
    double standard_error() const {
        const double p = error_rate();
        return std::sqrt(p * (1.0 - p) / static_cast<double>(repetitions));
    }
};

/// Builds the environment of one repetition. It must be defined on the full
/// graph; tree algorithms only pull tree edges.
using EnvironmentFactory = std::function<Environment(std::size_t repetition)>;

/// The graph the algorithm actually samples from.
inline Graph curve_sampling_graph(const Graph& g, CurveAlgorithm algorithm) {
    switch (algorithm) {
        case CurveAlgorithm::min_tree: return min_diameter_spanning_tree(g);
        case CurveAlgorithm::max_tree: return max_diameter_spanning_tree(g);
        case CurveAlgorithm::nne: break;
    }
    return g;
}

/// Empirical probability, per budget, that the truncated run does not return
/// the best node (epsilon = 0 scoring). Every budget reruns the repetition on
/// a fresh environment; counter-based draws make the samples of a smaller
/// budget a prefix of those of a larger one.
inline std::vector<CurvePoint> budgeted_error_curve(const EnvironmentFactory& factory, const Graph& g,
                                                    CurveAlgorithm algorithm, const std::vector<std::uint64_t>& budgets,
                                                    std::size_t repetitions) {
    if (repetitions < 1) throw ValidationError("repetitions must be at least 1");
    for (std::size_t k = 1; k < budgets.size(); ++k) {
        if (budgets[k] < budgets[k - 1]) throw ValidationError("budgets must be ascending");
    }
    const Graph sampling = curve_sampling_graph(g, algorithm);
    std::vector<CurvePoint> points;
    for (auto budget : budgets) points.push_back({algorithm, budget, repetitions, 0, false});
    for (std::size_t rep = 0; rep < repetitions; ++rep) {
        for (auto& point : points) {
            if (point.flagged) continue;
            Environment env = factory(rep);
            if (env.graph().node_count() != g.node_count()) {
                throw ValidationError("environment graph does not match the curve graph");
            }
            const BudgetedRun run = algorithm == CurveAlgorithm::nne ? run_nne_budgeted(env, sampling, point.budget)
                                                                      : run_tree_budgeted(env, sampling, point.budget);
            if (!run.chosen) {
                point.flagged = true;
                point.errors = 0;
                continue;
            }
            point.errors += *run.chosen != env.rewards().best();
        }
    }
    return points;
}

}  // namespace gbandit
