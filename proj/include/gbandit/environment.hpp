#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "gbandit/errors.hpp"
#include "gbandit/graph.hpp"
#include "gbandit/rng.hpp"

namespace gbandit {

/// Distribution of a single edge observation given its mean d = r_j - r_i.
enum class NoiseModel {
    preference_sign,  ///< +1 w.p. (1+d)/2, -1 otherwise
    uniform_bounded,  ///< uniform on [d - w, d + w], w = 1 - |d|
    noiseless,        ///< exactly d; zero-variance stub for oracle tests
};

inline std::string_view to_string(NoiseModel m) {
    switch (m) {
        case NoiseModel::preference_sign: return "preference_sign";
        case NoiseModel::uniform_bounded: return "uniform_bounded";
        case NoiseModel::noiseless: return "noiseless";
    }
    return "unknown";
}

inline NoiseModel parse_noise_model(std::string_view name) {
    if (name == "preference_sign") return NoiseModel::preference_sign;
    if (name == "uniform_bounded") return NoiseModel::uniform_bounded;
    if (name == "noiseless") return NoiseModel::noiseless;
    throw ValidationError("unknown noise model '" + std::string(name) + "'");
}

/// Maps a uniform variate u in [0,1) to an observation with mean `mean`.
inline double draw_observation(NoiseModel model, double mean, double u) {
    switch (model) {
        case NoiseModel::preference_sign: return u < 0.5 * (1.0 + mean) ? 1.0 : -1.0;
        case NoiseModel::uniform_bounded: return mean + (1.0 - std::abs(mean)) * (2.0 * u - 1.0);
        case NoiseModel::noiseless: return mean;
    }
    return mean;
}

/// Hidden node values in [0, 1] with a unique maximum.
class NodeRewards {
public:
    NodeRewards() = default;

    static NodeRewards from_values(std::vector<double> values) {
        if (values.empty()) throw ValidationError("reward vector is empty");
        for (double r : values) {
            if (!(r >= 0.0 && r <= 1.0)) throw ValidationError("rewards must lie in [0, 1]");
        }
        NodeRewards out;
        out.values_ = std::move(values);
        if (!out.locate_best()) throw ValidationError("tied maximum reward");
        return out;
    }

    /// I.i.d. uniform [0, 1] rewards; a tied maximum triggers a redraw.
    static NodeRewards uniform01(std::size_t n, std::uint64_t seed) {
        if (n < 2) throw ValidationError("uniform01 rewards need at least 2 nodes");
        std::mt19937_64 engine(seed);
        NodeRewards out;
        out.values_.resize(n);
        do {
            for (double& r : out.values_) r = unit_double(engine());
        } while (!out.locate_best());
        return out;
    }

    std::size_t size() const { return values_.size(); }
    double operator[](Node v) const { return values_.at(v); }
    const std::vector<double>& values() const { return values_; }
    Node best() const { return best_; }
    double best_value() const { return values_[best_]; }
    /// min over j != best of r_best - r_j; 0 for a single node.
    double gap() const { return gap_; }
    bool is_epsilon_optimal(Node v, double epsilon) const { return values_.at(v) >= best_value() - epsilon; }

private:
    bool locate_best() {
        best_ = 0;
        for (Node v = 1; v < values_.size(); ++v) {
            if (values_[v] > values_[best_]) best_ = v;
        }
        double second = -1.0;
        for (Node v = 0; v < values_.size(); ++v) {
            if (v == best_) continue;
            if (values_[v] == values_[best_]) return false;
            second = std::max(second, values_[v]);
        }
        gap_ = values_.size() > 1 ? values_[best_] - second : 0.0;
        return true;
    }

    std::vector<double> values_;
    Node best_ = 0;
    double gap_ = 0.0;
};

/// CSV "node,reward" with 1-based nodes.
inline void write_rewards_csv(std::ostream& out, const NodeRewards& rewards) {
    out << "node,reward\n";
    out.precision(17);
    for (Node v = 0; v < rewards.size(); ++v) out << v + 1 << ',' << rewards[v] << '\n';
}

inline NodeRewards read_rewards_csv(std::istream& in) {
    std::string line;
    std::vector<std::pair<std::size_t, double>> rows;
    while (std::getline(in, line)) {
        if (line.empty() || line.rfind("node", 0) == 0) continue;
        std::istringstream fields(line);
        std::size_t node = 0;
        char comma = 0;
        double reward = 0.0;
        if (!(fields >> node >> comma >> reward) || comma != ',' || node == 0) {
            throw ValidationError("malformed reward row '" + line + "'");
        }
        rows.emplace_back(node, reward);
    }
    std::vector<double> values(rows.size(), -1.0);
    for (auto [node, reward] : rows) {
        if (node > values.size()) throw ValidationError("reward rows must cover nodes 1..n");
        values[node - 1] = reward;
    }
    return NodeRewards::from_values(std::move(values));
}

/// Pull accounting; per-edge counters are indexed like Graph::edges().
struct PullLedger {
    std::vector<std::uint64_t> per_edge;
    std::uint64_t total = 0;
};

/// Ground truth plus the only observation channel. Each edge owns a
/// counter-based substream, so its draw sequence is independent of how pulls
/// on different edges interleave. Observations are drawn for the canonical
/// orientation (lower index first); pulling (j, i) returns the negation.
class Environment {
public:
    Environment(Graph graph, NodeRewards rewards, NoiseModel model, std::uint64_t seed)
        : graph_(std::move(graph)), rewards_(std::move(rewards)), model_(model), stream_(seed) {
        if (rewards_.size() != graph_.node_count()) {
            throw ValidationError("reward vector size does not match the graph");
        }
        ledger_.per_edge.assign(graph_.edge_count(), 0);
    }

    const Graph& graph() const { return graph_; }
    NoiseModel noise_model() const { return model_; }
    std::uint64_t seed() const { return stream_.seed(); }
    const PullLedger& ledger() const { return ledger_; }
    std::uint64_t total_pulls() const { return ledger_.total; }

    /// Scoring access for harnesses; algorithms only see pull().
    const NodeRewards& rewards() const { return rewards_; }

    double pull(Node i, Node j) { return pull_sum(i, j, 1); }

    /// Sum of `count` fresh observations of edge (i, j).
    double pull_sum(Node i, Node j, std::uint64_t count) {
        const std::size_t e = graph_.require_edge(i, j);
        const Edge& edge = graph_.edges()[e];
        const double mean = rewards_[edge.b] - rewards_[edge.a];
        const std::uint64_t key = stream_.stream_key(e);
        std::uint64_t& counter = ledger_.per_edge[e];
        double sum = 0.0;
        if (model_ == NoiseModel::noiseless) {
            sum = mean * static_cast<double>(count);
            counter += count;
        } else {
            for (std::uint64_t k = 0; k < count; ++k) {
                const double x = draw_observation(model_, mean, unit_double(CounterStream::bits_from_key(key, counter++)));
                assert(x >= -1.0 && x <= 1.0);
                sum += x;
            }
        }
        ledger_.total += count;
        return i == edge.a ? sum : -sum;
    }

    /// Composed-edge observation: one fresh pull of every edge along p.
    double pull_path(const Path& p) {
        validate_path(graph_, p);
        double sum = 0.0;
        for (std::size_t k = 1; k < p.nodes.size(); ++k) sum += pull(p.nodes[k - 1], p.nodes[k]);
        return sum;
    }

private:
    Graph graph_;
    NodeRewards rewards_;
    NoiseModel model_;
    CounterStream stream_;
    PullLedger ledger_;
};

}  // namespace gbandit
