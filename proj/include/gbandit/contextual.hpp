#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <istream>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gbandit/environment.hpp"
#include "gbandit/errors.hpp"
#include "gbandit/graph.hpp"
#include "gbandit/nne.hpp"
#include "gbandit/pac.hpp"
#include "gbandit/rng.hpp"

namespace gbandit {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kUnitTolerance = 1e-9;

inline void require_unit(const Vector& x, const char* what = "context") {
    if (x.size() == 0 || std::abs(x.norm() - 1.0) > kUnitTolerance) {
        throw ValidationError(std::string(what) + " must be a unit vector");
    }
}

/// Hidden unit directions u_i; node i is worth u_i . x at context x.
class NodeDirections {
public:
    NodeDirections() = default;

    explicit NodeDirections(std::vector<Vector> directions) : u_(std::move(directions)) {
        if (u_.empty()) throw ValidationError("at least one node direction is required");
        for (const auto& u : u_) {
            if (u.size() != u_.front().size()) throw ValidationError("node directions differ in dimension");
            require_unit(u, "node direction");
        }
    }

    /// Directions inside a spherical cap of half-angle `max_angle` around a
    /// random axis. With max_angle <= pi/6 every pairwise distance is <= 1.
    static NodeDirections random_cap(std::size_t n, std::size_t d, std::uint64_t seed, double max_angle = 0.5) {
        if (d < 2) throw ValidationError("random directions need d >= 2");
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> normal;
        auto gaussian = [&] {
            Vector v(static_cast<Eigen::Index>(d));
            for (Eigen::Index k = 0; k < v.size(); ++k) v[k] = normal(rng);
            return v;
        };
        const Vector axis = gaussian().normalized();
        std::vector<Vector> dirs;
        for (std::size_t i = 0; i < n; ++i) {
            Vector w = gaussian();
            w -= w.dot(axis) * axis;
            w.normalize();
            const double theta = max_angle * std::pow(unit_double(rng()), 1.0 / static_cast<double>(d - 1));
            dirs.push_back(std::cos(theta) * axis + std::sin(theta) * w);
        }
        return NodeDirections(std::move(dirs));
    }

    std::size_t size() const { return u_.size(); }
    std::size_t dimension() const { return static_cast<std::size_t>(u_.front().size()); }
    const Vector& operator[](Node v) const { return u_.at(v); }

    double value(Node v, const Vector& x) const { return u_.at(v).dot(x); }

    /// argmax_i u_i . x, ties to the lower index.
    Node best(const Vector& x) const {
        Node best = 0;
        for (Node v = 1; v < u_.size(); ++v) {
            if (value(v, x) > value(best, x)) best = v;
        }
        return best;
    }

    bool is_epsilon_optimal(Node v, const Vector& x, double epsilon) const {
        return value(v, x) >= value(best(x), x) - epsilon;
    }

private:
    std::vector<Vector> u_;
};

/// Edge pulls whose mean is (u_j - u_i) . x.
class ContextualEnvironment {
public:
    ContextualEnvironment(Graph graph, NodeDirections directions, std::uint64_t seed,
                          NoiseModel model = NoiseModel::preference_sign)
        : graph_(std::move(graph)), u_(std::move(directions)), model_(model), stream_(seed) {
        if (u_.size() != graph_.node_count()) throw ValidationError("direction count does not match the graph");
        for (const Edge& e : graph_.edges()) {
            if ((u_[e.b] - u_[e.a]).norm() > 1.0 + 1e-12) {
                throw ValidationError("adjacent directions farther than 1 apart give means outside [-1, 1]");
            }
        }
        ledger_.per_edge.assign(graph_.edge_count(), 0);
    }

    const Graph& graph() const { return graph_; }
    const NodeDirections& directions() const { return u_; }
    std::size_t dimension() const { return u_.dimension(); }
    NoiseModel noise_model() const { return model_; }
    const PullLedger& ledger() const { return ledger_; }
    std::uint64_t total_pulls() const { return ledger_.total; }

    double pull(Node i, Node j, const Vector& x) { return pull_sum(i, j, x, 1); }

    double pull_sum(Node i, Node j, const Vector& x, std::uint64_t count) {
        const std::size_t e = graph_.require_edge(i, j);
        if (static_cast<std::size_t>(x.size()) != dimension()) throw ValidationError("context has the wrong dimension");
        const Edge& edge = graph_.edges()[e];
        const double mean = std::clamp((u_[edge.b] - u_[edge.a]).dot(x), -1.0, 1.0);
        const std::uint64_t key = stream_.stream_key(e);
        std::uint64_t& counter = ledger_.per_edge[e];
        double sum = 0.0;
        for (std::uint64_t k = 0; k < count; ++k) {
            sum += draw_observation(model_, mean, unit_double(CounterStream::bits_from_key(key, counter++)));
        }
        ledger_.total += count;
        return i == edge.a ? sum : -sum;
    }

private:
    Graph graph_;
    NodeDirections u_;
    NoiseModel model_;
    CounterStream stream_;
    PullLedger ledger_;
};

/// Ridge estimator of one edge's difference vector u_b - u_a:
/// A = I + sum x x^T, b = sum obs * x, estimate A^{-1} b.
class ContextualEdgeEstimator {
public:
    ContextualEdgeEstimator() = default;
    explicit ContextualEdgeEstimator(std::size_t d)
        : a_(Matrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d))),
          b_(Vector::Zero(static_cast<Eigen::Index>(d))) {}

    std::size_t dimension() const { return static_cast<std::size_t>(b_.size()); }
    const Matrix& a() const { return a_; }
    const Vector& b() const { return b_; }
    std::uint64_t count() const { return count_; }
    const std::vector<std::uint64_t>& stage_counts() const { return stage_counts_; }

    void begin_stage() { stage_counts_.push_back(0); }

    void update(const Vector& x, double observation) { update_repeated(x, observation, 1); }

    /// `count` pulls at the same x whose observations sum to `observation_sum`.
    void update_repeated(const Vector& x, double observation_sum, std::uint64_t count) {
        if (count == 0) return;
        a_.noalias() += static_cast<double>(count) * x * x.transpose();
        b_ += observation_sum * x;
        count_ += count;
        if (stage_counts_.empty()) stage_counts_.push_back(0);
        stage_counts_.back() += count;
    }

    Vector estimate() const { return a_.ldlt().solve(b_); }
    double predict(const Vector& x) const { return estimate().dot(x); }

    /// x^T A^{-1} x.
    double quadratic(const Vector& x) const { return x.dot(a_.ldlt().solve(x)); }

    /// Pulls along x equivalent to the information A holds in that direction:
    /// 1 / (x^T A^{-1} x) - 1.
    double effective_count(const Vector& x) const { return 1.0 / quadratic(x) - 1.0; }

    friend bool operator==(const ContextualEdgeEstimator&, const ContextualEdgeEstimator&) = default;

private:
    friend class EstimatorBank;
    Matrix a_;
    Vector b_;
    std::uint64_t count_ = 0;
    std::vector<std::uint64_t> stage_counts_;
};

/// Squared confidence width x^T A^{-1} x (d log S + log 1/delta), S >= 1 the
/// pull total the width is taken at.
inline double confidence_width_sq(double quadratic, std::size_t d, double delta, double pull_total) {
    if (!(delta > 0.0 && delta < 1.0)) throw ValidationError("delta must lie in (0, 1)");
    if (!(pull_total >= 1.0)) throw ValidationError("the pull total must be at least 1");
    return quadratic * (static_cast<double>(d) * std::log(pull_total) + std::log(1.0 / delta));
}

inline double confidence_width_sq(const ContextualEdgeEstimator& est, const Vector& x, double delta,
                                  double pull_total) {
    return confidence_width_sq(est.quadratic(x), est.dimension(), delta, pull_total);
}

inline double confidence_width(const ContextualEdgeEstimator& est, const Vector& x, double delta, double pull_total) {
    return std::sqrt(confidence_width_sq(est, x, delta, pull_total));
}

/// log det(A) for symmetric positive definite A.
inline double log_det_spd(const Matrix& a) {
    Eigen::LLT<Matrix> llt(a);
    if (llt.info() != Eigen::Success) throw InvalidStateError("matrix is not positive definite");
    return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

/// One estimator per graph edge, in graph edge order.
class EstimatorBank {
public:
    EstimatorBank() = default;
    EstimatorBank(std::size_t edge_count, std::size_t d) : d_(d), edges_(edge_count, ContextualEdgeEstimator(d)) {}

    std::size_t dimension() const { return d_; }
    std::size_t size() const { return edges_.size(); }
    ContextualEdgeEstimator& operator[](std::size_t e) { return edges_.at(e); }
    const ContextualEdgeEstimator& operator[](std::size_t e) const { return edges_.at(e); }

    void begin_stage() {
        for (auto& e : edges_) e.begin_stage();
    }

    friend bool operator==(const EstimatorBank&, const EstimatorBank&) = default;

    /// CSV with one row per edge: edge,count,A (row-major),b,stage counts
    /// (';'-separated). Doubles use shortest round-trip form, so reading
    /// back is bit-exact.
    void write(std::ostream& out) const {
        out << "# estimator_bank d=" << d_ << " edges=" << edges_.size() << '\n';
        for (std::size_t e = 0; e < edges_.size(); ++e) {
            const auto& est = edges_[e];
            out << e << ',' << est.count_;
            for (Eigen::Index r = 0; r < est.a_.rows(); ++r)
                for (Eigen::Index c = 0; c < est.a_.cols(); ++c) out << ',' << format_double(est.a_(r, c));
            for (Eigen::Index k = 0; k < est.b_.size(); ++k) out << ',' << format_double(est.b_[k]);
            out << ',';
            for (std::size_t s = 0; s < est.stage_counts_.size(); ++s) out << (s ? ";" : "") << est.stage_counts_[s];
            out << '\n';
        }
    }

    static EstimatorBank read(std::istream& in) {
        std::string line;
        if (!std::getline(in, line)) throw ValidationError("empty estimator bank");
        std::size_t d = 0;
        std::size_t m = 0;
        if (std::sscanf(line.c_str(), "# estimator_bank d=%zu edges=%zu", &d, &m) != 2 || d == 0) {
            throw ValidationError("bad estimator bank header: " + line);
        }
        EstimatorBank bank(m, d);
        const auto di = static_cast<Eigen::Index>(d);
        for (std::size_t e = 0; e < m; ++e) {
            if (!std::getline(in, line)) throw ValidationError("estimator bank truncated");
            std::vector<std::string> fields;
            std::stringstream row(line);
            for (std::string f; std::getline(row, f, ',');) fields.push_back(f);
            if (line.ends_with(',')) fields.emplace_back();
            const std::size_t expected = 2 + d * d + d + 1;
            if (fields.size() != expected || std::stoull(fields[0]) != e) {
                throw ValidationError("bad estimator bank row " + std::to_string(e));
            }
            auto& est = bank.edges_[e];
            est.count_ = std::stoull(fields[1]);
            std::size_t k = 2;
            for (Eigen::Index r = 0; r < di; ++r)
                for (Eigen::Index c = 0; c < di; ++c) est.a_(r, c) = parse_double(fields[k++]);
            for (Eigen::Index j = 0; j < di; ++j) est.b_[j] = parse_double(fields[k++]);
            est.stage_counts_.clear();
            std::stringstream stages(fields[k]);
            for (std::string s; std::getline(stages, s, ';');) est.stage_counts_.push_back(std::stoull(s));
        }
        return bank;
    }

private:
    static std::string format_double(double v) {
        char buf[32];
        auto res = std::to_chars(buf, buf + sizeof buf, v);
        return std::string(buf, res.ptr);
    }

    static double parse_double(const std::string& s) {
        double v = 0.0;
        auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw ValidationError("bad number '" + s + "'");
        return v;
    }

    std::size_t d_ = 0;
    std::vector<ContextualEdgeEstimator> edges_;
};

struct ContextualParams {
    double epsilon = 0.1;
    double delta = 0.1;
    /// Per-stage confidence delta / S; without a horizon, stage s uses
    /// 6 delta / (pi^2 s^2).
    bool horizon_known = true;

    void validate() const { PacParams{epsilon, delta}.validate(); }

    double stage_delta(std::size_t stage, std::size_t horizon) const {
        if (horizon_known) return delta / static_cast<double>(horizon);
        const double s = static_cast<double>(stage);
        return 6.0 * delta / (std::numbers::pi * std::numbers::pi * s * s);
    }
};

struct StageResult {
    std::size_t stage = 0;  // 1-based
    Node chosen = 0;
    Node best = 0;
    std::uint64_t pulls = 0;
    std::uint64_t cumulative_pulls = 0;
    std::vector<PhaseRecord> phases;
};

namespace detail {

/// Smallest k >= 0 such that k more pulls along x (current x^T A^{-1} x = q,
/// current pull total `total`) reach either the width threshold or an
/// effective count of `cap`. Uses 1/q_k = 1/q + k.
inline std::uint64_t pulls_to_stop(double q, std::uint64_t total, std::size_t d, double delta, double threshold,
                                   std::uint64_t cap) {
    const double inv_q = 1.0 / q;
    const double cap_pulls = std::ceil(static_cast<double>(cap) + 1.0 - inv_q - 1e-9);
    const auto k_cap = static_cast<std::uint64_t>(std::max(0.0, cap_pulls));
    for (std::uint64_t k = 0; k < k_cap; ++k) {
        const double n = std::max(1.0, static_cast<double>(total + k));
        if (confidence_width_sq(1.0 / (inv_q + static_cast<double>(k)), d, delta, n) <= threshold) return k;
    }
    return k_cap;
}

}  // namespace detail

/// One stage of contextual elimination at context x: the NNE phase loop where
/// each sampled edge is pulled until its width at x is at most
/// eps / (2 D_i ceil(log2 n)) or its effective count along x reaches the
/// phase's per-edge sample size. Edges already below both stop immediately.
inline StageResult run_contextual_stage(ContextualEnvironment& env, const Vector& x, const ContextualParams& params,
                                        EstimatorBank& bank, double stage_delta, std::size_t stage = 1) {
    require_unit(x);
    params.validate();
    const Graph& g = env.graph();
    if (bank.size() != g.edge_count() || bank.dimension() != env.dimension()) {
        throw ValidationError("estimator bank does not match the environment");
    }
    const std::size_t d = env.dimension();
    const std::uint64_t before = env.total_pulls();
    bank.begin_stage();
    const PacParams pac{params.epsilon, stage_delta};

    auto outcome = run_elimination(g, [&](const PhaseView& view) -> std::optional<PhaseSample> {
        const double phases = static_cast<double>(ceil_log2(view.node_total));
        const double c = 1.0 / (4.0 * static_cast<double>(view.diameter * view.diameter) * phases * phases);
        const double threshold = c * params.epsilon * params.epsilon;
        const double edge_delta = stage_delta / (static_cast<double>(view.sampled.edges.size()) * phases);
        PhaseSample s;
        s.per_edge_pulls = nne_phase_sample_size(pac, view.node_total, view.survivors.size(), view.diameter);
        for (const Edge& e : view.sampled.edges) {
            auto& est = bank[g.require_edge(e.a, e.b)];
            const std::uint64_t k =
                detail::pulls_to_stop(est.quadratic(x), est.count(), d, edge_delta, threshold, s.per_edge_pulls);
            if (k > 0) est.update_repeated(x, env.pull_sum(e.a, e.b, x, k), k);
            s.pulls += k;
            s.edge_means.push_back(est.predict(x));
        }
        return s;
    });

    StageResult result;
    result.stage = stage;
    result.chosen = *outcome.chosen;
    result.best = env.directions().best(x);
    result.pulls = env.total_pulls() - before;
    result.phases = std::move(outcome.phases);
    return result;
}

/// Stages over a fixed context sequence with shared estimator state.
inline std::vector<StageResult> run_contextual_sequence(ContextualEnvironment& env, const std::vector<Vector>& contexts,
                                                        const ContextualParams& params, EstimatorBank& bank) {
    std::vector<StageResult> out;
    for (const auto& x : contexts) require_unit(x);
    std::uint64_t cumulative = 0;
    for (std::size_t s = 0; s < contexts.size(); ++s) {
        auto r = run_contextual_stage(env, contexts[s], params, bank, params.stage_delta(s + 1, contexts.size()), s + 1);
        cumulative += r.pulls;
        r.cumulative_pulls = cumulative;
        out.push_back(std::move(r));
    }
    return out;
}

inline std::vector<StageResult> run_contextual_sequence(ContextualEnvironment& env, const std::vector<Vector>& contexts,
                                                        const ContextualParams& params) {
    EstimatorBank bank(env.graph().edge_count(), env.dimension());
    return run_contextual_sequence(env, contexts, params, bank);
}

/// Standard basis vector e_k in R^d.
inline Vector basis_vector(std::size_t d, std::size_t k) {
    Vector v = Vector::Zero(static_cast<Eigen::Index>(d));
    v[static_cast<Eigen::Index>(k)] = 1.0;
    return v;
}

/// Uniform random unit vector.
inline Vector random_unit_vector(std::size_t d, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    Vector v(static_cast<Eigen::Index>(d));
    do {
        for (Eigen::Index k = 0; k < v.size(); ++k) v[k] = normal(rng);
    } while (v.norm() == 0.0);
    return v.normalized();
}

}  // namespace gbandit
