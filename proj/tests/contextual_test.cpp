#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "gbandit/contextual.hpp"
#include "gbandit/generators.hpp"

namespace gbandit {
namespace {

Vector vec(std::initializer_list<double> v) {
    Vector x(static_cast<Eigen::Index>(v.size()));
    Eigen::Index k = 0;
    for (double e : v) x[k++] = e;
    return x;
}

ContextualEnvironment two_node_env(const Vector& ui, const Vector& uj, std::uint64_t seed,
                                   NoiseModel model = NoiseModel::preference_sign) {
    return ContextualEnvironment(line_graph(2), NodeDirections({ui, uj}), seed, model);
}

TEST(ContextualPull, OrthogonalContextHasZeroMean) {
    const Vector ui = vec({1, 0, 0});
    const Vector uj = vec({0.8, 0.6, 0});
    auto env = two_node_env(ui, uj, 3);
    const Vector x = vec({0, 0, 1});
    EXPECT_NEAR(env.pull_sum(0, 1, x, 100000) / 100000, 0.0, 0.01);
}

TEST(ContextualPull, IdenticalDirectionsAreFair) {
    auto env = two_node_env(vec({1}), vec({1}), 4);
    EXPECT_NEAR(env.pull_sum(0, 1, vec({1}), 100000) / 100000, 0.0, 0.01);
    EXPECT_NEAR(env.pull_sum(0, 1, vec({-1}), 100000) / 100000, 0.0, 0.01);
}

TEST(ContextualPull, MeanIsDirectionDifference) {
    const double h = std::sqrt(1.0 - 0.15 * 0.15);
    auto env = two_node_env(vec({-0.15, h, 0}), vec({0.15, h, 0}), 5);
    EXPECT_NEAR(env.pull_sum(0, 1, vec({1, 0, 0}), 100000) / 100000, 0.3, 0.01);
    EXPECT_NEAR(env.pull_sum(1, 0, vec({1, 0, 0}), 100000) / 100000, -0.3, 0.01);
}

TEST(ContextualPull, ValidationErrors) {
    EXPECT_THROW(two_node_env(vec({1, 0}), vec({-1, 0}), 1), ValidationError);
    EXPECT_THROW(two_node_env(vec({1, 0}), vec({0.5, 0}), 1), ValidationError);
    ContextualEnvironment env(line_graph(3), NodeDirections({vec({1, 0}), vec({1, 0}), vec({0.8, 0.6})}), 1);
    EXPECT_THROW(env.pull(0, 2, vec({1, 0})), ModelError);
    EXPECT_THROW(env.pull(0, 1, vec({1, 0, 0})), ValidationError);
    EXPECT_EQ(env.total_pulls(), 0u);
}

TEST(ContextualPull, RandomCapDirectionsAreWithinUnitDistance) {
    auto dirs = NodeDirections::random_cap(40, 4, 9);
    for (Node i = 0; i < 40; ++i) {
        EXPECT_NEAR(dirs[i].norm(), 1.0, 1e-12);
        for (Node j = 0; j < 40; ++j) EXPECT_LE((dirs[i] - dirs[j]).norm(), 1.0);
    }
}

TEST(Estimator, SingleUpdateClosedForm) {
    ContextualEdgeEstimator est(3);
    EXPECT_EQ(est.estimate(), Vector::Zero(3));
    est.update(vec({1, 0, 0}), 0.5);
    Matrix expected = Matrix::Identity(3, 3);
    expected(0, 0) = 2.0;
    EXPECT_EQ(est.a(), expected);
    EXPECT_TRUE(est.estimate().isApprox(vec({0.25, 0, 0})));
}

TEST(Estimator, ScalarRidgeLimit) {
    ContextualEdgeEstimator est(2);
    const Vector x = vec({0.6, 0.8});
    for (int t = 1; t <= 50; ++t) {
        est.update(x, 0.4);
        EXPECT_NEAR(est.predict(x), 0.4 * t / (1.0 + t), 1e-12);
        EXPECT_NEAR(est.quadratic(x), 1.0 / (1.0 + t), 1e-12);
    }
}

TEST(Estimator, RepeatedUpdateMatchesSingleUpdates) {
    ContextualEdgeEstimator a(3);
    ContextualEdgeEstimator b(3);
    const Vector x = vec({0, 0.6, 0.8});
    for (int k = 0; k < 7; ++k) a.update(x, 0.25);
    b.update_repeated(x, 1.75, 7);
    EXPECT_TRUE(a.a().isApprox(b.a(), 1e-14));
    EXPECT_TRUE(a.b().isApprox(b.b(), 1e-14));
    EXPECT_EQ(a.count(), 7u);
}

TEST(ConfidenceWidth, FreshEstimator) {
    ContextualEdgeEstimator est(4);
    const Vector x = vec({0.5, 0.5, 0.5, 0.5});
    EXPECT_NEAR(confidence_width_sq(est, x, 1.0 / std::exp(1.0), 1.0), 1.0, 1e-12);
    EXPECT_EQ(confidence_width(est, x, 0.1, 1.0), confidence_width(est, -x, 0.1, 1.0));
    EXPECT_THROW(confidence_width_sq(est, x, 0.1, 0.0), ValidationError);
}

TEST(ConfidenceWidth, ShermanMorrisonShrinkage) {
    ContextualEdgeEstimator est(3);
    const Vector x = vec({0, 1, 0});
    const double log_term = 3 * std::log(10.0) + std::log(1.0 / 0.05);
    for (int t = 1; t <= 20; ++t) {
        est.update(x, 1.0);
        EXPECT_NEAR(confidence_width_sq(est, x, 0.05, 10.0), log_term / (1.0 + t), 1e-12);
    }
}

TEST(ConfidenceWidth, NeverIncreasesUnderUpdates) {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 20; ++trial) {
        ContextualEdgeEstimator est(4);
        const Vector x = random_unit_vector(4, rng);
        double previous = est.quadratic(x);
        for (int t = 0; t < 100; ++t) {
            est.update(random_unit_vector(4, rng), 0.0);
            const double q = est.quadratic(x);
            ASSERT_LE(q, previous + 1e-15);
            previous = q;
        }
    }
}

TEST(Estimator, NoiselessRidgeConsistency) {
    std::mt19937_64 rng(5);
    for (std::size_t d = 1; d <= 5; ++d) {
        const Vector ui = d == 1 ? vec({1}) : random_unit_vector(d, rng);
        Vector uj = ui;
        if (d > 1) {
            uj = (ui + 0.5 * random_unit_vector(d, rng)).normalized();
            if ((uj - ui).norm() > 1.0) uj = ui;
        }
        auto env = two_node_env(ui, uj, 1, NoiseModel::noiseless);
        ContextualEdgeEstimator est(d);
        const Vector truth = uj - ui;
        double previous = std::numeric_limits<double>::infinity();
        for (int round = 1; round <= 6; ++round) {
            const std::uint64_t t = 10;
            for (std::size_t k = 0; k < d; ++k) {
                const Vector x = basis_vector(d, k);
                est.update_repeated(x, env.pull_sum(0, 1, x, t), t);
            }
            const double tmin = static_cast<double>(t * round);
            const double err = (est.estimate() - truth).norm();
            EXPECT_LE(err, 1.0 / (1.0 + tmin) + 1e-12);
            EXPECT_LE(err, previous + 1e-15);
            previous = err;
        }
    }
}

TEST(Estimator, LogDetPotentialInequality) {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t d = 1 + trial % 5;
        ContextualEdgeEstimator est(d);
        const double base = log_det_spd(est.a());
        double potential = 0.0;
        for (int t = 0; t < 300; ++t) {
            const Vector x = random_unit_vector(d, rng);
            est.update(x, 0.0);
            // A_t already contains x_t
            potential += est.quadratic(x);
        }
        EXPECT_LE(potential, log_det_spd(est.a()) - base + 1e-9);
    }
    EXPECT_THROW(log_det_spd(-Matrix::Identity(2, 2)), InvalidStateError);
}

TEST(EstimatorBank, SerializationIsBitExact) {
    std::mt19937_64 rng(2);
    EstimatorBank bank(4, 3);
    for (int stage = 0; stage < 3; ++stage) {
        bank.begin_stage();
        for (int k = 0; k < 30; ++k) bank[rng() % 4].update(random_unit_vector(3, rng), unit_double(rng()) * 2 - 1);
    }
    std::stringstream buffer;
    bank.write(buffer);
    auto restored = EstimatorBank::read(buffer);
    EXPECT_TRUE(restored == bank);
    std::stringstream bad("# estimator_bank d=3 edges=1\n0,1,2\n");
    EXPECT_THROW(EstimatorBank::read(bad), ValidationError);
}

TEST(ContextualStage, TwoNodeNoiselessPicksBetterNode) {
    auto env = two_node_env(vec({1, 0}), vec({0.8, 0.6}), 1, NoiseModel::noiseless);
    EstimatorBank bank(1, 2);
    auto r = run_contextual_stage(env, vec({0, 1}), {0.1, 0.1}, bank, 0.1);
    EXPECT_EQ(r.chosen, 1u);
    EXPECT_EQ(r.best, 1u);
    EXPECT_GT(r.pulls, 0u);
    auto flipped = run_contextual_stage(env, vec({1, 0}), {0.1, 0.1}, bank, 0.1, 2);
    EXPECT_EQ(flipped.chosen, 0u);
}

TEST(ContextualStage, RepeatedContextNeedsNoNewPulls) {
    auto g = cycle_graph(5);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        ContextualEnvironment env(g, NodeDirections::random_cap(5, 3, seed), seed);
        std::mt19937_64 rng(seed);
        const Vector x = random_unit_vector(3, rng);
        EstimatorBank bank(g.edge_count(), 3);
        auto first = run_contextual_stage(env, x, {0.3, 0.1}, bank, 0.05, 1);
        auto second = run_contextual_stage(env, x, {0.3, 0.1}, bank, 0.05, 2);
        EXPECT_LE(second.pulls, first.pulls);
        EXPECT_EQ(second.chosen, first.chosen);
    }
}

TEST(ContextualStage, OrthogonalContextGetsNoTransfer) {
    auto g = cycle_graph(5);
    double ratio_sum = 0.0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        ContextualEnvironment env(g, NodeDirections::random_cap(5, 3, seed + 100), seed);
        EstimatorBank bank(g.edge_count(), 3);
        auto first = run_contextual_stage(env, basis_vector(3, 0), {0.3, 0.1}, bank, 0.05, 1);
        auto second = run_contextual_stage(env, basis_vector(3, 1), {0.3, 0.1}, bank, 0.05, 2);
        EXPECT_GT(second.pulls, first.pulls / 2);
        ratio_sum += static_cast<double>(second.pulls) / static_cast<double>(first.pulls);
    }
    EXPECT_GT(ratio_sum / 10, 0.5);
}

TEST(ContextualSequence, EmptyAndBookkeeping) {
    ContextualEnvironment env(line_graph(3), NodeDirections::random_cap(3, 2, 1), 1);
    EXPECT_TRUE(run_contextual_sequence(env, {}, {0.3, 0.1}).empty());
    std::vector<Vector> contexts{basis_vector(2, 0), basis_vector(2, 1), basis_vector(2, 0)};
    auto r = run_contextual_sequence(env, contexts, {0.3, 0.1});
    ASSERT_EQ(r.size(), 3u);
    std::uint64_t sum = 0;
    for (const auto& s : r) {
        sum += s.pulls;
        EXPECT_EQ(s.cumulative_pulls, sum);
    }
    EXPECT_EQ(sum, env.total_pulls());
    EXPECT_THROW(run_contextual_sequence(env, {vec({1, 1})}, {0.3, 0.1}), ValidationError);
}

TEST(ContextualSequence, StageDeltaSchedules) {
    ContextualParams known{0.1, 0.1, true};
    EXPECT_DOUBLE_EQ(known.stage_delta(3, 20), 0.005);
    ContextualParams unknown{0.1, 0.1, false};
    double total = 0.0;
    for (std::size_t s = 1; s <= 100000; ++s) total += unknown.stage_delta(s, 0);
    EXPECT_LT(total, 0.1);
    EXPECT_NEAR(total, 0.1, 1e-5);
}

TEST(ContextualSequence, RestoredStateGivesIdenticalContinuation) {
    auto g = erdos_renyi_connected(6, 0.5, 3);
    const auto dirs = NodeDirections::random_cap(6, 3, 4);
    std::mt19937_64 rng(6);
    std::vector<Vector> contexts;
    for (int s = 0; s < 6; ++s) contexts.push_back(random_unit_vector(3, rng));
    const ContextualParams params{0.4, 0.1};

    ContextualEnvironment straight(g, dirs, 17);
    EstimatorBank bank(g.edge_count(), 3);
    auto all = run_contextual_sequence(straight, contexts, params, bank);

    ContextualEnvironment split(g, dirs, 17);
    EstimatorBank first(g.edge_count(), 3);
    std::vector<StageResult> results;
    for (std::size_t s = 0; s < 3; ++s) {
        results.push_back(run_contextual_stage(split, contexts[s], params, first, params.stage_delta(s + 1, 6), s + 1));
    }
    std::stringstream snapshot;
    first.write(snapshot);
    auto restored = EstimatorBank::read(snapshot);
    for (std::size_t s = 3; s < 6; ++s) {
        results.push_back(
            run_contextual_stage(split, contexts[s], params, restored, params.stage_delta(s + 1, 6), s + 1));
    }
    for (std::size_t s = 0; s < 6; ++s) {
        EXPECT_EQ(results[s].chosen, all[s].chosen);
        EXPECT_EQ(results[s].pulls, all[s].pulls);
    }
    EXPECT_TRUE(restored == bank);
}

}  // namespace
}  // namespace gbandit
