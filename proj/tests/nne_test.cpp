#include <gtest/gtest.h>

#include <random>

#include "gbandit/environment.hpp"
#include "gbandit/generators.hpp"
#include "gbandit/nne.hpp"
#include "oracles.hpp"

namespace gbandit {
namespace {

TEST(Nne, TwoNodesSinglePhase) {
    Environment env(line_graph(2), NodeRewards::from_values({0.2, 0.7}), NoiseModel::noiseless, 1);
    const PacParams params{0.2, 0.1};
    auto result = run_nne(env, line_graph(2), params);
    EXPECT_EQ(result.chosen, 1u);
    ASSERT_EQ(result.phases.size(), 1u);
    EXPECT_EQ(result.phases[0].per_edge_pulls, nne_phase_sample_size(params, 2, 2, 1));
    EXPECT_EQ(result.total_pulls, result.phases[0].per_edge_pulls);
}

TEST(Nne, MiddleOfLineWins) {
    Environment env(line_graph(3), NodeRewards::from_values({0.3, 0.9, 0.1}), NoiseModel::noiseless, 1);
    auto result = run_nne(env, line_graph(3), {0.1, 0.1});
    EXPECT_EQ(result.chosen, 1u);
    ASSERT_EQ(result.phases.size(), 1u);
    EXPECT_EQ(result.phases[0].survivors_after, 1u);
}

TEST(Nne, SingleNode) {
    Environment env(line_graph(1), NodeRewards::from_values({0.4}), NoiseModel::noiseless, 1);
    auto result = run_nne(env, line_graph(1), {0.1, 0.1});
    EXPECT_EQ(result.chosen, 0u);
    EXPECT_EQ(result.total_pulls, 0u);
}

TEST(Nne, PhaseInvariantsAndLedger) {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t n = 2 + rng() % 30;
        auto g = testing::random_connected(n, rng);
        auto rewards = NodeRewards::uniform01(n, rng());
        Environment env(g, rewards, NoiseModel::preference_sign, rng());
        auto result = run_nne(env, g, {0.5, 0.2});
        EXPECT_EQ(result.total_pulls, env.total_pulls());
        EXPECT_EQ(result.total_pulls, nne_pull_bound(result.phases));
        std::size_t activations = 0;
        for (const auto& p : result.phases) activations += p.safeguard;
        EXPECT_LE(result.phases.size(), ceil_log2(n) + activations);
        std::size_t prev_survivors = n;
        std::size_t prev_diameter = n;
        for (const auto& p : result.phases) {
            EXPECT_EQ(p.survivors_before, prev_survivors);
            EXPECT_LT(p.survivors_after, p.survivors_before);
            if (!p.safeguard) {
                EXPECT_LE(p.survivors_after, (p.survivors_before + 1) / 2);
            }
            EXPECT_GE(p.survivors_after, 1u);
            EXPECT_LE(p.diameter, prev_diameter);
            prev_survivors = p.survivors_after;
            prev_diameter = p.diameter;
        }
        EXPECT_EQ(prev_survivors, 1u);
    }
}

TEST(Nne, StarTriggersMatchedPairThinning) {
    // Leaves compare only through the centre, so every leaf is a local
    // maximum. The comparison graph is a star and matching removes one node;
    // once the centre is a relay the leaves compare directly.
    auto g = star_graph(7, 0);
    Environment env(g, NodeRewards::from_values({0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6}), NoiseModel::noiseless, 1);
    auto result = run_nne(env, g, {0.5, 0.1});
    EXPECT_EQ(result.chosen, 6u);
    ASSERT_FALSE(result.phases.empty());
    EXPECT_TRUE(result.phases[0].safeguard);
    EXPECT_EQ(result.phases[0].survivors_after, 6u);
    ASSERT_EQ(result.phases.size(), 2u);
    EXPECT_FALSE(result.phases[1].safeguard);
    EXPECT_EQ(result.phases[1].survivors_after, 1u);
}

TEST(Nne, NoiselessAlwaysFindsBestOnSmallGraphs) {
    std::mt19937_64 rng(3);
    for (std::size_t n = 1; n <= 5; ++n) {
        for (const auto& g : oracle::all_connected_graphs(n)) {
            auto rewards = n == 1 ? NodeRewards::from_values({0.5}) : NodeRewards::uniform01(n, rng());
            Environment env(g, rewards, NoiseModel::noiseless, 1);
            ASSERT_EQ(run_nne(env, g, {2.0, 0.5}).chosen, rewards.best()) << "n=" << n;
        }
    }
}

TEST(Nne, SpiderWebPac) {
    auto g = spider_web({3, 5});
    const PacParams params{0.2, 0.1};
    int failures = 0;
    const int reps = 40;
    for (int rep = 0; rep < reps; ++rep) {
        auto rewards = NodeRewards::uniform01(15, derive_seed(77, rep));
        Environment env(g, rewards, NoiseModel::preference_sign, derive_seed(78, rep));
        auto result = run_nne(env, g, params);
        failures += !rewards.is_epsilon_optimal(result.chosen, params.epsilon);
        EXPECT_LE(result.phases.size(), 4u);
    }
    EXPECT_LE(failures, reps / 10);
}

TEST(Nne, CustomSamplerTruncation) {
    auto g = line_graph(8);
    int calls = 0;
    auto outcome = run_elimination(g, [&](const PhaseView& view) -> std::optional<PhaseSample> {
        if (++calls > 1) return std::nullopt;
        PhaseSample s;
        // zig-zag rewards: odd nodes are local maxima, tied at 0.1
        for (std::size_t k = 0; k < view.sampled.edges.size(); ++k) s.edge_means.push_back(k % 2 ? -0.1 : 0.1);
        return s;
    });
    EXPECT_TRUE(outcome.truncated);
    ASSERT_TRUE(outcome.chosen.has_value());
    EXPECT_EQ(*outcome.chosen, 1u);
    EXPECT_EQ(outcome.phases.size(), 1u);

    auto none = run_elimination(g, [](const PhaseView&) -> std::optional<PhaseSample> { return std::nullopt; });
    EXPECT_TRUE(none.truncated);
    EXPECT_FALSE(none.chosen.has_value());
}

}  // namespace
}  // namespace gbandit
