#include <gtest/gtest.h>

#include <cmath>

#include "featmc/checker.hpp"
#include "featmc/errors.hpp"
#include "featmc/simulation.hpp"
#include "support.hpp"

using namespace featmc;
using support::states;

TEST(Exhaustive, CoinChain) {
    auto coin = support::coin_chain();
    auto target = states(2, {1});
    for (auto mode : {OptMode::Min, OptMode::Max}) {
        EXPECT_EQ(exhaustive_bounded(coin, target, 3, mode)[0], ExactRational(7, 8));
        EXPECT_EQ(exhaustive_bounded(coin, target, 0, mode)[1], ExactRational(1));
        EXPECT_EQ(exhaustive_bounded(coin, target, 0, mode)[0], ExactRational(0));
    }
}

TEST(Exhaustive, NodeBudget) {
    auto coin = support::coin_chain();
    EXPECT_THROW(exhaustive_bounded(coin, states(2, {1}), 100, OptMode::Min, 50), ModelError);
}

TEST(Exhaustive, MatchesBoundedCheckerOnAuvPrefix) {
    const CompiledMdp& mdp = support::auv_mdp(1);
    auto unsafe = mdp.labels().at("unsafe");
    for (auto mode : {OptMode::Min, OptMode::Max}) {
        auto exact = exhaustive_bounded(mdp, unsafe, 6, mode);
        auto numeric = bounded_reach_probability(mdp, unsafe, 6, mode);
        for (std::size_t s = 0; s < mdp.num_states(); ++s)
            ASSERT_NEAR(numeric[s], exact[s].convert_to<double>(), 1e-12) << s;
    }
}

TEST(Simulation, CoinReach) {
    auto coin = support::coin_chain();
    SimOptions opts;
    opts.trials = 100'000;
    opts.max_steps = 100;
    opts.seed = 42;
    auto e = simulate_paths(coin, Policy::uniform(), SimObjective::reach(states(2, {1})), opts);
    double exact = 1 - std::pow(2.0, -100);
    EXPECT_LE(std::abs(e.estimate - exact), 3 * e.standard_error + 1e-12);
    EXPECT_DOUBLE_EQ(e.half_width, 1.96 * e.standard_error);
    EXPECT_EQ(e.trials, 100'000u);
    EXPECT_EQ(e.seed, 42u);
}

TEST(Simulation, CoinReward) {
    auto coin = support::coin_chain();
    SimOptions opts;
    opts.trials = 100'000;
    opts.seed = 3;
    auto e = simulate_paths(coin, Policy::first(coin), SimObjective::reward(0, states(2, {1})), opts);
    EXPECT_LE(std::abs(e.estimate - 2.0), 3 * e.standard_error);
    EXPECT_EQ(e.truncation_rate, 0.0);
}

TEST(Simulation, SingleTrialIsReproducible) {
    auto coin = support::coin_chain();
    SimOptions opts;
    opts.trials = 1;
    opts.seed = 99;
    auto objective = SimObjective::reward(0, states(2, {1}));
    auto a = simulate_paths(coin, Policy::uniform(), objective, opts);
    auto b = simulate_paths(coin, Policy::uniform(), objective, opts);
    EXPECT_EQ(a.outcomes, b.outcomes);
    EXPECT_EQ(a.estimate, b.estimate);
}

TEST(Simulation, ThreadCountDoesNotChangeResults) {
    const CompiledMdp& mdp = support::auv_mdp(1);
    SimOptions opts;
    opts.trials = 5000;
    auto objective = SimObjective::reach(mdp.labels().at("unsafe"));
    auto one = simulate_paths(mdp, Policy::random(mdp, 5), objective, opts);
    opts.threads = 4;
    auto four = simulate_paths(mdp, Policy::random(mdp, 5), objective, opts);
    EXPECT_EQ(one.outcomes, four.outcomes);
    EXPECT_EQ(one.estimate, four.estimate);
}

TEST(Simulation, RewardNeedsAlmostSureReachability) {
    MdpBuilder b;
    b.add_state();
    b.add_state();
    b.add_choice(0, {{1, 1}});
    b.add_choice(0, {{0, 1}});
    b.add_choice(1, {{1, 1}});
    b.set_state_reward("r", 0, 1);
    auto mdp = b.build();
    auto objective = SimObjective::reward(0, states(2, {1}));
    EXPECT_THROW(simulate_paths(mdp, Policy::last(mdp), objective), ModelError);
    EXPECT_NO_THROW(simulate_paths(mdp, Policy::first(mdp), objective));
}

TEST(Simulation, TruncationVanishesWithLongerRuns) {
    auto coin = support::coin_chain();
    auto target = states(2, {1});
    SimOptions opts;
    opts.trials = 20'000;
    double last = 1;
    for (std::size_t steps : {1u, 4u, 16u, 64u}) {
        opts.max_steps = steps;
        auto e = simulate_paths(coin, Policy::uniform(), SimObjective::reach(target), opts);
        EXPECT_LE(e.truncation_rate, last);
        last = e.truncation_rate;
    }
    EXPECT_EQ(last, 0.0);
}

TEST(InducedChain, AgreesWithSimulation) {
    const CompiledMdp& mdp = support::auv_mdp(1);
    auto policy = Policy::first(mdp);
    auto chain = build_induced_chain(mdp, policy);
    ASSERT_EQ(chain.num_choices(), chain.num_states());
    StateSet done(mdp.num_states());
    for (std::size_t s = 0; s < mdp.num_states(); ++s) done.set(s, mdp.valuation(s)[0] == 12);
    double expected = expected_reward(chain, *chain.find_reward("time"), done, OptMode::Min)[chain.initial()];
    SimOptions opts;
    opts.trials = 20'000;
    auto e = simulate_paths(mdp, policy, SimObjective::reward(*mdp.find_reward("time"), done), opts);
    EXPECT_LE(std::abs(e.estimate - expected), 3 * e.standard_error);
}
