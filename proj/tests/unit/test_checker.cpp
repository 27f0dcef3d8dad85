#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "featmc/checker.hpp"
#include "featmc/errors.hpp"
#include "oracle.hpp"
#include "support.hpp"

using namespace featmc;
using support::states;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// One state with two choices: Dirac to the target or a Dirac self-loop.
CompiledMdp loop_or_goal() {
    MdpBuilder b;
    b.add_state("S");
    b.add_state("T");
    b.add_choice(0, {{1, 1}}, "go");
    b.add_choice(0, {{0, 1}}, "stay");
    b.add_choice(1, {{1, 1}});
    b.set_state_reward("r", 0, 1);
    return b.build();
}

/// Random MDP with at most `n` states and two choices per state.
CompiledMdp random_mdp(std::mt19937& rng, std::size_t n) {
    MdpBuilder b;
    for (std::size_t s = 0; s < n; ++s) b.add_state();
    for (std::uint32_t s = 0; s < n; ++s) {
        int choices = 1 + static_cast<int>(rng() % 2);
        for (int c = 0; c < choices; ++c) {
            std::vector<MdpBuilder::Branch> branches;
            int k = 1 + static_cast<int>(rng() % 3);
            std::int64_t left = 12;
            for (int i = 0; i < k; ++i) {
                std::int64_t w = i + 1 == k ? left : 1 + static_cast<std::int64_t>(rng() % static_cast<unsigned>(left));
                if (w > left) w = left;
                left -= w;
                if (w > 0) branches.push_back({static_cast<std::uint32_t>(rng() % n), Rational(w, 12)});
                if (left == 0) break;
            }
            auto idx = b.add_choice(s, branches);
            b.set_transition_reward("r", s, idx, static_cast<std::int64_t>(rng() % 3));
        }
        b.set_state_reward("r", s, 1 + static_cast<std::int64_t>(rng() % 2));
    }
    return b.build();
}

}  // namespace

TEST(Qualitative, CertainReachability) {
    MdpBuilder b;
    b.add_state();
    b.add_state();
    b.add_choice(0, {{1, 1}});
    b.add_choice(1, {{1, 1}});
    auto mdp = b.build();
    for (auto mode : {OptMode::Min, OptMode::Max}) {
        auto q = qualitative_reach(mdp, states(2, {1}), mode);
        EXPECT_EQ(q.one, states(2, {0, 1}));
        EXPECT_TRUE(q.zero.empty());
    }
}

TEST(Qualitative, PolicyPicksTheLoop) {
    auto mdp = loop_or_goal();
    auto target = states(2, {1});
    EXPECT_TRUE(qualitative_reach(mdp, target, OptMode::Max).one.test(0));
    EXPECT_TRUE(qualitative_reach(mdp, target, OptMode::Min).zero.test(0));
}

TEST(Reach, Examples) {
    auto coin = support::coin_chain();
    EXPECT_EQ(reach_probability(coin, states(2, {1}), OptMode::Min)[0], 1.0);

    auto mdp = loop_or_goal();
    EXPECT_EQ(reach_probability(mdp, states(2, {1}), OptMode::Min)[0], 0.0);
    EXPECT_EQ(reach_probability(mdp, states(2, {1}), OptMode::Max)[0], 1.0);

    MdpBuilder b;
    b.add_state("A");
    b.add_state("B");
    b.add_state("C");
    b.add_choice(0, {{1, Rational(3, 10)}, {2, Rational(7, 10)}});
    b.add_choice(1, {{1, 1}});
    b.add_choice(2, {{2, 1}});
    auto split = b.build();
    EXPECT_NEAR(reach_probability(split, states(3, {1}), OptMode::Max)[0], 0.3, 1e-6);
}

TEST(Reach, NonConvergenceIsAnError) {
    // slow geometric convergence with a tiny iteration budget
    MdpBuilder b;
    b.add_state();
    b.add_state();
    b.add_state();
    b.add_choice(0, {{0, Rational(999, 1000)}, {1, Rational(1, 2000)}, {2, Rational(1, 2000)}});
    b.add_choice(1, {{1, 1}});
    b.add_choice(2, {{2, 1}});
    auto mdp = b.build();
    CheckerOptions opts;
    opts.max_iters = 10;
    try {
        reach_probability(mdp, states(3, {1}), OptMode::Max, opts);
        FAIL();
    } catch (const ConvergenceError& e) {
        EXPECT_GT(e.residual(), 0.0);
        EXPECT_EQ(e.iterations(), 10u);
    }
    EXPECT_NEAR(reach_probability(mdp, states(3, {1}), OptMode::Max)[0], 0.5, 1e-3);
}

TEST(Bounded, Examples) {
    auto coin = support::coin_chain();
    auto target = states(2, {1});
    EXPECT_EQ(bounded_reach_probability(coin, target, 0, OptMode::Min), (ValueVector{0.0, 1.0}));
    EXPECT_DOUBLE_EQ(bounded_reach_probability(coin, target, 2, OptMode::Min)[0], 0.75);
    EXPECT_DOUBLE_EQ(bounded_reach_probability(coin, target, 3, OptMode::Max)[0], 0.875);
}

TEST(Invariant, Examples) {
    auto coin = support::coin_chain();
    EXPECT_EQ(invariant_probability(coin, states(2, {0, 1}), OptMode::Min)[0], 1.0);
    EXPECT_EQ(invariant_probability(coin, states(2, {1}), OptMode::Min)[0], 0.0);
    EXPECT_EQ(invariant_probability(coin, states(2, {0}), OptMode::Min)[0], 0.0);
}

TEST(Reward, Examples) {
    auto coin = support::coin_chain();
    int r = *coin.find_reward("steps");
    EXPECT_NEAR(expected_reward(coin, r, states(2, {1}), OptMode::Min)[0], 2.0, 1e-5);
    EXPECT_EQ(expected_reward(coin, r, states(2, {0}), OptMode::Min)[0], 0.0);

    auto mdp = loop_or_goal();
    int rr = *mdp.find_reward("r");
    // the max adversary loops forever
    EXPECT_EQ(expected_reward(mdp, rr, states(2, {1}), OptMode::Max)[0], kInf);
    EXPECT_EQ(expected_reward(mdp, rr, states(2, {1}), OptMode::Min)[0], 1.0);

    // no path at all: infinite for both modes
    MdpBuilder b;
    b.add_state();
    b.add_state();
    b.add_choice(0, {{0, 1}});
    b.add_choice(1, {{1, 1}});
    b.set_state_reward("r", 0, 1);
    auto stuck = b.build();
    EXPECT_EQ(expected_reward(stuck, 0, states(2, {1}), OptMode::Min)[0], kInf);
}

TEST(Reward, ZeroRewardsGiveZero) {
    std::mt19937 rng(7);
    for (int i = 0; i < 50; ++i) {
        auto mdp = random_mdp(rng, 5);
        MdpBuilder b;
        for (std::size_t s = 0; s < mdp.num_states(); ++s) b.add_state();
        for (std::uint32_t s = 0; s < mdp.num_states(); ++s)
            for (auto c = mdp.choice_begin(s); c < mdp.choice_end(s); ++c) {
                std::vector<MdpBuilder::Branch> br;
                for (auto x = mdp.branch_begin(c); x < mdp.branch_end(c); ++x) br.push_back({mdp.target(x), mdp.probability(x)});
                b.add_choice(s, br);
            }
        b.set_state_reward("zero", 0, 0);
        auto zero = b.build();
        for (auto mode : {OptMode::Min, OptMode::Max})
            for (double v : expected_reward(zero, 0, states(5, {4}), mode))
                if (std::isfinite(v)) EXPECT_EQ(v, 0.0);
    }
}

TEST(Properties, OracleAndInvariantsOnRandomModels) {
    std::mt19937 rng(2024);
    for (int round = 0; round < 150; ++round) {
        std::size_t n = 2 + rng() % 5;
        auto mdp = random_mdp(rng, n);
        StateSet target(n);
        target.set(n - 1);
        if (rng() % 2) target.set(rng() % n);
        CheckerOptions tight;
        tight.epsilon = 1e-12;
        for (auto mode : {OptMode::Min, OptMode::Max}) {
            auto values = reach_probability(mdp, target, mode, tight);
            auto exact = oracle::optimal_reach(mdp, target, mode);
            auto q = qualitative_reach(mdp, target, mode);
            for (std::size_t s = 0; s < n; ++s) {
                EXPECT_NEAR(values[s], exact[s].convert_to<double>(), 1e-9) << "round " << round << " state " << s;
                if (q.one.test(s)) EXPECT_GE(values[s], 1 - 10 * 1e-6);
                EXPECT_EQ(q.zero.test(s), exact[s] == 0);
                EXPECT_EQ(q.one.test(s), exact[s] == 1);
            }
            auto reward = expected_reward(mdp, 0, target, mode, tight);
            auto exact_reward = oracle::optimal_reward(mdp, 0, target, mode);
            for (std::size_t s = 0; s < n; ++s) {
                if (!exact_reward[s])
                    EXPECT_EQ(reward[s], kInf) << "round " << round << " state " << s;
                else
                    EXPECT_NEAR(reward[s], exact_reward[s]->convert_to<double>(), 1e-9 * (1 + reward[s]))
                        << "round " << round << " state " << s;
            }
            auto b5 = bounded_reach_probability(mdp, target, 5, mode);
            auto b6 = bounded_reach_probability(mdp, target, 6, mode);
            for (std::size_t s = 0; s < n; ++s) EXPECT_LE(b5[s], b6[s]);
        }
        auto pmin = reach_probability(mdp, target, OptMode::Min);
        auto pmax = reach_probability(mdp, target, OptMode::Max);
        auto inv = invariant_probability(mdp, ~target, OptMode::Min);
        for (std::size_t s = 0; s < n; ++s) {
            EXPECT_LE(pmin[s], pmax[s]);
            EXPECT_NEAR(inv[s] + pmax[s], 1.0, 1e-10);
        }
    }
}

TEST(Checker, ThreadCountDoesNotChangeResults) {
    const CompiledMdp& mdp = support::auv_mdp(2);
    StateSet done(mdp.num_states());
    for (std::size_t s = 0; s < mdp.num_states(); ++s) done.set(s, mdp.valuation(s)[0] == 12);
    CheckerOptions one, many;
    many.threads = 4;
    for (auto mode : {OptMode::Min, OptMode::Max}) {
        EXPECT_EQ(reach_probability(mdp, done, mode, one), reach_probability(mdp, done, mode, many));
        EXPECT_EQ(expected_reward(mdp, 0, done, mode, one), expected_reward(mdp, 0, done, mode, many));
        EXPECT_EQ(bounded_reach_probability(mdp, done, 30, mode, one),
                  bounded_reach_probability(mdp, done, 30, mode, many));
    }
}

TEST(Evaluator, Filters) {
    MdpBuilder b;
    b.add_state();
    b.add_state();
    b.add_state();
    b.add_choice(0, {{1, Rational(1, 2)}, {2, Rational(1, 2)}});
    b.add_choice(1, {{0, 1}});
    b.add_choice(2, {{2, 1}});
    b.add_label("safe", {0, 2});
    b.add_label("unsafe", {1});
    auto mdp = b.build();
    PropertyEvaluator eval(mdp);
    auto props = parse_properties(R"(
filter(min, Pmin=? [ F<=k "safe" ], "unsafe");
filter(avg, Pmax=? [ F<=k "unsafe" ], "safe");
filter(max, Pmax=? [ F "unsafe" ], "safe");
Pmin=? [ F "nowhere" ];
filter(min, Pmin=? [ F "safe" ], false);
)");
    const auto& p = props.properties;
    EXPECT_EQ(eval.evaluate(p[0], {{"k", 0}}).value, 0.0);
    EXPECT_EQ(eval.evaluate(p[0], {{"k", 1}}).value, 1.0);
    // unsafe within one step: 1/2 from state 0, 0 from state 2
    EXPECT_DOUBLE_EQ(eval.evaluate(p[1], {{"k", 1}}).value, 0.25);
    // unsafe is reachable only from state 0, with probability 1/2
    EXPECT_DOUBLE_EQ(eval.evaluate(p[2]).value, 0.5);
    EXPECT_EQ(eval.free_parameters(p[0]), std::set<std::string>{"k"});
    try {
        eval.evaluate(p[3]);
        FAIL();
    } catch (const ModelError& e) {
        EXPECT_NE(e.message().find("unknown label"), std::string::npos);
    }
    try {
        eval.evaluate(p[4]);
        FAIL();
    } catch (const ModelError& e) {
        EXPECT_EQ(e.message(), "filter matches no states");
    }
    auto series = eval.run_experiment(p[1], "k", 0, 10, 2);
    ASSERT_EQ(series.series.size(), 6u);
    for (std::size_t i = 0; i < series.series.size(); ++i) {
        EXPECT_EQ(series.series[i].parameter, static_cast<std::int64_t>(2 * i));
        if (i) EXPECT_GE(series.series[i].value, series.series[i - 1].value);
        EXPECT_EQ(series.series[i].value, eval.evaluate(p[1], {{"k", series.series[i].parameter}}).value);
    }
}
