#include <gtest/gtest.h>

#include "featmc/auv.hpp"
#include "featmc/checker.hpp"
#include "featmc/errors.hpp"
#include "support.hpp"

using namespace featmc;

TEST(Scenario, Overrides) {
    auto s1 = Scenario::north_sea().overrides();
    EXPECT_EQ(s1.at("min_visib"), "1");
    EXPECT_EQ(s1.at("max_visib"), "10");
    EXPECT_EQ(Rational::parse(s1.at("current_prob")), Rational(3, 5));
    EXPECT_EQ(s1.at("inspect"), "10");
    auto s2 = Scenario::caribbean().overrides();
    EXPECT_EQ(s2.at("min_visib"), "3");
    EXPECT_EQ(s2.at("max_visib"), "20");
    EXPECT_EQ(Rational::parse(s2.at("current_prob")), Rational(3, 10));
    EXPECT_EQ(s2.at("inspect"), "30");
}

TEST(Scenario, Validation) {
    Scenario s = Scenario::north_sea();
    s.max_visib = s.min_visib;
    EXPECT_THROW(build_scenario(s), ModelError);
    s = Scenario::north_sea();
    s.current_prob = Rational(3, 2);
    EXPECT_THROW(s.validate(), ModelError);
    s = Scenario::north_sea();
    s.inspect = 0;
    EXPECT_THROW(s.validate(), ModelError);
}

TEST(Scenario, ParseFile) {
    Scenario s = Scenario::parse("# comment\nname = test\nmin_visib = 2\nmax_visib = 8\ncurrent_prob = 0.5\n"
                                 "inspect = 4\ninfl_tf = 1\n");
    EXPECT_EQ(s.name, "test");
    EXPECT_EQ(s.current_prob, Rational(1, 2));
    EXPECT_THROW(Scenario::parse("min_visib = 2\n"), ModelError);
    EXPECT_THROW(Scenario::parse("depth = 3\n"), ModelError);
}

TEST(Auv, FourConfigurations) {
    const TypedModel& m = support::auv_typed(1);
    EXPECT_EQ(m.features.enumerate().size(), 4u);
    EXPECT_EQ(m.features.describe(m.initial_configuration), "{low,search}");
}

TEST(Auv, SafeAndUnsafePartitionTheStates) {
    for (int which : {1, 2}) {
        const CompiledMdp& mdp = support::auv_mdp(which);
        const auto& safe = mdp.labels().at("safe");
        const auto& unsafe = mdp.labels().at("unsafe");
        EXPECT_TRUE((safe & unsafe).empty());
        EXPECT_EQ((safe | unsafe).count(), mdp.num_states());
    }
}

TEST(Auv, MissionCompletesAlmostSurely) {
    for (int which : {1, 2}) {
        const CompiledMdp& mdp = support::auv_mdp(which);
        PropertyEvaluator eval(mdp, &support::auv_typed(which));
        StateSet done = eval.state_set(parse_expression("s=done"));
        EXPECT_TRUE(qualitative_reach(mdp, done, OptMode::Min).one.test(mdp.initial()));
    }
}

TEST(Auv, PlaceholderOrderings) {
    const TypedModel& m = support::auv_typed(1);
    auto c = [&](const char* n) { return m.constants.at(n).number; };
    EXPECT_GT(c("p_found_high"), c("p_found_med"));
    EXPECT_GT(c("p_found_med"), c("p_found_low"));
    EXPECT_GT(c("p_recover_need_low"), c("p_recover_need_med"));
    EXPECT_GT(c("p_recover_need_med"), c("p_recover_need_high"));
    EXPECT_LT(Rational(7, 100), c("p_lost_tf1"));
    EXPECT_LT(c("p_lost_tf1"), c("p_lost_tf2"));
}

TEST(Auv, ReportWriters) {
    AnalysisReport r;
    r.scenario = "x";
    r.energy_min = 1;
    r.energy_max = 2.5;
    r.time_min = 3;
    r.time_max = std::numeric_limits<double>::infinity();
    r.unsafe_max = {{0, 0.0}, {1, 0.25}};
    r.unsafe_avg = {{0, 0.0}, {1, 0.125}};
    EXPECT_EQ(table2_csv({r}), "scenario,energy_min,energy_max,time_min,time_max\nx,1.0,2.5,3.0,Infinity\n");
    EXPECT_EQ(fig6_csv(r), "k,max,avg\n0,0.0,0.0\n1,0.25,0.125\n");
    EXPECT_EQ(format_number(0.1), "0.1");
}
