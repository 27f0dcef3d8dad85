#include <gtest/gtest.h>

#include <random>

#include "featmc/errors.hpp"
#include "featmc/feature_model.hpp"
#include "support.hpp"

using namespace featmc;

namespace {

FeatureModel auv_features() {
    using K = FeatureFormula::Kind;
    auto fm = FeatureModel::from_groups("root", {{"root", GroupKind::AllOf, {"robot"}},
                                                 {"robot", GroupKind::AllOf, {"navigation", "pipeline_inspection"}},
                                                 {"navigation", GroupKind::OneOf, {"low", "med", "high"}},
                                                 {"pipeline_inspection", GroupKind::OneOf, {"search", "follow"}}});
    // rebuild with the constraints now that indices are known
    auto f = [&](const char* n) { return FeatureFormula::atom(fm.index_of(n)); };
    FeatureConstraint follow_low{FeatureFormula::make(K::Implies, {f("follow"), f("low")}), "follow requires low"};
    FeatureConstraint initial{FeatureFormula::make(K::And, {f("search"), f("low")}), "initial"};
    return FeatureModel::from_groups("root",
                                     {{"root", GroupKind::AllOf, {"robot"}},
                                      {"robot", GroupKind::AllOf, {"navigation", "pipeline_inspection"}},
                                      {"navigation", GroupKind::OneOf, {"low", "med", "high"}},
                                      {"pipeline_inspection", GroupKind::OneOf, {"search", "follow"}}},
                                     {follow_low}, initial);
}

FeatureSet with_base(const FeatureModel& fm, std::vector<std::string> leaves) {
    for (const char* n : {"root", "robot", "navigation", "pipeline_inspection"}) leaves.emplace_back(n);
    return fm.make_set(leaves);
}

std::vector<Configuration> brute_force(const FeatureModel& fm) {
    std::vector<Configuration> out;
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << fm.size()); ++bits)
        if (validate_configuration(fm, FeatureSet(bits))) out.push_back(FeatureSet(bits));
    return out;
}

}  // namespace

TEST(FeatureModel, AuvValidity) {
    auto fm = auv_features();
    EXPECT_TRUE(validate_configuration(fm, with_base(fm, {"low", "search"})));
    EXPECT_FALSE(validate_configuration(fm, with_base(fm, {"high", "follow"})));
    EXPECT_FALSE(validate_configuration(fm, FeatureSet()));
    // two navigation modes at once
    EXPECT_FALSE(validate_configuration(fm, with_base(fm, {"low", "med", "search"})));
    // active leaf under an inactive parent
    EXPECT_FALSE(validate_configuration(fm, fm.make_set({"root", "robot", "low"})));
}

TEST(FeatureModel, ViolationNamesTheRule) {
    auto fm = auv_features();
    auto v = fm.find_violation(with_base(fm, {"high", "follow"}));
    ASSERT_TRUE(v.has_value());
    EXPECT_NE(v->find("follow requires low"), std::string::npos) << *v;
}

TEST(FeatureModel, AuvHasFourConfigurations) {
    auto fm = auv_features();
    auto configs = enumerate_configurations(fm);
    ASSERT_EQ(configs.size(), 4u);
    std::vector<std::string> names;
    for (auto c : configs) names.push_back(fm.describe(c));
    EXPECT_EQ(names, (std::vector<std::string>{"{low,search}", "{med,search}", "{high,search}", "{low,follow}"}));
    EXPECT_EQ(configs, brute_force(fm));
    EXPECT_EQ(fm.describe(fm.initial_configuration()), "{low,search}");
}

TEST(FeatureModel, SmallTrees) {
    auto single = FeatureModel::from_groups("r", {{"r", GroupKind::AllOf, {"a"}}});
    EXPECT_EQ(enumerate_configurations(single).size(), 1u);
    auto choice = FeatureModel::from_groups("r", {{"r", GroupKind::OneOf, {"a", "b", "c"}}});
    EXPECT_EQ(enumerate_configurations(choice).size(), 3u);
}

TEST(FeatureModel, ApplySwitch) {
    auto fm = auv_features();
    auto start = with_base(fm, {"low", "search"});
    auto to_med = apply_switch(fm, start, fm.make_set({"med"}), fm.make_set({"low", "high"}));
    EXPECT_EQ(to_med, with_base(fm, {"med", "search"}));
    EXPECT_EQ(apply_switch(fm, start, fm.make_set({"low"}), FeatureSet()), start);
    EXPECT_THROW(apply_switch(fm, start, fm.make_set({"follow"}), FeatureSet()), ModelError);
}

TEST(FeatureModel, ApplySwitchIsIdempotentOnSatisfiedSwitches) {
    auto fm = auv_features();
    for (auto c : enumerate_configurations(fm)) {
        FeatureSet activate = c & fm.make_set({"low", "search", "med"});
        FeatureSet deactivate = fm.make_set({"high"}) - c;
        EXPECT_EQ(apply_switch(fm, c, activate, deactivate), c);
    }
}

TEST(FeatureModel, RejectsMalformedTrees) {
    // b has two parents
    EXPECT_THROW(FeatureModel::from_groups("r", {{"r", GroupKind::AllOf, {"a", "b"}}, {"a", GroupKind::OneOf, {"b"}}}),
                 ModelError);
    EXPECT_THROW(auv_features().index_of("sonar"), ModelError);
}

// Random trees of at most 15 features: enumeration equals brute-force filtering.
TEST(FeatureModel, EnumerationMatchesBruteForce) {
    using K = FeatureFormula::Kind;
    std::mt19937 rng(12345);
    for (int round = 0; round < 200; ++round) {
        int n = 2 + static_cast<int>(rng() % 14);
        std::vector<std::vector<std::string>> children(static_cast<std::size_t>(n));
        for (int i = 1; i < n; ++i) children[rng() % static_cast<unsigned>(i)].push_back("f" + std::to_string(i));
        std::vector<FeatureModel::GroupDecl> groups;
        for (int i = 0; i < n; ++i)
            if (!children[static_cast<std::size_t>(i)].empty())
                groups.push_back({"f" + std::to_string(i), rng() % 2 ? GroupKind::AllOf : GroupKind::OneOf,
                                  children[static_cast<std::size_t>(i)]});
        auto plain = FeatureModel::from_groups("f0", groups);
        std::vector<FeatureConstraint> constraints;
        if (n > 3 && rng() % 2) {
            int a = 1 + static_cast<int>(rng() % static_cast<unsigned>(n - 1));
            int b = 1 + static_cast<int>(rng() % static_cast<unsigned>(n - 1));
            constraints.push_back({FeatureFormula::make(K::Implies, {FeatureFormula::atom(plain.index_of("f" + std::to_string(a))),
                                                                    FeatureFormula::atom(plain.index_of("f" + std::to_string(b)))}),
                                   "requires"});
        }
        auto fm = FeatureModel::from_groups("f0", groups, constraints);
        auto configs = enumerate_configurations(fm);
        EXPECT_EQ(configs, brute_force(fm)) << "round " << round;
        for (auto c : configs) EXPECT_TRUE(validate_configuration(fm, c));
    }
}
