#include <gtest/gtest.h>

#include "featmc/auv.hpp"
#include "featmc/errors.hpp"
#include "featmc/model_ast.hpp"

using namespace featmc;

namespace {

const char* kEnvironment = R"(
const int min_visib;
const int max_visib;
const double current_prob;
module environment
    water_visib : [min_visib..max_visib]
        init round((max_visib-min_visib)/2);
    [step] true -> current_prob: (water_visib'= (water_visib=min_visib?
        min_visib:water_visib-1)) + (1-current_prob)/2: (water_visib'=
        (water_visib=max_visib? max_visib:water_visib+1))
        + (1-current_prob)/2: true; // no change
endmodule
)";

SourcePos syntax_error_pos(const std::string& text, bool props = false) {
    try {
        if (props)
            parse_properties(text);
        else
            parse_model(text);
    } catch (const SyntaxError& e) {
        return e.pos();
    }
    ADD_FAILURE() << "no syntax error for: " << text;
    return {};
}

}  // namespace

TEST(Parser, EnvironmentModule) {
    ModelAst ast = parse_model(kEnvironment);
    ASSERT_EQ(ast.modules.size(), 1u);
    const auto& m = ast.modules[0];
    EXPECT_EQ(m.name, "environment");
    ASSERT_EQ(m.variables.size(), 1u);
    EXPECT_EQ(m.variables[0].name, "water_visib");
    ASSERT_EQ(m.commands.size(), 1u);
    EXPECT_EQ(m.commands[0].action, "step");
    EXPECT_EQ(m.commands[0].branches.size(), 3u);
    EXPECT_TRUE(m.commands[0].branches[2].update.assignments.empty());
}

TEST(Parser, RootFeatureBlock) {
    ModelAst ast = parse_model("root feature all of robot; modules auv, environment; endfeature");
    ASSERT_EQ(ast.features.size(), 1u);
    const auto& root = ast.features[0];
    EXPECT_TRUE(root.is_root);
    EXPECT_EQ(root.group, GroupKind::AllOf);
    EXPECT_EQ(root.children, std::vector<std::string>{"robot"});
    EXPECT_EQ(root.modules, (std::vector<std::string>{"auv", "environment"}));
}

TEST(Parser, FeatureClausesAndController) {
    ModelAst ast = parse_model(R"(
root feature
    one of a, b;
    constraint b requires a;
    initial constraint active(a);
    rewards "r" [go] true : 1; active(a) : 2; endrewards
endfeature
controller
    [go] active(a) -> deactivate(a) & activate(b);
    [go] active(b) -> true;
endcontroller
)");
    const auto& root = ast.features.at(0);
    EXPECT_EQ(root.group, GroupKind::OneOf);
    EXPECT_EQ(root.constraints.size(), 1u);
    ASSERT_TRUE(root.initial_constraint);
    ASSERT_EQ(root.rewards.size(), 1u);
    EXPECT_TRUE(root.rewards[0].items[0].transition);
    EXPECT_FALSE(root.rewards[0].items[1].transition);
    ASSERT_TRUE(ast.controller);
    ASSERT_EQ(ast.controller->commands.size(), 2u);
    EXPECT_EQ(ast.controller->commands[0].branches[0].update.switches.size(), 2u);
    EXPECT_TRUE(ast.controller->commands[1].branches[0].update.switches.empty());
}

TEST(Parser, EmptyInputFailsAtOrigin) {
    SourcePos pos = syntax_error_pos("");
    EXPECT_EQ(pos.line, 1);
    EXPECT_EQ(pos.column, 1);
}

TEST(Parser, ReportsPositionAndExpectedTokens) {
    try {
        parse_model("module m\n  x : [0..1] init 0;\n  [a] x=0 -> (x'=1)\nendmodule");
        FAIL() << "expected a syntax error";
    } catch (const SyntaxError& e) {
        EXPECT_EQ(e.pos().line, 4);
        EXPECT_FALSE(e.expected().empty());
    }
    EXPECT_EQ(syntax_error_pos("const int = 3;").column, 11);
}

TEST(Parser, Properties) {
    PropertyFile f = parse_properties(R"(
label "unsafe" = s=5;
Pmin=? [G "safe"];
filter(avg, Pmax=? [ F<=k "unsafe" ], "safe");
R{"energy"}min=? [F ${s=done}];
)");
    ASSERT_EQ(f.labels.size(), 1u);
    ASSERT_EQ(f.properties.size(), 3u);

    const auto& g = f.properties[0];
    EXPECT_FALSE(g.query.reward);
    EXPECT_EQ(g.query.mode, OptMode::Min);
    EXPECT_EQ(g.query.path.kind, PathKind::Globally);
    EXPECT_EQ(g.query.path.target->kind, ExprKind::LabelRef);
    EXPECT_EQ(g.query.path.target->name, "safe");

    const auto& avg = f.properties[1];
    ASSERT_TRUE(avg.filter);
    EXPECT_EQ(*avg.filter, FilterAggregate::Avg);
    EXPECT_EQ(avg.query.mode, OptMode::Max);
    EXPECT_EQ(avg.query.path.kind, PathKind::BoundedEventually);
    EXPECT_EQ(avg.query.path.bound->name, "k");
    EXPECT_EQ(avg.filter_states->name, "safe");

    const auto& r = f.properties[2];
    EXPECT_TRUE(r.query.reward);
    EXPECT_EQ(r.query.reward_structure, "energy");
    EXPECT_EQ(to_string(*r.query.path.target), "s=done");
}

TEST(Parser, MalformedProperties) {
    syntax_error_pos("Pmin=? [F ];", true);
    syntax_error_pos("filter(median, Pmin=? [F x=1], true);", true);
    syntax_error_pos("Pmin=? [F x=1]", true);
}

TEST(Parser, RoundTripIsAFixpoint) {
    for (const std::string& text : {std::string(kEnvironment), auv_model_text()}) {
        ModelAst first = parse_model(text);
        std::string printed = to_string(first);
        ModelAst second = parse_model(printed);
        EXPECT_TRUE(same_structure(first, second)) << printed;
        EXPECT_EQ(to_string(second), printed);
    }
    PropertyFile props = parse_properties(auv_properties_text());
    PropertyFile again = parse_properties(to_string(props));
    ASSERT_EQ(props.properties.size(), again.properties.size());
    for (std::size_t i = 0; i < props.properties.size(); ++i)
        EXPECT_TRUE(same_structure(props.properties[i], again.properties[i])) << to_string(props.properties[i]);
}

TEST(Parser, CommentsAreIgnored) {
    ModelAst a = parse_model("// header\nconst int x = 1; // trailing\n");
    ModelAst b = parse_model("const int x = 1;");
    EXPECT_TRUE(same_structure(a, b));
}
