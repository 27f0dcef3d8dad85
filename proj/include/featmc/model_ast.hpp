#pragma once

#include <optional>
#include <string>
#include <vector>

#include "featmc/expr.hpp"
#include "featmc/feature_model.hpp"

namespace featmc {

struct ConstDecl {
    std::string name;
    ValueType type = ValueType::Int;
    ExprPtr value;  // null: must be supplied as an override
    SourcePos pos;
};

struct FormulaDecl {
    std::string name;
    ExprPtr expr;
    SourcePos pos;
};

struct LabelDecl {
    std::string name;
    ExprPtr expr;
    SourcePos pos;
};

struct VariableDecl {
    std::string name;
    ExprPtr lower;
    ExprPtr upper;
    ExprPtr init;  // null: defaults to the lower bound
    SourcePos pos;
};

struct Assignment {
    std::string variable;
    ExprPtr value;
    SourcePos pos;
};

struct FeatureUpdate {
    bool activate = true;
    std::string feature;
    SourcePos pos;
};

/// Conjunction of assignments (modules) or feature switches (controller);
/// empty means the no-op `true`.
struct Update {
    std::vector<Assignment> assignments;
    std::vector<FeatureUpdate> switches;
};

struct Branch {
    ExprPtr probability;  // null: implicit probability 1
    Update update;
    SourcePos pos;
};

struct Command {
    std::optional<std::string> action;
    ExprPtr guard;
    std::vector<Branch> branches;
    SourcePos pos;
};

struct ModuleDecl {
    std::string name;
    std::vector<VariableDecl> variables;
    std::vector<Command> commands;
    SourcePos pos;
};

struct ControllerDecl {
    std::vector<Command> commands;
    SourcePos pos;
};

struct RewardItem {
    bool transition = false;
    std::optional<std::string> action;
    ExprPtr guard;
    ExprPtr value;
    SourcePos pos;
};

struct RewardDecl {
    std::string name;
    std::vector<RewardItem> items;
    SourcePos pos;
};

struct FeatureDecl {
    std::string name;  // "root" for the root feature block
    bool is_root = false;
    GroupKind group = GroupKind::None;
    std::vector<std::string> children;
    std::vector<std::string> modules;
    std::vector<ExprPtr> constraints;
    ExprPtr initial_constraint;
    std::vector<RewardDecl> rewards;
    SourcePos pos;
};

struct ModelAst {
    std::vector<ConstDecl> constants;
    std::vector<FormulaDecl> formulas;
    std::vector<LabelDecl> labels;
    std::vector<FeatureDecl> features;
    std::vector<ModuleDecl> modules;
    std::optional<ControllerDecl> controller;
    std::vector<RewardDecl> rewards;  // top-level reward blocks
};

enum class OptMode { Min, Max };
enum class PathKind { Eventually, BoundedEventually, Globally };
enum class FilterAggregate { Min, Max, Avg };

struct PathFormula {
    PathKind kind = PathKind::Eventually;
    ExprPtr target;
    ExprPtr bound;  // F<=bound; integer constant or experiment parameter
};

struct Query {
    bool reward = false;
    std::string reward_structure;  // empty: the only structure
    OptMode mode = OptMode::Min;
    PathFormula path;
};

struct PropertyAst {
    Query query;
    std::optional<FilterAggregate> filter;
    ExprPtr filter_states;
    SourcePos pos;
};

struct PropertyFile {
    std::vector<ConstDecl> constants;
    std::vector<LabelDecl> labels;
    std::vector<PropertyAst> properties;
};

/// Parses model text; throws SyntaxError with line/column and the expected-token set.
ModelAst parse_model(const std::string& text);
PropertyFile parse_properties(const std::string& text);
/// Parses a single expression (used for overrides and tooling).
ExprPtr parse_expression(const std::string& text);

std::string to_string(const ModelAst& model);
std::string to_string(const PropertyAst& property);
std::string to_string(const PropertyFile& file);

bool same_structure(const ModelAst& a, const ModelAst& b);
bool same_structure(const PropertyAst& a, const PropertyAst& b);

}  // namespace featmc
