#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "featmc/expr.hpp"
#include "featmc/feature_model.hpp"
#include "featmc/model_ast.hpp"

namespace featmc {

struct VariableInfo {
    std::string name;
    std::string module;
    std::int32_t lower = 0;
    std::int32_t upper = 0;
    std::int32_t init = 0;
    SourcePos pos;
};

struct TypedAssignment {
    int slot = -1;
    ExprPtr value;
    SourcePos pos;
};

struct TypedBranch {
    Rational probability;
    std::vector<TypedAssignment> assignments;
    FeatureSet activate;
    FeatureSet deactivate;
};

struct TypedCommand {
    int action = -1;  // -1: unlabeled
    ExprPtr guard;
    std::vector<TypedBranch> branches;
    SourcePos pos;
    std::string component;
    int index = 0;  // position within its component

    std::string describe() const;
};

/// A module, or the feature controller (always last).
struct Component {
    std::string name;
    bool is_controller = false;
    std::vector<TypedCommand> commands;
    std::vector<int> actions;  // sorted, unique
    bool declares(int action) const;
};

struct TypedRewardItem {
    bool transition = false;
    int action = -1;
    ExprPtr guard;
    ExprPtr value;
    SourcePos pos;
};

struct TypedRewardStructure {
    std::string name;
    std::vector<TypedRewardItem> items;
};

struct TypedLabel {
    std::string name;
    ExprPtr expr;
};

/// Fully resolved model: constants are literals, formulas inlined, names
/// bound to variable slots and feature indices, probabilities exact.
struct TypedModel {
    FeatureModel features;
    Configuration initial_configuration;
    std::vector<VariableInfo> variables;
    std::vector<Component> components;
    std::vector<std::string> actions;
    std::vector<TypedRewardStructure> rewards;
    std::vector<TypedLabel> labels;
    std::map<std::string, Value> constants;
    std::map<std::string, ExprPtr> formulas;

    std::optional<int> find_variable(const std::string& name) const;
    std::optional<int> find_action(const std::string& name) const;
    std::optional<int> find_reward(const std::string& name) const;
};

using ConstantOverrides = std::map<std::string, std::string>;

/**
 * Resolves constants (overrides take precedence over defaults), inlines
 * formulas, types every expression and checks the structural rules of the
 * modeling language. Throws ModelError on the first problem found.
 */
TypedModel typecheck(const ModelAst& ast, const ConstantOverrides& overrides = {});

/// Options for resolving free-standing expressions against a typed model.
struct ResolveOptions {
    std::map<std::string, std::int64_t> parameters;  // experiment bindings
    bool allow_labels = false;                       // keep "label" references
};

/// Resolves and types an expression (e.g. from a property) against the model.
ExprPtr resolve_expression(const TypedModel& model, const ExprPtr& expr, const ResolveOptions& options = {});

/// Parses an override literal according to the declared type.
Value parse_literal(const std::string& text, ValueType type);

}  // namespace featmc
