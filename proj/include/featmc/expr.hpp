#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "featmc/errors.hpp"
#include "featmc/feature_model.hpp"
#include "featmc/rational.hpp"

namespace featmc {

enum class ValueType { Int, Double, Bool };

std::string to_string(ValueType type);

/// A typed literal. Numbers (int and double alike) are exact rationals;
/// floating point only appears inside the numerical checker.
struct Value {
    ValueType type = ValueType::Int;
    bool boolean = false;
    Rational number;

    static Value of_int(std::int64_t v) { return {ValueType::Int, false, Rational(v)}; }
    static Value of_double(Rational v) { return {ValueType::Double, false, v}; }
    static Value of_bool(bool v) { return {ValueType::Bool, v, Rational()}; }

    bool is_numeric() const { return type != ValueType::Bool; }
    std::int64_t as_int() const { return number.numerator(); }

    /// "true", "3", "0.6" style text (exact decimals when finite, else num/den).
    std::string to_string() const;

    friend bool operator==(const Value&, const Value&) = default;
};

enum class ExprKind {
    Literal,
    Identifier,  // unresolved name (constant, formula, variable, feature)
    LabelRef,    // "name" in property expressions
    Unary,
    Binary,
    Ternary,
    Call,      // round, floor, ceil, min, max, pow, mod, active
    Variable,  // resolved: slot = variable index
    Feature,   // resolved active(f): slot = feature index
};

enum class Op { Not, Neg, And, Or, Implies, Iff, Eq, Ne, Lt, Le, Gt, Ge, Add, Sub, Mul, Div };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    ExprKind kind = ExprKind::Literal;
    SourcePos pos;
    Op op = Op::Not;
    std::string name;  // identifier, label, function or resolved variable/feature name
    std::string text;  // literal spelling as written, if any
    Value value;
    std::vector<ExprPtr> args;
    int slot = -1;
    ValueType type = ValueType::Int;  // meaningful after typechecking

    static ExprPtr literal(Value v, SourcePos pos = {}, std::string text = {});
    static ExprPtr identifier(std::string name, SourcePos pos = {});
    static ExprPtr label(std::string name, SourcePos pos = {});
    static ExprPtr unary(Op op, ExprPtr arg, SourcePos pos = {});
    static ExprPtr binary(Op op, ExprPtr lhs, ExprPtr rhs, SourcePos pos = {});
    static ExprPtr ternary(ExprPtr cond, ExprPtr then_expr, ExprPtr else_expr, SourcePos pos = {});
    static ExprPtr call(std::string function, std::vector<ExprPtr> args, SourcePos pos = {});
};

/// Valuation of module variables plus the active feature configuration.
struct EvalContext {
    std::span<const std::int32_t> variables;
    Configuration config;
};

/// Evaluates a resolved expression. Identifiers and label references must
/// have been resolved beforehand. Division by zero raises ModelError at the
/// expression's position.
Value evaluate(const Expr& expr, const EvalContext& ctx);
bool evaluate_bool(const Expr& expr, const EvalContext& ctx);

/// True if the expression reads no variables and no features.
bool is_constant(const Expr& expr);

/// Source-like rendering with minimal parentheses; parsing the output
/// yields the same tree.
std::string to_string(const Expr& expr);

/// Structural equality ignoring source positions.
bool same_structure(const Expr& a, const Expr& b);

std::string to_string(Op op);

}  // namespace featmc
