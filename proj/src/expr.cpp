#include "featmc/expr.hpp"

#include <stdexcept>

namespace featmc {

std::string to_string(ValueType type) {
    switch (type) {
        case ValueType::Int:
            return "int";
        case ValueType::Double:
            return "double";
        case ValueType::Bool:
            return "bool";
    }
    return "?";
}

std::string Value::to_string() const {
    if (type == ValueType::Bool) return boolean ? "true" : "false";
    if (type == ValueType::Int || number.is_integer()) {
        std::string s = std::to_string(number.floor());
        return type == ValueType::Double ? s + ".0" : s;
    }
    // finite decimal expansion iff the denominator has only factors 2 and 5
    std::int64_t den = number.denominator();
    int twos = 0, fives = 0;
    while (den % 2 == 0) den /= 2, ++twos;
    while (den % 5 == 0) den /= 5, ++fives;
    if (den != 1 || std::max(twos, fives) > 18) return number.to_string();
    int digits = std::max(twos, fives);
    Rational scaled = number;
    for (int i = 0; i < digits; ++i) scaled *= Rational(10);
    std::int64_t n = scaled.numerator();
    bool negative = n < 0;
    std::string mag = std::to_string(negative ? -n : n);
    if (static_cast<int>(mag.size()) <= digits) mag.insert(0, static_cast<std::size_t>(digits + 1 - static_cast<int>(mag.size())), '0');
    mag.insert(mag.size() - static_cast<std::size_t>(digits), ".");
    return (negative ? "-" : "") + mag;
}

namespace {

ExprPtr make(Expr e) {
    return std::make_shared<const Expr>(std::move(e));
}

[[noreturn]] void eval_error(const Expr& e, const std::string& message) {
    throw ModelError(message + " in '" + to_string(e) + "'", e.pos);
}

ValueType numeric_result(const Value& a, const Value& b) {
    return a.type == ValueType::Int && b.type == ValueType::Int ? ValueType::Int : ValueType::Double;
}

Value numeric(const Expr& e, const EvalContext& ctx) {
    Value v = evaluate(e, ctx);
    if (!v.is_numeric()) eval_error(e, "expected a numeric value");
    return v;
}

Rational checked(const Expr& e, auto&& fn) {
    try {
        return fn();
    } catch (const std::overflow_error&) {
        eval_error(e, "arithmetic overflow");
    } catch (const std::domain_error&) {
        eval_error(e, "division by zero");
    }
}

}  // namespace

ExprPtr Expr::literal(Value v, SourcePos pos, std::string text) {
    Expr e;
    e.kind = ExprKind::Literal;
    e.pos = pos;
    e.type = v.type;
    e.value = v;
    e.text = std::move(text);
    return make(std::move(e));
}

ExprPtr Expr::identifier(std::string name, SourcePos pos) {
    Expr e;
    e.kind = ExprKind::Identifier;
    e.pos = pos;
    e.name = std::move(name);
    return make(std::move(e));
}

ExprPtr Expr::label(std::string name, SourcePos pos) {
    Expr e;
    e.kind = ExprKind::LabelRef;
    e.pos = pos;
    e.name = std::move(name);
    e.type = ValueType::Bool;
    return make(std::move(e));
}

ExprPtr Expr::unary(Op op, ExprPtr arg, SourcePos pos) {
    Expr e;
    e.kind = ExprKind::Unary;
    e.op = op;
    e.pos = pos;
    e.args = {std::move(arg)};
    return make(std::move(e));
}

ExprPtr Expr::binary(Op op, ExprPtr lhs, ExprPtr rhs, SourcePos pos) {
    Expr e;
    e.kind = ExprKind::Binary;
    e.op = op;
    e.pos = pos;
    e.args = {std::move(lhs), std::move(rhs)};
    return make(std::move(e));
}

ExprPtr Expr::ternary(ExprPtr cond, ExprPtr then_expr, ExprPtr else_expr, SourcePos pos) {
    Expr e;
    e.kind = ExprKind::Ternary;
    e.pos = pos;
    e.args = {std::move(cond), std::move(then_expr), std::move(else_expr)};
    return make(std::move(e));
}

ExprPtr Expr::call(std::string function, std::vector<ExprPtr> args, SourcePos pos) {
    Expr e;
    e.kind = ExprKind::Call;
    e.pos = pos;
    e.name = std::move(function);
    e.args = std::move(args);
    return make(std::move(e));
}

bool evaluate_bool(const Expr& expr, const EvalContext& ctx) {
    Value v = evaluate(expr, ctx);
    if (v.type != ValueType::Bool) eval_error(expr, "expected a boolean value");
    return v.boolean;
}

Value evaluate(const Expr& e, const EvalContext& ctx) {
    switch (e.kind) {
        case ExprKind::Literal:
            return e.value;
        case ExprKind::Variable:
            return Value::of_int(ctx.variables[static_cast<std::size_t>(e.slot)]);
        case ExprKind::Feature:
            return Value::of_bool(ctx.config.contains(e.slot));
        case ExprKind::Identifier:
            eval_error(e, "unresolved identifier '" + e.name + "'");
        case ExprKind::LabelRef:
            eval_error(e, "unresolved label \"" + e.name + "\"");
        case ExprKind::Unary: {
            if (e.op == Op::Not) return Value::of_bool(!evaluate_bool(*e.args[0], ctx));
            Value v = numeric(*e.args[0], ctx);
            v.number = checked(e, [&] { return -v.number; });
            return v;
        }
        case ExprKind::Ternary:
            return evaluate_bool(*e.args[0], ctx) ? evaluate(*e.args[1], ctx) : evaluate(*e.args[2], ctx);
        case ExprKind::Binary: {
            const Expr& lhs = *e.args[0];
            const Expr& rhs = *e.args[1];
            switch (e.op) {
                case Op::And:
                    return Value::of_bool(evaluate_bool(lhs, ctx) && evaluate_bool(rhs, ctx));
                case Op::Or:
                    return Value::of_bool(evaluate_bool(lhs, ctx) || evaluate_bool(rhs, ctx));
                case Op::Implies:
                    return Value::of_bool(!evaluate_bool(lhs, ctx) || evaluate_bool(rhs, ctx));
                case Op::Iff:
                    return Value::of_bool(evaluate_bool(lhs, ctx) == evaluate_bool(rhs, ctx));
                case Op::Eq:
                case Op::Ne: {
                    Value a = evaluate(lhs, ctx);
                    Value b = evaluate(rhs, ctx);
                    if (a.is_numeric() != b.is_numeric()) eval_error(e, "comparison of boolean with number");
                    bool eq = a.is_numeric() ? a.number == b.number : a.boolean == b.boolean;
                    return Value::of_bool(e.op == Op::Eq ? eq : !eq);
                }
                case Op::Lt:
                case Op::Le:
                case Op::Gt:
                case Op::Ge: {
                    Rational a = numeric(lhs, ctx).number;
                    Rational b = numeric(rhs, ctx).number;
                    bool r = e.op == Op::Lt ? a < b : e.op == Op::Le ? a <= b : e.op == Op::Gt ? a > b : a >= b;
                    return Value::of_bool(r);
                }
                case Op::Add:
                case Op::Sub:
                case Op::Mul:
                case Op::Div: {
                    Value a = numeric(lhs, ctx);
                    Value b = numeric(rhs, ctx);
                    Value out;
                    out.type = e.op == Op::Div ? ValueType::Double : numeric_result(a, b);
                    out.number = checked(e, [&] {
                        switch (e.op) {
                            case Op::Add:
                                return a.number + b.number;
                            case Op::Sub:
                                return a.number - b.number;
                            case Op::Mul:
                                return a.number * b.number;
                            default:
                                return a.number / b.number;
                        }
                    });
                    return out;
                }
                default:
                    break;
            }
            eval_error(e, "invalid binary operator");
        }
        case ExprKind::Call: {
            const std::string& f = e.name;
            if (f == "round" || f == "floor" || f == "ceil") {
                Rational x = numeric(*e.args[0], ctx).number;
                std::int64_t r = f == "round" ? x.round() : f == "floor" ? x.floor() : x.ceil();
                return Value::of_int(r);
            }
            if (f == "min" || f == "max") {
                Value best = numeric(*e.args[0], ctx);
                for (std::size_t i = 1; i < e.args.size(); ++i) {
                    Value v = numeric(*e.args[i], ctx);
                    ValueType t = numeric_result(best, v);
                    if ((f == "min") ? v.number < best.number : v.number > best.number) best = v;
                    best.type = t;
                }
                return best;
            }
            if (f == "pow") {
                Value base = numeric(*e.args[0], ctx);
                Value exponent = numeric(*e.args[1], ctx);
                if (!exponent.number.is_integer()) eval_error(e, "pow requires an integer exponent");
                std::int64_t n = exponent.number.numerator();
                Rational result(1);
                Rational factor = base.number;
                bool invert = n < 0;
                if (invert) n = -n;
                result = checked(e, [&] {
                    Rational acc(1);
                    for (std::int64_t i = 0; i < n; ++i) acc *= factor;
                    return invert ? Rational(1) / acc : acc;
                });
                ValueType t = base.type == ValueType::Int && exponent.type == ValueType::Int && !invert ? ValueType::Int
                                                                                                        : ValueType::Double;
                return {t, false, result};
            }
            if (f == "mod") {
                Value a = numeric(*e.args[0], ctx);
                Value b = numeric(*e.args[1], ctx);
                if (!a.number.is_integer() || !b.number.is_integer()) eval_error(e, "mod requires integer arguments");
                if (b.number.is_zero()) eval_error(e, "division by zero");
                std::int64_t n = b.number.numerator();
                std::int64_t r = a.number.numerator() % n;
                if (r < 0) r += n < 0 ? -n : n;
                return Value::of_int(r);
            }
            eval_error(e, "unknown function '" + f + "'");
        }
    }
    eval_error(e, "invalid expression");
}

bool is_constant(const Expr& e) {
    if (e.kind == ExprKind::Variable || e.kind == ExprKind::Feature || e.kind == ExprKind::Identifier ||
        e.kind == ExprKind::LabelRef)
        return false;
    if (e.kind == ExprKind::Call && e.name == "active") return false;
    for (const auto& a : e.args)
        if (!is_constant(*a)) return false;
    return true;
}

std::string to_string(Op op) {
    switch (op) {
        case Op::Not:
            return "!";
        case Op::Neg:
            return "-";
        case Op::And:
            return "&";
        case Op::Or:
            return "|";
        case Op::Implies:
            return "=>";
        case Op::Iff:
            return "<=>";
        case Op::Eq:
            return "=";
        case Op::Ne:
            return "!=";
        case Op::Lt:
            return "<";
        case Op::Le:
            return "<=";
        case Op::Gt:
            return ">";
        case Op::Ge:
            return ">=";
        case Op::Add:
            return "+";
        case Op::Sub:
            return "-";
        case Op::Mul:
            return "*";
        case Op::Div:
            return "/";
    }
    return "?";
}

namespace {

// binding strength, loosest first; must agree with the parser
int precedence(const Expr& e) {
    switch (e.kind) {
        case ExprKind::Ternary:
            return 1;
        case ExprKind::Binary:
            switch (e.op) {
                case Op::Implies:
                    return 2;
                case Op::Iff:
                    return 3;
                case Op::Or:
                    return 4;
                case Op::And:
                    return 5;
                case Op::Eq:
                case Op::Ne:
                case Op::Lt:
                case Op::Le:
                case Op::Gt:
                case Op::Ge:
                    return 7;
                case Op::Add:
                case Op::Sub:
                    return 8;
                default:
                    return 9;
            }
        case ExprKind::Unary:
            return e.op == Op::Not ? 6 : 10;
        case ExprKind::Literal:
            // a negative literal prints with a leading minus
            return e.value.is_numeric() && e.value.number.is_negative() ? 10 : 11;
        default:
            return 11;
    }
}

std::string wrap(const Expr& e, bool parens) {
    std::string s = to_string(e);
    return parens ? "(" + s + ")" : s;
}

}  // namespace

std::string to_string(const Expr& e) {
    switch (e.kind) {
        case ExprKind::Literal:
            return e.text.empty() ? e.value.to_string() : e.text;
        case ExprKind::Identifier:
        case ExprKind::Variable:
            return e.name;
        case ExprKind::Feature:
            return "active(" + e.name + ")";
        case ExprKind::LabelRef:
            return "\"" + e.name + "\"";
        case ExprKind::Unary: {
            int p = precedence(e);
            return to_string(e.op) + wrap(*e.args[0], precedence(*e.args[0]) < p);
        }
        case ExprKind::Ternary:
            return wrap(*e.args[0], precedence(*e.args[0]) <= 1) + " ? " + wrap(*e.args[1], precedence(*e.args[1]) <= 1) +
                   " : " + wrap(*e.args[2], precedence(*e.args[2]) < 1);
        case ExprKind::Binary: {
            int p = precedence(e);
            bool right_assoc = e.op == Op::Implies;
            bool non_assoc = p == 7;
            bool left_paren = precedence(*e.args[0]) < p || (precedence(*e.args[0]) == p && (right_assoc || non_assoc));
            bool right_paren = precedence(*e.args[1]) < p || (precedence(*e.args[1]) == p && !right_assoc);
            bool spaced = p <= 5;
            std::string op = spaced ? " " + to_string(e.op) + " " : to_string(e.op);
            return wrap(*e.args[0], left_paren) + op + wrap(*e.args[1], right_paren);
        }
        case ExprKind::Call: {
            std::string s = e.name + "(";
            for (std::size_t i = 0; i < e.args.size(); ++i) {
                if (i) s += ", ";
                s += to_string(*e.args[i]);
            }
            return s + ")";
        }
    }
    return "?";
}

bool same_structure(const Expr& a, const Expr& b) {
    if (a.kind != b.kind || a.args.size() != b.args.size()) return false;
    switch (a.kind) {
        case ExprKind::Literal:
            if (!(a.value == b.value)) return false;
            break;
        case ExprKind::Unary:
        case ExprKind::Binary:
            if (a.op != b.op) return false;
            break;
        case ExprKind::Identifier:
        case ExprKind::LabelRef:
        case ExprKind::Call:
            if (a.name != b.name) return false;
            break;
        case ExprKind::Variable:
        case ExprKind::Feature:
            if (a.slot != b.slot) return false;
            break;
        case ExprKind::Ternary:
            break;
    }
    for (std::size_t i = 0; i < a.args.size(); ++i)
        if (!same_structure(*a.args[i], *b.args[i])) return false;
    return true;
}

}  // namespace featmc
