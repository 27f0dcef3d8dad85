#include <algorithm>
#include <functional>
#include <set>

#include "featmc/model_ast.hpp"
#include "lexer.hpp"

namespace featmc {

namespace {

using detail::Token;
using detail::TokenKind;

class Parser {
  public:
    Parser(const std::string& text, bool property_mode)
        : tokens_(detail::tokenize(text)), property_mode_(property_mode) {}

    ModelAst model() {
        ModelAst ast;
        accept("mdp");
        if (at_end()) fail({"const", "formula", "label", "feature", "root", "module", "controller", "rewards"});
        while (!at_end()) {
            const Token& t = peek();
            if (t.is("const")) {
                ast.constants.push_back(const_decl());
            } else if (t.is("formula")) {
                ast.formulas.push_back(formula_decl());
            } else if (t.is("label")) {
                ast.labels.push_back(label_decl());
            } else if (t.is("root") || t.is("feature")) {
                ast.features.push_back(feature_block());
            } else if (t.is("module")) {
                ast.modules.push_back(module_block());
            } else if (t.is("controller")) {
                if (ast.controller) throw ModelError("only one controller block is allowed", t.pos);
                ast.controller = controller_block();
            } else if (t.is("rewards")) {
                ast.rewards.push_back(rewards_block());
            } else {
                fail({"const", "formula", "label", "feature", "root", "module", "controller", "rewards"});
            }
        }
        return ast;
    }

    PropertyFile properties() {
        PropertyFile file;
        while (!at_end()) {
            if (peek().is("const")) {
                file.constants.push_back(const_decl());
            } else if (peek().is("label")) {
                file.labels.push_back(label_decl());
            } else {
                file.properties.push_back(property());
                expect(";");
            }
        }
        return file;
    }

    ExprPtr single_expression() {
        ExprPtr e = expression();
        if (!at_end()) fail({"end of input"});
        return e;
    }

  private:
    // ---- token helpers ----
    const Token& peek(std::size_t ahead = 0) const {
        std::size_t i = std::min(pos_ + ahead, tokens_.size() - 1);
        return tokens_[i];
    }
    bool at_end() const { return peek().kind == TokenKind::End; }
    const Token& next() {
        const Token& t = tokens_[pos_];
        if (pos_ + 1 < tokens_.size()) ++pos_;
        return t;
    }
    bool accept(std::string_view s) {
        if (peek().is(s)) {
            next();
            return true;
        }
        return false;
    }
    const Token& expect(std::string_view s) {
        if (!peek().is(s)) fail({"'" + std::string(s) + "'"});
        return next();
    }
    [[noreturn]] void fail(std::vector<std::string> expected) const {
        for (auto& e : expected)
            if (e.front() != '\'' && e.front() != '<' && e != "end of input") e = "'" + e + "'";
        std::string msg = "syntax error: expected ";
        if (expected.size() > 1) msg += "one of ";
        for (std::size_t i = 0; i < expected.size(); ++i) msg += (i ? ", " : "") + expected[i];
        msg += "; found " + peek().describe();
        throw SyntaxError(msg, peek().pos, std::move(expected));
    }
    std::string identifier() {
        const Token& t = peek();
        if (t.kind != TokenKind::Identifier) fail({"<identifier>"});
        if (detail::is_keyword(t.text)) throw SyntaxError("'" + t.text + "' is a reserved keyword", t.pos, {"<identifier>"});
        return next().text;
    }
    std::string string_literal() {
        if (peek().kind != TokenKind::String) fail({"<string>"});
        return next().text;
    }

    // ---- declarations ----
    ConstDecl const_decl() {
        ConstDecl d;
        d.pos = expect("const").pos;
        if (accept("int")) {
            d.type = ValueType::Int;
        } else if (accept("double")) {
            d.type = ValueType::Double;
        } else if (accept("bool")) {
            d.type = ValueType::Bool;
        }
        d.name = identifier();
        if (accept("=")) d.value = expression();
        expect(";");
        return d;
    }

    FormulaDecl formula_decl() {
        FormulaDecl d;
        d.pos = expect("formula").pos;
        d.name = identifier();
        expect("=");
        d.expr = expression();
        expect(";");
        return d;
    }

    LabelDecl label_decl() {
        LabelDecl d;
        d.pos = expect("label").pos;
        d.name = string_literal();
        expect("=");
        d.expr = expression();
        expect(";");
        return d;
    }

    std::vector<std::string> identifier_list() {
        std::vector<std::string> out{identifier()};
        while (accept(",")) out.push_back(identifier());
        return out;
    }

    FeatureDecl feature_block() {
        FeatureDecl d;
        d.pos = peek().pos;
        if (accept("root")) {
            expect("feature");
            d.is_root = true;
            d.name = "root";
        } else {
            expect("feature");
            d.name = identifier();
        }
        while (!accept("endfeature")) {
            const Token& t = peek();
            if (t.is("all") || t.is("one")) {
                if (d.group != GroupKind::None)
                    throw ModelError("feature '" + d.name + "' declares more than one group", t.pos);
                d.group = next().text == "all" ? GroupKind::AllOf : GroupKind::OneOf;
                expect("of");
                d.children = identifier_list();
                expect(";");
            } else if (accept("modules")) {
                auto names = identifier_list();
                d.modules.insert(d.modules.end(), names.begin(), names.end());
                expect(";");
            } else if (accept("constraint")) {
                d.constraints.push_back(expression());
                expect(";");
            } else if (t.is("initial")) {
                next();
                expect("constraint");
                if (d.initial_constraint) throw ModelError("duplicate initial constraint", t.pos);
                d.initial_constraint = expression();
                expect(";");
            } else if (t.is("rewards")) {
                d.rewards.push_back(rewards_block());
            } else {
                fail({"all", "one", "modules", "constraint", "initial", "rewards", "endfeature"});
            }
        }
        return d;
    }

    ModuleDecl module_block() {
        ModuleDecl m;
        m.pos = expect("module").pos;
        m.name = identifier();
        while (!accept("endmodule")) {
            if (peek().is("[")) {
                m.commands.push_back(command(false));
            } else if (peek().kind == TokenKind::Identifier && !detail::is_keyword(peek().text)) {
                m.variables.push_back(variable_decl());
            } else {
                fail({"<identifier>", "[", "endmodule"});
            }
        }
        return m;
    }

    VariableDecl variable_decl() {
        VariableDecl v;
        v.pos = peek().pos;
        v.name = identifier();
        expect(":");
        expect("[");
        v.lower = expression();
        expect("..");
        v.upper = expression();
        expect("]");
        if (accept("init")) v.init = expression();
        expect(";");
        return v;
    }

    ControllerDecl controller_block() {
        ControllerDecl c;
        c.pos = expect("controller").pos;
        while (!accept("endcontroller")) {
            if (!peek().is("[")) fail({"[", "endcontroller"});
            c.commands.push_back(command(true));
        }
        return c;
    }

    Command command(bool controller) {
        Command c;
        c.pos = expect("[").pos;
        if (!peek().is("]")) c.action = identifier();
        expect("]");
        c.guard = expression();
        expect("->");
        do {
            c.branches.push_back(branch(controller));
        } while (accept("+"));
        expect(";");
        return c;
    }

    bool update_starts_here() const {
        const Token& t = peek();
        if (t.is("true")) return peek(1).is(";") || peek(1).is("+");
        if (t.is("activate") || t.is("deactivate")) return true;
        return t.is("(") && peek(1).kind == TokenKind::Identifier && peek(2).is("'");
    }

    Branch branch(bool controller) {
        Branch b;
        b.pos = peek().pos;
        if (!update_starts_here()) {
            b.probability = expression();
            expect(":");
        }
        b.update = update(controller);
        return b;
    }

    Update update(bool controller) {
        Update u;
        if (peek().is("true")) {
            next();
            return u;
        }
        do {
            const Token& t = peek();
            if (t.is("activate") || t.is("deactivate")) {
                if (!controller)
                    throw SyntaxError("feature switches are only allowed inside the controller", t.pos, {"("});
                FeatureUpdate f;
                f.pos = t.pos;
                f.activate = next().text == "activate";
                expect("(");
                f.feature = identifier();
                expect(")");
                u.switches.push_back(f);
            } else if (t.is("(")) {
                Assignment a;
                a.pos = next().pos;
                a.variable = identifier();
                expect("'");
                expect("=");
                a.value = expression();
                expect(")");
                u.assignments.push_back(a);
            } else {
                fail(controller ? std::vector<std::string>{"activate", "deactivate", "true"}
                                : std::vector<std::string>{"(", "true"});
            }
        } while (accept("&"));
        return u;
    }

    RewardDecl rewards_block() {
        RewardDecl r;
        r.pos = expect("rewards").pos;
        r.name = string_literal();
        while (!accept("endrewards")) {
            RewardItem item;
            item.pos = peek().pos;
            if (accept("[")) {
                item.transition = true;
                if (!peek().is("]")) item.action = identifier();
                expect("]");
            }
            item.guard = expression();
            expect(":");
            item.value = expression();
            expect(";");
            r.items.push_back(item);
        }
        return r;
    }

    // ---- properties ----
    PropertyAst property() {
        PropertyAst p;
        p.pos = peek().pos;
        if (accept("filter")) {
            expect("(");
            const Token& agg = peek();
            if (agg.kind != TokenKind::Identifier) fail({"min", "max", "avg"});
            if (agg.text == "min")
                p.filter = FilterAggregate::Min;
            else if (agg.text == "max")
                p.filter = FilterAggregate::Max;
            else if (agg.text == "avg")
                p.filter = FilterAggregate::Avg;
            else
                throw SyntaxError("unknown filter aggregate '" + agg.text + "'", agg.pos, {"'min'", "'max'", "'avg'"});
            next();
            expect(",");
            p.query = query();
            expect(",");
            p.filter_states = expression();
            expect(")");
        } else {
            p.query = query();
        }
        return p;
    }

    OptMode opt_mode_word() {
        const Token& t = peek();
        if (t.is("min")) {
            next();
            return OptMode::Min;
        }
        if (t.is("max")) {
            next();
            return OptMode::Max;
        }
        fail({"min", "max"});
    }

    Query query() {
        Query q;
        const Token& t = peek();
        if (t.kind != TokenKind::Identifier) fail({"Pmin", "Pmax", "R", "filter"});
        if (t.text == "Pmin" || t.text == "Pmax") {
            q.mode = t.text == "Pmin" ? OptMode::Min : OptMode::Max;
            next();
        } else if (t.text == "Rmin" || t.text == "Rmax") {
            q.reward = true;
            q.mode = t.text == "Rmin" ? OptMode::Min : OptMode::Max;
            next();
        } else if (t.text == "R") {
            next();
            q.reward = true;
            if (accept("{")) {
                q.reward_structure = string_literal();
                expect("}");
            }
            q.mode = opt_mode_word();
        } else if (t.text == "P") {
            throw SyntaxError("probability queries on MDPs need 'Pmin' or 'Pmax'", t.pos, {"'Pmin'", "'Pmax'"});
        } else {
            fail({"Pmin", "Pmax", "R", "filter"});
        }
        expect("=");
        expect("?");
        expect("[");
        const Token& op = peek();
        if (op.is("F")) {
            next();
            q.path.kind = PathKind::Eventually;
            if (accept("<=")) {
                if (q.reward) throw SyntaxError("bounded reward queries are not supported", op.pos, {"<expression>"});
                q.path.kind = PathKind::BoundedEventually;
                q.path.bound = unary();
            }
        } else if (op.is("G")) {
            if (q.reward) fail({"F"});
            next();
            q.path.kind = PathKind::Globally;
        } else {
            fail(q.reward ? std::vector<std::string>{"F"} : std::vector<std::string>{"F", "G"});
        }
        q.path.target = expression();
        expect("]");
        return q;
    }

    // ---- expressions ----
    ExprPtr expression() { return ternary(); }

    ExprPtr ternary() {
        SourcePos pos = peek().pos;
        ExprPtr cond = implies();
        if (accept("?")) {
            ExprPtr a = ternary();
            expect(":");
            ExprPtr b = ternary();
            return Expr::ternary(cond, a, b, pos);
        }
        return cond;
    }

    ExprPtr implies() {
        SourcePos pos = peek().pos;
        ExprPtr lhs = iff();
        if (accept("=>") || accept("requires")) return Expr::binary(Op::Implies, lhs, implies(), pos);
        return lhs;
    }

    ExprPtr iff() {
        SourcePos pos = peek().pos;
        ExprPtr lhs = disjunction();
        while (accept("<=>")) lhs = Expr::binary(Op::Iff, lhs, disjunction(), pos);
        return lhs;
    }

    ExprPtr disjunction() {
        SourcePos pos = peek().pos;
        ExprPtr lhs = conjunction();
        while (accept("|")) lhs = Expr::binary(Op::Or, lhs, conjunction(), pos);
        return lhs;
    }

    ExprPtr conjunction() {
        SourcePos pos = peek().pos;
        ExprPtr lhs = negation();
        while (accept("&")) lhs = Expr::binary(Op::And, lhs, negation(), pos);
        return lhs;
    }

    ExprPtr negation() {
        SourcePos pos = peek().pos;
        if (accept("!")) return Expr::unary(Op::Not, negation(), pos);
        return relational();
    }

    ExprPtr relational() {
        SourcePos pos = peek().pos;
        ExprPtr lhs = additive();
        static const std::pair<std::string_view, Op> kOps[] = {{"=", Op::Eq},  {"!=", Op::Ne}, {"<", Op::Lt},
                                                                {"<=", Op::Le}, {">", Op::Gt},  {">=", Op::Ge}};
        for (auto [sym, op] : kOps) {
            if (peek().kind == TokenKind::Symbol && peek().text == sym) {
                next();
                return Expr::binary(op, lhs, additive(), pos);
            }
        }
        return lhs;
    }

    ExprPtr additive() {
        SourcePos pos = peek().pos;
        ExprPtr lhs = multiplicative();
        while (true) {
            if (accept("+"))
                lhs = Expr::binary(Op::Add, lhs, multiplicative(), pos);
            else if (accept("-"))
                lhs = Expr::binary(Op::Sub, lhs, multiplicative(), pos);
            else
                return lhs;
        }
    }

    ExprPtr multiplicative() {
        SourcePos pos = peek().pos;
        ExprPtr lhs = unary();
        while (true) {
            if (accept("*"))
                lhs = Expr::binary(Op::Mul, lhs, unary(), pos);
            else if (accept("/"))
                lhs = Expr::binary(Op::Div, lhs, unary(), pos);
            else
                return lhs;
        }
    }

    ExprPtr unary() {
        SourcePos pos = peek().pos;
        if (accept("-")) return Expr::unary(Op::Neg, unary(), pos);
        return primary();
    }

    ExprPtr primary() {
        const Token& t = peek();
        SourcePos pos = t.pos;
        switch (t.kind) {
            case TokenKind::Number: {
                std::string text = next().text;
                bool is_int = text.find_first_of(".eE") == std::string::npos;
                Rational q;
                try {
                    q = Rational::parse(text);
                } catch (const std::exception& e) {
                    throw SyntaxError(std::string("invalid numeric literal: ") + e.what(), pos);
                }
                Value v = is_int ? Value::of_int(q.numerator()) : Value::of_double(q);
                return Expr::literal(v, pos, text);
            }
            case TokenKind::String:
                if (!property_mode_) fail({"<expression>"});
                return Expr::label(next().text, pos);
            case TokenKind::Identifier: {
                if (t.is("true") || t.is("false")) return Expr::literal(Value::of_bool(next().text == "true"), pos);
                if (t.is("active")) {
                    next();
                    expect("(");
                    auto f = Expr::identifier(identifier(), peek().pos);
                    expect(")");
                    return Expr::call("active", {f}, pos);
                }
                if (detail::is_keyword(t.text)) fail({"<expression>"});
                std::string name = next().text;
                if (accept("(")) {
                    std::vector<ExprPtr> args;
                    if (!peek().is(")")) {
                        args.push_back(expression());
                        while (accept(",")) args.push_back(expression());
                    }
                    expect(")");
                    check_arity(name, args.size(), pos);
                    return Expr::call(name, std::move(args), pos);
                }
                return Expr::identifier(name, pos);
            }
            case TokenKind::Symbol:
                if (accept("(")) {
                    ExprPtr e = expression();
                    expect(")");
                    return e;
                }
                if (accept("$")) {
                    expect("{");
                    ExprPtr e = expression();
                    expect("}");
                    return e;
                }
                break;
            case TokenKind::End:
                break;
        }
        fail({"<expression>"});
    }

    static void check_arity(const std::string& name, std::size_t n, SourcePos pos) {
        bool ok;
        if (name == "round" || name == "floor" || name == "ceil")
            ok = n == 1;
        else if (name == "pow" || name == "mod")
            ok = n == 2;
        else if (name == "min" || name == "max")
            ok = n >= 2;
        else
            throw ModelError("unknown function '" + name + "'", pos);
        if (!ok) throw ModelError("wrong number of arguments to '" + name + "'", pos);
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    bool property_mode_;
};

// ---- printing ----

std::string print_update(const Update& u) {
    if (u.assignments.empty() && u.switches.empty()) return "true";
    std::string s;
    for (const auto& a : u.assignments) {
        if (!s.empty()) s += " & ";
        s += "(" + a.variable + "'=" + to_string(*a.value) + ")";
    }
    for (const auto& f : u.switches) {
        if (!s.empty()) s += " & ";
        s += (f.activate ? "activate(" : "deactivate(") + f.feature + ")";
    }
    return s;
}

std::string print_command(const Command& c) {
    std::string s = "    [" + c.action.value_or("") + "] " + to_string(*c.guard) + " -> ";
    for (std::size_t i = 0; i < c.branches.size(); ++i) {
        if (i) s += " + ";
        const auto& b = c.branches[i];
        if (b.probability) s += to_string(*b.probability) + " : ";
        s += print_update(b.update);
    }
    return s + ";\n";
}

std::string print_rewards(const RewardDecl& r, const std::string& indent) {
    std::string s = indent + "rewards \"" + r.name + "\"\n";
    for (const auto& item : r.items) {
        s += indent + "    ";
        if (item.transition) s += "[" + item.action.value_or("") + "] ";
        s += to_string(*item.guard) + " : " + to_string(*item.value) + ";\n";
    }
    return s + indent + "endrewards\n";
}

std::string join(const std::vector<std::string>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + xs[i];
    return s;
}

std::string print_const(const ConstDecl& c) {
    std::string s = "const " + to_string(c.type) + " " + c.name;
    if (c.value) s += " = " + to_string(*c.value);
    return s + ";\n";
}

template <typename T, typename F>
bool all_pairs(const std::vector<T>& a, const std::vector<T>& b, F&& eq) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!eq(a[i], b[i])) return false;
    return true;
}

bool same_ptr(const ExprPtr& a, const ExprPtr& b) {
    if (!a || !b) return !a && !b;
    return same_structure(*a, *b);
}

bool same_update(const Update& a, const Update& b) {
    return all_pairs(a.assignments, b.assignments,
                     [](const auto& x, const auto& y) { return x.variable == y.variable && same_ptr(x.value, y.value); }) &&
           all_pairs(a.switches, b.switches,
                     [](const auto& x, const auto& y) { return x.activate == y.activate && x.feature == y.feature; });
}

bool same_command(const Command& a, const Command& b) {
    return a.action == b.action && same_ptr(a.guard, b.guard) &&
           all_pairs(a.branches, b.branches, [](const auto& x, const auto& y) {
               return same_ptr(x.probability, y.probability) && same_update(x.update, y.update);
           });
}

bool same_rewards(const RewardDecl& a, const RewardDecl& b) {
    return a.name == b.name && all_pairs(a.items, b.items, [](const auto& x, const auto& y) {
               return x.transition == y.transition && x.action == y.action && same_ptr(x.guard, y.guard) &&
                      same_ptr(x.value, y.value);
           });
}

}  // namespace

ModelAst parse_model(const std::string& text) {
    return Parser(text, false).model();
}

PropertyFile parse_properties(const std::string& text) {
    return Parser(text, true).properties();
}

ExprPtr parse_expression(const std::string& text) {
    return Parser(text, true).single_expression();
}

std::string to_string(const ModelAst& m) {
    std::string s;
    for (const auto& c : m.constants) s += print_const(c);
    for (const auto& f : m.formulas) s += "formula " + f.name + " = " + to_string(*f.expr) + ";\n";
    for (const auto& f : m.features) {
        s += f.is_root ? "root feature\n" : "feature " + f.name + "\n";
        if (f.group != GroupKind::None)
            s += std::string("    ") + (f.group == GroupKind::AllOf ? "all of " : "one of ") + join(f.children) + ";\n";
        if (!f.modules.empty()) s += "    modules " + join(f.modules) + ";\n";
        for (const auto& c : f.constraints) s += "    constraint " + to_string(*c) + ";\n";
        if (f.initial_constraint) s += "    initial constraint " + to_string(*f.initial_constraint) + ";\n";
        for (const auto& r : f.rewards) s += print_rewards(r, "    ");
        s += "endfeature\n";
    }
    for (const auto& mod : m.modules) {
        s += "module " + mod.name + "\n";
        for (const auto& v : mod.variables) {
            s += "    " + v.name + " : [" + to_string(*v.lower) + ".." + to_string(*v.upper) + "]";
            if (v.init) s += " init " + to_string(*v.init);
            s += ";\n";
        }
        for (const auto& c : mod.commands) s += print_command(c);
        s += "endmodule\n";
    }
    if (m.controller) {
        s += "controller\n";
        for (const auto& c : m.controller->commands) s += print_command(c);
        s += "endcontroller\n";
    }
    for (const auto& r : m.rewards) s += print_rewards(r, "");
    for (const auto& l : m.labels) s += "label \"" + l.name + "\" = " + to_string(*l.expr) + ";\n";
    return s;
}

std::string to_string(const PropertyAst& p) {
    const Query& q = p.query;
    std::string s;
    if (q.reward) {
        s = "R";
        if (!q.reward_structure.empty()) s += "{\"" + q.reward_structure + "\"}";
        s += q.mode == OptMode::Min ? "min" : "max";
    } else {
        s = q.mode == OptMode::Min ? "Pmin" : "Pmax";
    }
    s += "=? [";
    switch (q.path.kind) {
        case PathKind::Eventually:
            s += "F ";
            break;
        case PathKind::BoundedEventually: {
            bool atomic = q.path.bound->kind == ExprKind::Identifier || q.path.bound->kind == ExprKind::Literal;
            s += "F<=" + (atomic ? to_string(*q.path.bound) : "(" + to_string(*q.path.bound) + ")") + " ";
            break;
        }
        case PathKind::Globally:
            s += "G ";
            break;
    }
    s += to_string(*q.path.target) + "]";
    if (p.filter) {
        std::string agg = *p.filter == FilterAggregate::Min ? "min" : *p.filter == FilterAggregate::Max ? "max" : "avg";
        s = "filter(" + agg + ", " + s + ", " + to_string(*p.filter_states) + ")";
    }
    return s;
}

std::string to_string(const PropertyFile& file) {
    std::string s;
    for (const auto& c : file.constants) s += print_const(c);
    for (const auto& l : file.labels) s += "label \"" + l.name + "\" = " + to_string(*l.expr) + ";\n";
    for (const auto& p : file.properties) s += to_string(p) + ";\n";
    return s;
}

bool same_structure(const PropertyAst& a, const PropertyAst& b) {
    return a.query.reward == b.query.reward && a.query.reward_structure == b.query.reward_structure &&
           a.query.mode == b.query.mode && a.query.path.kind == b.query.path.kind &&
           same_ptr(a.query.path.target, b.query.path.target) && same_ptr(a.query.path.bound, b.query.path.bound) &&
           a.filter == b.filter && same_ptr(a.filter_states, b.filter_states);
}

bool same_structure(const ModelAst& a, const ModelAst& b) {
    bool consts = all_pairs(a.constants, b.constants, [](const auto& x, const auto& y) {
        return x.name == y.name && x.type == y.type && same_ptr(x.value, y.value);
    });
    auto named_expr = [](const auto& x, const auto& y) { return x.name == y.name && same_ptr(x.expr, y.expr); };
    bool features = all_pairs(a.features, b.features, [](const FeatureDecl& x, const FeatureDecl& y) {
        return x.name == y.name && x.is_root == y.is_root && x.group == y.group && x.children == y.children &&
               x.modules == y.modules && all_pairs(x.constraints, y.constraints, same_ptr) &&
               same_ptr(x.initial_constraint, y.initial_constraint) && all_pairs(x.rewards, y.rewards, same_rewards);
    });
    bool modules = all_pairs(a.modules, b.modules, [](const ModuleDecl& x, const ModuleDecl& y) {
        return x.name == y.name &&
               all_pairs(x.variables, y.variables,
                         [](const auto& v, const auto& w) {
                             return v.name == w.name && same_ptr(v.lower, w.lower) && same_ptr(v.upper, w.upper) &&
                                    same_ptr(v.init, w.init);
                         }) &&
               all_pairs(x.commands, y.commands, same_command);
    });
    bool controller = a.controller.has_value() == b.controller.has_value() &&
                      (!a.controller || all_pairs(a.controller->commands, b.controller->commands, same_command));
    return consts && all_pairs(a.formulas, b.formulas, named_expr) && all_pairs(a.labels, b.labels, named_expr) &&
           features && modules && controller && all_pairs(a.rewards, b.rewards, same_rewards);
}

}  // namespace featmc
