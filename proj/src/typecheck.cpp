#include <algorithm>
#include <functional>
#include <set>

#include "featmc/typed_model.hpp"

namespace featmc {

std::string TypedCommand::describe() const {
    return "command " + std::to_string(index + 1) + " of " + component + " (" + pos.to_string() + ")";
}

bool Component::declares(int action) const {
    return std::binary_search(actions.begin(), actions.end(), action);
}

std::optional<int> TypedModel::find_variable(const std::string& name) const {
    for (std::size_t i = 0; i < variables.size(); ++i)
        if (variables[i].name == name) return static_cast<int>(i);
    return std::nullopt;
}

std::optional<int> TypedModel::find_action(const std::string& name) const {
    for (std::size_t i = 0; i < actions.size(); ++i)
        if (actions[i] == name) return static_cast<int>(i);
    return std::nullopt;
}

std::optional<int> TypedModel::find_reward(const std::string& name) const {
    for (std::size_t i = 0; i < rewards.size(); ++i)
        if (rewards[i].name == name) return static_cast<int>(i);
    return std::nullopt;
}

Value parse_literal(const std::string& text, ValueType type) {
    if (type == ValueType::Bool) {
        if (text == "true") return Value::of_bool(true);
        if (text == "false") return Value::of_bool(false);
        throw ModelError("'" + text + "' is not a boolean literal");
    }
    Rational q;
    try {
        q = Rational::parse(text);
    } catch (const std::exception&) {
        throw ModelError("'" + text + "' is not a numeric literal");
    }
    if (type == ValueType::Int) {
        if (!q.is_integer()) throw ModelError("'" + text + "' is not an integer literal");
        return Value::of_int(q.numerator());
    }
    return Value::of_double(q);
}

namespace {

[[noreturn]] void type_error(const Expr& e, const std::string& message) {
    throw ModelError(message + " in '" + to_string(e) + "'", e.pos);
}

/// Binds names, infers types and folds constant subexpressions.
class Resolver {
  public:
    const std::map<std::string, Value>* constants = nullptr;
    std::function<ExprPtr(const std::string&, SourcePos)> formula;
    const std::vector<VariableInfo>* variables = nullptr;
    const FeatureModel* features = nullptr;
    const std::map<std::string, std::int64_t>* parameters = nullptr;
    bool bare_features = false;  // feature constraints: `follow` means active(follow)
    bool allow_labels = false;

    ExprPtr resolve(const ExprPtr& in) {
        const Expr& e = *in;
        switch (e.kind) {
            case ExprKind::Literal:
            case ExprKind::Variable:
            case ExprKind::Feature:
                return in;
            case ExprKind::LabelRef:
                if (!allow_labels) type_error(e, "label references are not allowed here");
                return in;
            case ExprKind::Identifier:
                return resolve_identifier(e);
            default:
                break;
        }
        Expr out = e;
        if (e.kind == ExprKind::Call && e.name == "active") {
            const Expr& arg = *e.args[0];
            if (!features) type_error(e, "features are not available here");
            auto f = features->find(arg.name);
            if (!f) throw ModelError("unknown feature '" + arg.name + "'", arg.pos);
            out.kind = ExprKind::Feature;
            out.name = arg.name;
            out.slot = *f;
            out.args.clear();
            out.type = ValueType::Bool;
            return std::make_shared<const Expr>(std::move(out));
        }
        for (std::size_t i = 0; i < out.args.size(); ++i) {
            // ternary branches are lazy: an error in one only counts if it is taken
            bool branch = e.kind == ExprKind::Ternary && i > 0;
            lazy_depth_ += branch;
            out.args[i] = resolve(out.args[i]);
            lazy_depth_ -= branch;
        }
        infer(out);
        if (e.kind == ExprKind::Ternary && out.args[0]->kind == ExprKind::Literal)
            return out.args[0]->value.boolean ? out.args[1] : out.args[2];
        bool foldable = std::all_of(out.args.begin(), out.args.end(),
                                    [](const ExprPtr& a) { return a->kind == ExprKind::Literal; });
        if (foldable) {
            try {
                Value v = evaluate(out, EvalContext{});
                v.type = out.type;
                return Expr::literal(v, out.pos);
            } catch (const ModelError&) {
                if (lazy_depth_ == 0) throw;
            }
        }
        return std::make_shared<const Expr>(std::move(out));
    }

  private:
    int lazy_depth_ = 0;

    ExprPtr resolve_identifier(const Expr& e) {
        if (parameters) {
            if (auto it = parameters->find(e.name); it != parameters->end())
                return Expr::literal(Value::of_int(it->second), e.pos);
        }
        if (constants) {
            if (auto it = constants->find(e.name); it != constants->end()) return Expr::literal(it->second, e.pos);
        }
        if (formula) {
            if (auto f = formula(e.name, e.pos)) return f;
        }
        if (variables) {
            for (std::size_t i = 0; i < variables->size(); ++i) {
                if ((*variables)[i].name == e.name) {
                    Expr v = e;
                    v.kind = ExprKind::Variable;
                    v.slot = static_cast<int>(i);
                    v.type = ValueType::Int;
                    return std::make_shared<const Expr>(std::move(v));
                }
            }
        }
        if (bare_features && features) {
            if (auto f = features->find(e.name)) {
                Expr v = e;
                v.kind = ExprKind::Feature;
                v.slot = *f;
                v.type = ValueType::Bool;
                return std::make_shared<const Expr>(std::move(v));
            }
        }
        throw ModelError("undefined identifier '" + e.name + "'", e.pos);
    }

    static void infer(Expr& e) {
        auto is_num = [](const ExprPtr& a) { return a->type != ValueType::Bool; };
        auto require_bool = [&](const ExprPtr& a) {
            if (a->type != ValueType::Bool) type_error(e, "type mismatch: expected bool operand");
        };
        auto require_num = [&](const ExprPtr& a) {
            if (!is_num(a)) type_error(e, "type mismatch: expected numeric operand");
        };
        auto joined = [](const ExprPtr& a, const ExprPtr& b) {
            return a->type == ValueType::Int && b->type == ValueType::Int ? ValueType::Int : ValueType::Double;
        };
        switch (e.kind) {
            case ExprKind::Unary:
                if (e.op == Op::Not) {
                    require_bool(e.args[0]);
                    e.type = ValueType::Bool;
                } else {
                    require_num(e.args[0]);
                    e.type = e.args[0]->type;
                }
                return;
            case ExprKind::Ternary:
                require_bool(e.args[0]);
                if (e.args[1]->type == ValueType::Bool || e.args[2]->type == ValueType::Bool) {
                    if (e.args[1]->type != e.args[2]->type) type_error(e, "type mismatch between ternary branches");
                    e.type = ValueType::Bool;
                } else {
                    e.type = joined(e.args[1], e.args[2]);
                }
                return;
            case ExprKind::Binary:
                switch (e.op) {
                    case Op::And:
                    case Op::Or:
                    case Op::Implies:
                    case Op::Iff:
                        require_bool(e.args[0]);
                        require_bool(e.args[1]);
                        e.type = ValueType::Bool;
                        return;
                    case Op::Eq:
                    case Op::Ne:
                        if (is_num(e.args[0]) != is_num(e.args[1])) type_error(e, "type mismatch: comparing bool with number");
                        e.type = ValueType::Bool;
                        return;
                    case Op::Lt:
                    case Op::Le:
                    case Op::Gt:
                    case Op::Ge:
                        require_num(e.args[0]);
                        require_num(e.args[1]);
                        e.type = ValueType::Bool;
                        return;
                    case Op::Div:
                        require_num(e.args[0]);
                        require_num(e.args[1]);
                        e.type = ValueType::Double;
                        return;
                    default:
                        require_num(e.args[0]);
                        require_num(e.args[1]);
                        e.type = joined(e.args[0], e.args[1]);
                        return;
                }
            case ExprKind::Call:
                for (const auto& a : e.args) require_num(a);
                if (e.name == "round" || e.name == "floor" || e.name == "ceil" || e.name == "mod") {
                    e.type = ValueType::Int;
                } else if (e.name == "pow") {
                    e.type = joined(e.args[0], e.args[1]);
                } else {
                    e.type = ValueType::Int;
                    for (const auto& a : e.args)
                        if (a->type == ValueType::Double) e.type = ValueType::Double;
                }
                return;
            default:
                return;
        }
    }
};

FeatureFormula to_feature_formula(const Expr& e) {
    using K = FeatureFormula::Kind;
    switch (e.kind) {
        case ExprKind::Literal:
            if (e.value.type == ValueType::Bool) return FeatureFormula::constant(e.value.boolean);
            break;
        case ExprKind::Feature:
            return FeatureFormula::atom(e.slot);
        case ExprKind::Unary:
            if (e.op == Op::Not) return FeatureFormula::make(K::Not, {to_feature_formula(*e.args[0])});
            break;
        case ExprKind::Binary: {
            auto lhs = to_feature_formula(*e.args[0]);
            auto rhs = to_feature_formula(*e.args[1]);
            switch (e.op) {
                case Op::And:
                    return FeatureFormula::make(K::And, {lhs, rhs});
                case Op::Or:
                    return FeatureFormula::make(K::Or, {lhs, rhs});
                case Op::Implies:
                    return FeatureFormula::make(K::Implies, {lhs, rhs});
                case Op::Iff:
                case Op::Eq:
                    return FeatureFormula::make(K::Iff, {lhs, rhs});
                case Op::Ne:
                    return FeatureFormula::make(K::Not, {FeatureFormula::make(K::Iff, {lhs, rhs})});
                default:
                    break;
            }
            break;
        }
        default:
            break;
    }
    throw ModelError("feature constraints may only combine features with boolean connectives: '" + to_string(e) + "'",
                     e.pos);
}

class Typechecker {
  public:
    Typechecker(const ModelAst& ast, const ConstantOverrides& overrides) : ast_(ast), overrides_(overrides) {}

    TypedModel run() {
        check_names();
        resolve_constants();
        build_feature_model();
        select_modules();
        declare_variables();
        collect_actions();
        build_components();
        build_rewards();
        build_labels();
        resolve_all_formulas();
        return std::move(model_);
    }

  private:
    void declare_name(const std::string& name, const std::string& what, SourcePos pos) {
        auto [it, inserted] = names_.emplace(name, what);
        if (!inserted) throw ModelError(what + " '" + name + "' clashes with " + it->second + " of the same name", pos);
    }

    void check_names() {
        for (const auto& c : ast_.constants) declare_name(c.name, "constant", c.pos);
        for (const auto& f : ast_.formulas) declare_name(f.name, "formula", f.pos);
        for (const auto& m : ast_.modules)
            for (const auto& v : m.variables) declare_name(v.name, "variable", v.pos);
        std::set<std::string> blocks, features;
        for (const auto& f : ast_.features) {
            if (!blocks.insert(f.name).second) throw ModelError("feature '" + f.name + "' is declared twice", f.pos);
            features.insert(f.name);
            for (const auto& c : f.children) features.insert(c);
        }
        if (ast_.features.empty()) features.insert("root");
        for (const auto& f : features) declare_name(f, "feature", {});
        for (const auto& l : ast_.labels) declare_name(l.name, "label", l.pos);

        std::set<std::string> modules;
        for (const auto& m : ast_.modules)
            if (!modules.insert(m.name).second) throw ModelError("module '" + m.name + "' is declared twice", m.pos);
    }

    void resolve_constants() {
        std::set<std::string> declared;
        for (const auto& c : ast_.constants) declared.insert(c.name);
        for (const auto& [name, text] : overrides_)
            if (!declared.count(name)) throw ModelError("override for undeclared constant '" + name + "'");

        for (const auto& c : ast_.constants) {
            Value v;
            if (auto it = overrides_.find(c.name); it != overrides_.end()) {
                try {
                    v = parse_literal(it->second, c.type);
                } catch (const ModelError& e) {
                    throw ModelError("override for constant '" + c.name + "': " + e.message());
                }
            } else if (c.value) {
                Resolver r;
                r.constants = &model_.constants;
                ExprPtr e = r.resolve(c.value);
                if (e->kind != ExprKind::Literal)
                    throw ModelError("value of constant '" + c.name + "' is not constant", c.pos);
                v = e->value;
                if (c.type == ValueType::Bool && v.type != ValueType::Bool)
                    throw ModelError("type mismatch: constant '" + c.name + "' is bool", c.pos);
                if (c.type != ValueType::Bool && v.type == ValueType::Bool)
                    throw ModelError("type mismatch: constant '" + c.name + "' is numeric", c.pos);
                if (c.type == ValueType::Int && v.type == ValueType::Double)
                    throw ModelError("type mismatch: int constant '" + c.name + "' has a double value", c.pos);
                v.type = c.type;
            } else {
                throw ModelError("unresolved constant " + c.name, c.pos);
            }
            model_.constants[c.name] = v;
        }
    }

    Resolver resolver(bool with_variables = true) {
        Resolver r;
        r.constants = &model_.constants;
        r.formula = [this](const std::string& name, SourcePos pos) { return formula(name, pos); };
        r.variables = with_variables ? &model_.variables : nullptr;
        r.features = &model_.features;
        return r;
    }

    ExprPtr formula(const std::string& name, SourcePos use) {
        if (auto it = model_.formulas.find(name); it != model_.formulas.end()) return it->second;
        auto decl = std::find_if(ast_.formulas.begin(), ast_.formulas.end(), [&](const auto& f) { return f.name == name; });
        if (decl == ast_.formulas.end()) return nullptr;
        if (!in_progress_.insert(name).second) throw ModelError("formula '" + name + "' is defined cyclically", use);
        ExprPtr e = resolver().resolve(decl->expr);
        in_progress_.erase(name);
        model_.formulas[name] = e;
        return e;
    }

    void resolve_all_formulas() {
        for (const auto& f : ast_.formulas) formula(f.name, f.pos);
    }

    void build_feature_model() {
        if (ast_.features.empty()) {
            model_.features = FeatureModel::from_groups("root", {});
            model_.initial_configuration = model_.features.initial_configuration();
            return;
        }
        int roots = 0;
        std::vector<FeatureModel::GroupDecl> groups;
        for (const auto& f : ast_.features) {
            if (f.is_root) ++roots;
            if (f.group != GroupKind::None) groups.push_back({f.name, f.group, f.children});
        }
        if (roots != 1) throw ModelError("exactly one 'root feature' block is required", ast_.features.front().pos);
        try {
            model_.features = FeatureModel::from_groups("root", groups);
        } catch (const ModelError& e) {
            throw ModelError(e.message(), ast_.features.front().pos);
        }
        for (const auto& f : ast_.features) {
            auto idx = model_.features.find(f.name);
            if (!f.is_root && (!idx || model_.features.node(*idx).parent < 0))
                throw ModelError("feature '" + f.name + "' is not part of the feature tree", f.pos);
        }

        std::vector<FeatureConstraint> constraints;
        std::optional<FeatureConstraint> initial;
        Resolver r;
        r.constants = &model_.constants;
        r.features = &model_.features;
        r.bare_features = true;
        for (const auto& f : ast_.features) {
            for (const auto& c : f.constraints) {
                ExprPtr e = r.resolve(c);
                if (e->type != ValueType::Bool) throw ModelError("feature constraint must be boolean", c->pos);
                constraints.push_back({to_feature_formula(*e), to_string(*c)});
            }
            if (f.initial_constraint) {
                if (initial) throw ModelError("more than one initial constraint", f.initial_constraint->pos);
                ExprPtr e = r.resolve(f.initial_constraint);
                if (e->type != ValueType::Bool) throw ModelError("initial constraint must be boolean", e->pos);
                initial = FeatureConstraint{to_feature_formula(*e), to_string(*f.initial_constraint)};
            }
        }
        std::vector<FeatureNode> nodes;
        for (int i = 0; i < model_.features.size(); ++i) nodes.push_back(model_.features.node(i));
        model_.features = FeatureModel(std::move(nodes), std::move(constraints), std::move(initial));
        try {
            model_.initial_configuration = model_.features.initial_configuration();
        } catch (const ModelError& e) {
            throw ModelError(e.message(), ast_.features.front().pos);
        }
    }

    void select_modules() {
        std::map<std::string, std::string> owner;  // module -> feature
        bool any_clause = false;
        for (const auto& f : ast_.features) {
            for (const auto& m : f.modules) {
                any_clause = true;
                auto it = std::find_if(ast_.modules.begin(), ast_.modules.end(), [&](const auto& d) { return d.name == m; });
                if (it == ast_.modules.end()) throw ModelError("feature '" + f.name + "' names unknown module '" + m + "'", f.pos);
                if (!owner.emplace(m, f.name).second)
                    throw ModelError("module '" + m + "' is attached to more than one feature", f.pos);
            }
        }
        for (const auto& m : ast_.modules) {
            if (!any_clause) {
                selected_.push_back({&m, model_.features.root()});
                continue;
            }
            auto it = owner.find(m.name);
            if (it == owner.end()) throw ModelError("module '" + m.name + "' is not attached to any feature", m.pos);
            selected_.push_back({&m, model_.features.index_of(it->second)});
        }
        if (selected_.empty()) throw ModelError("the model declares no modules");
    }

    std::int32_t constant_int(const ExprPtr& e, const std::string& what) {
        ExprPtr r = resolver(false).resolve(e);
        if (r->kind != ExprKind::Literal) throw ModelError(what + " is not constant", e->pos);
        if (r->value.type != ValueType::Int) throw ModelError("type mismatch: " + what + " must be an int", e->pos);
        std::int64_t v = r->value.as_int();
        if (v < INT32_MIN || v > INT32_MAX) throw ModelError(what + " is out of range", e->pos);
        return static_cast<std::int32_t>(v);
    }

    void declare_variables() {
        for (auto [m, feature] : selected_) {
            for (const auto& v : m->variables) {
                VariableInfo info;
                info.name = v.name;
                info.module = m->name;
                info.pos = v.pos;
                info.lower = constant_int(v.lower, "lower bound of '" + v.name + "'");
                info.upper = constant_int(v.upper, "upper bound of '" + v.name + "'");
                info.init = v.init ? constant_int(v.init, "initial value of '" + v.name + "'") : info.lower;
                if (info.lower > info.upper)
                    throw ModelError("variable '" + v.name + "' has an empty range", v.pos);
                if (info.init < info.lower || info.init > info.upper)
                    throw ModelError("initial value " + std::to_string(info.init) + " of '" + v.name +
                                         "' is outside its range [" + std::to_string(info.lower) + ".." +
                                         std::to_string(info.upper) + "]",
                                     v.pos);
                model_.variables.push_back(info);
            }
        }
    }

    void collect_actions() {
        auto add = [&](const Command& c) {
            if (c.action && !model_.find_action(*c.action)) model_.actions.push_back(*c.action);
        };
        for (auto [m, feature] : selected_)
            for (const auto& c : m->commands) add(c);
        if (ast_.controller)
            for (const auto& c : ast_.controller->commands) add(c);
    }

    ExprPtr bool_expr(const ExprPtr& e, const std::string& what) {
        ExprPtr r = resolver().resolve(e);
        if (r->type != ValueType::Bool) throw ModelError("type mismatch: " + what + " must be boolean", e->pos);
        return r;
    }

    ExprPtr feature_guard(ExprPtr guard, int feature) {
        if (feature == model_.features.root()) return guard;
        Expr f;
        f.kind = ExprKind::Feature;
        f.slot = feature;
        f.name = model_.features.name(feature);
        f.type = ValueType::Bool;
        f.pos = guard->pos;
        auto active = std::make_shared<const Expr>(std::move(f));
        Expr conj = *Expr::binary(Op::And, active, guard, guard->pos);
        conj.type = ValueType::Bool;
        return std::make_shared<const Expr>(std::move(conj));
    }

    TypedCommand command(const Command& c, const std::string& component, int index, bool controller,
                         const std::map<std::string, int>& locals, int feature) {
        TypedCommand out;
        out.pos = c.pos;
        out.component = component;
        out.index = index;
        out.action = c.action ? *model_.find_action(*c.action) : -1;
        out.guard = feature_guard(bool_expr(c.guard, "guard"), feature);

        if (controller && c.branches.size() != 1)
            throw ModelError("controller commands cannot be probabilistic (feature switches need probability 1)", c.pos);
        Rational total(0);
        for (const auto& b : c.branches) {
            TypedBranch tb;
            tb.probability = Rational(1);
            if (b.probability) {
                ExprPtr p = resolver().resolve(b.probability);
                if (p->kind != ExprKind::Literal)
                    throw ModelError("probability expression is not constant: '" + to_string(*b.probability) + "'",
                                     b.probability->pos);
                if (p->type == ValueType::Bool) throw ModelError("type mismatch: probability must be numeric", b.pos);
                tb.probability = p->value.number;
            }
            if (tb.probability.is_negative() || tb.probability > Rational(1))
                throw ModelError("probability " + tb.probability.to_string() + " outside [0,1] in " + component, b.pos);
            if (controller && tb.probability != Rational(1))
                throw ModelError("controller branch with probability " + tb.probability.to_string() + " (must be 1)",
                                 b.pos);
            total += tb.probability;

            std::set<int> assigned;
            for (const auto& a : b.update.assignments) {
                auto it = locals.find(a.variable);
                if (it == locals.end()) {
                    if (model_.find_variable(a.variable))
                        throw ModelError("variable '" + a.variable + "' is not local to " + component, a.pos);
                    throw ModelError("undefined identifier '" + a.variable + "'", a.pos);
                }
                if (!assigned.insert(it->second).second)
                    throw ModelError("variable '" + a.variable + "' is assigned twice in one update", a.pos);
                ExprPtr v = resolver().resolve(a.value);
                if (v->type != ValueType::Int)
                    throw ModelError("type mismatch: assignment to int variable '" + a.variable + "' has type " +
                                         featmc::to_string(v->type),
                                     a.pos);
                tb.assignments.push_back({it->second, v, a.pos});
            }
            for (const auto& s : b.update.switches) {
                auto f = model_.features.find(s.feature);
                if (!f) throw ModelError("unknown feature '" + s.feature + "'", s.pos);
                if (s.activate)
                    tb.activate = tb.activate.with(*f);
                else
                    tb.deactivate = tb.deactivate.with(*f);
            }
            if (!(tb.activate & tb.deactivate).empty())
                throw ModelError("feature both activated and deactivated in one update", b.pos);
            out.branches.push_back(std::move(tb));
        }
        if (total != Rational(1))
            throw ModelError("probabilities of " + out.describe() + " sum to " + total.to_string() + ", not 1", c.pos);
        return out;
    }

    void build_components() {
        for (auto [m, feature] : selected_) {
            Component comp;
            comp.name = m->name;
            std::map<std::string, int> locals;
            for (const auto& v : m->variables) locals[v.name] = *model_.find_variable(v.name);
            int index = 0;
            for (const auto& c : m->commands) comp.commands.push_back(command(c, m->name, index++, false, locals, feature));
            model_.components.push_back(std::move(comp));
        }
        if (ast_.controller) {
            Component comp;
            comp.name = "controller";
            comp.is_controller = true;
            int index = 0;
            for (const auto& c : ast_.controller->commands)
                comp.commands.push_back(command(c, "controller", index++, true, {}, model_.features.root()));
            model_.components.push_back(std::move(comp));
        }
        for (auto& comp : model_.components) {
            for (const auto& c : comp.commands)
                if (c.action >= 0) comp.actions.push_back(c.action);
            std::sort(comp.actions.begin(), comp.actions.end());
            comp.actions.erase(std::unique(comp.actions.begin(), comp.actions.end()), comp.actions.end());
        }
    }

    void add_rewards(const RewardDecl& r, int feature) {
        if (model_.find_reward(r.name)) throw ModelError("reward structure \"" + r.name + "\" is declared twice", r.pos);
        TypedRewardStructure s;
        s.name = r.name;
        for (const auto& item : r.items) {
            TypedRewardItem t;
            t.transition = item.transition;
            t.pos = item.pos;
            if (item.action) {
                auto a = model_.find_action(*item.action);
                if (!a) throw ModelError("reward item refers to unknown action '" + *item.action + "'", item.pos);
                t.action = *a;
            }
            t.guard = feature_guard(bool_expr(item.guard, "reward guard"), feature);
            t.value = resolver().resolve(item.value);
            if (t.value->type == ValueType::Bool) throw ModelError("type mismatch: reward value must be numeric", item.pos);
            if (t.value->kind == ExprKind::Literal && t.value->value.number.is_negative())
                throw ModelError("negative reward value", item.pos);
            s.items.push_back(std::move(t));
        }
        model_.rewards.push_back(std::move(s));
    }

    void build_rewards() {
        for (const auto& f : ast_.features)
            for (const auto& r : f.rewards) add_rewards(r, model_.features.index_of(f.name));
        for (const auto& r : ast_.rewards) add_rewards(r, model_.features.root());
    }

    void build_labels() {
        for (const auto& l : ast_.labels) model_.labels.push_back({l.name, bool_expr(l.expr, "label")});
    }

    const ModelAst& ast_;
    const ConstantOverrides& overrides_;
    TypedModel model_;
    std::map<std::string, std::string> names_;
    std::set<std::string> in_progress_;
    std::vector<std::pair<const ModuleDecl*, int>> selected_;
};

}  // namespace

TypedModel typecheck(const ModelAst& ast, const ConstantOverrides& overrides) {
    return Typechecker(ast, overrides).run();
}

ExprPtr resolve_expression(const TypedModel& model, const ExprPtr& expr, const ResolveOptions& options) {
    Resolver r;
    r.constants = &model.constants;
    r.formula = [&model](const std::string& name, SourcePos) -> ExprPtr {
        auto it = model.formulas.find(name);
        return it == model.formulas.end() ? nullptr : it->second;
    };
    r.variables = &model.variables;
    r.features = &model.features;
    r.parameters = &options.parameters;
    r.allow_labels = options.allow_labels;
    return r.resolve(expr);
}

}  // namespace featmc
