#include <algorithm>
#include <functional>
#include <limits>

#include "featmc/checker.hpp"
#include "featmc/errors.hpp"

namespace featmc {

namespace {

const TypedModel& empty_model() {
    static const TypedModel model = [] {
        TypedModel m;
        m.features = FeatureModel::from_groups("root", {});
        return m;
    }();
    return model;
}

bool mentions_label(const Expr& e) {
    if (e.kind == ExprKind::LabelRef) return true;
    return std::any_of(e.args.begin(), e.args.end(), [](const ExprPtr& a) { return mentions_label(*a); });
}

void collect_identifiers(const Expr& e, std::set<std::string>& out) {
    if (e.kind == ExprKind::Identifier) out.insert(e.name);
    if (e.kind == ExprKind::Call && e.name == "active") return;
    for (const auto& a : e.args) collect_identifiers(*a, out);
}

}  // namespace

PropertyEvaluator::PropertyEvaluator(const CompiledMdp& mdp, const TypedModel* model, CheckerOptions options)
    : mdp_(mdp), model_(model), options_(options) {}

void PropertyEvaluator::add_labels(const std::vector<LabelDecl>& labels) {
    for (const auto& l : labels) {
        if (mdp_.find_label(l.name) || extra_labels_.count(l.name))
            throw ModelError("label \"" + l.name + "\" is already declared", l.pos);
        extra_labels_[l.name] = state_set(l.expr);
    }
}

StateSet PropertyEvaluator::state_set(const ExprPtr& expr, const Bindings& bindings) const {
    ResolveOptions opts;
    opts.parameters = bindings;
    opts.allow_labels = true;
    ExprPtr resolved = resolve_expression(model_ ? *model_ : empty_model(), expr, opts);
    if (resolved->type != ValueType::Bool)
        throw ModelError("type mismatch: state formula '" + to_string(*expr) + "' is not boolean", expr->pos);
    return eval_set(*resolved);
}

StateSet PropertyEvaluator::eval_set(const Expr& e) const {
    const std::size_t n = mdp_.num_states();
    if (!mentions_label(e)) {
        StateSet out(n);
        for (std::size_t s = 0; s < n; ++s) {
            EvalContext ctx{std::span<const std::int32_t>(mdp_.valuation(s), mdp_.num_variables()),
                            mdp_.configuration(s)};
            if (evaluate_bool(e, ctx)) out.set(s);
        }
        return out;
    }
    switch (e.kind) {
        case ExprKind::LabelRef: {
            if (const StateSet* l = mdp_.find_label(e.name)) return *l;
            auto it = extra_labels_.find(e.name);
            if (it != extra_labels_.end()) return it->second;
            throw ModelError("unknown label \"" + e.name + "\"", e.pos);
        }
        case ExprKind::Unary:
            return ~eval_set(*e.args[0]);
        case ExprKind::Ternary: {
            StateSet c = eval_set(*e.args[0]);
            return (c & eval_set(*e.args[1])) | (~c & eval_set(*e.args[2]));
        }
        case ExprKind::Binary: {
            StateSet a = eval_set(*e.args[0]);
            StateSet b = eval_set(*e.args[1]);
            switch (e.op) {
                case Op::And:
                    return a & b;
                case Op::Or:
                    return a | b;
                case Op::Implies:
                    return ~a | b;
                case Op::Iff:
                case Op::Eq:
                    return (a & b) | (~a & ~b);
                case Op::Ne:
                    return (a & ~b) | (~a & b);
                default:
                    break;
            }
            break;
        }
        default:
            break;
    }
    throw ModelError("labels cannot be used in '" + to_string(e) + "'", e.pos);
}

std::int64_t PropertyEvaluator::bound_value(const PathFormula& path, const Bindings& bindings) const {
    ResolveOptions opts;
    opts.parameters = bindings;
    ExprPtr b = resolve_expression(model_ ? *model_ : empty_model(), path.bound, opts);
    if (b->kind != ExprKind::Literal || b->type != ValueType::Int)
        throw ModelError("step bound '" + to_string(*path.bound) + "' is not an integer constant", path.bound->pos);
    if (b->value.as_int() < 0) throw ModelError("step bound must be non-negative", path.bound->pos);
    return b->value.as_int();
}

ValueVector PropertyEvaluator::query_values(const Query& query, const Bindings& bindings) const {
    StateSet target = state_set(query.path.target, bindings);
    if (query.reward) {
        int structure = -1;
        if (query.reward_structure.empty()) {
            if (mdp_.reward_names().size() != 1)
                throw ModelError("the reward structure must be named (the model has " +
                                 std::to_string(mdp_.reward_names().size()) + ")");
            structure = 0;
        } else {
            auto r = mdp_.find_reward(query.reward_structure);
            if (!r) throw ModelError("unknown reward structure \"" + query.reward_structure + "\"");
            structure = *r;
        }
        return expected_reward(mdp_, structure, target, query.mode, options_);
    }
    switch (query.path.kind) {
        case PathKind::Eventually:
            return reach_probability(mdp_, target, query.mode, options_);
        case PathKind::BoundedEventually:
            return bounded_reach_probability(mdp_, target, bound_value(query.path, bindings), query.mode, options_);
        case PathKind::Globally:
            return invariant_probability(mdp_, target, query.mode, options_);
    }
    return {};
}

double PropertyEvaluator::aggregate(const PropertyAst& property, const ValueVector& values,
                                    const StateSet* filter) const {
    if (!filter) return values[mdp_.initial()];
    auto states = filter->indices();
    if (states.empty()) throw ModelError("filter matches no states", property.pos);
    switch (*property.filter) {
        case FilterAggregate::Min: {
            double v = std::numeric_limits<double>::infinity();
            for (auto s : states) v = std::min(v, values[s]);
            return v;
        }
        case FilterAggregate::Max: {
            double v = -std::numeric_limits<double>::infinity();
            for (auto s : states) v = std::max(v, values[s]);
            return v;
        }
        case FilterAggregate::Avg: {
            double sum = 0;
            for (auto s : states) sum += values[s];
            return sum / static_cast<double>(states.size());
        }
    }
    return 0;
}

CheckResult PropertyEvaluator::evaluate(const PropertyAst& property, const Bindings& bindings) const {
    CheckResult r;
    std::optional<StateSet> filter;
    if (property.filter) {
        filter = state_set(property.filter_states, bindings);
        if (filter->empty()) throw ModelError("filter matches no states", property.pos);
        r.kind = CheckResult::Kind::Filter;
    }
    ValueVector values = query_values(property.query, bindings);
    r.value = aggregate(property, values, filter ? &*filter : nullptr);
    return r;
}

CheckResult PropertyEvaluator::run_experiment(const PropertyAst& property, const std::string& parameter,
                                              std::int64_t from, std::int64_t to, std::int64_t step,
                                              const Bindings& bindings) const {
    if (from > to || step < 1) throw ModelError("experiment range for " + parameter + " is empty");
    CheckResult r;
    r.kind = CheckResult::Kind::Series;
    r.parameter = parameter;

    const Query& q = property.query;
    std::set<std::string> elsewhere;
    collect_identifiers(*q.path.target, elsewhere);
    if (property.filter_states) collect_identifiers(*property.filter_states, elsewhere);
    const bool sweep = !q.reward && q.path.kind == PathKind::BoundedEventually &&
                       q.path.bound->kind == ExprKind::Identifier && q.path.bound->name == parameter &&
                       !elsewhere.count(parameter) && from >= 0;
    if (!sweep) {
        for (std::int64_t v = from; v <= to; v += step) {
            Bindings b = bindings;
            b[parameter] = v;
            r.series.push_back({v, evaluate(property, b).value});
        }
        return r;
    }

    // the parameter only bounds the path: one sweep yields every point
    StateSet target = state_set(q.path.target, bindings);
    std::optional<StateSet> filter;
    if (property.filter) {
        filter = state_set(property.filter_states, bindings);
        if (filter->empty()) throw ModelError("filter matches no states", property.pos);
    }
    bounded_reach_sweep(mdp_, target, to, q.mode, options_, [&](std::int64_t k, const ValueVector& x) {
        if (k >= from && (k - from) % step == 0)
            r.series.push_back({k, aggregate(property, x, filter ? &*filter : nullptr)});
    });
    return r;
}

std::set<std::string> PropertyEvaluator::free_parameters(const PropertyAst& property) const {
    std::set<std::string> ids;
    collect_identifiers(*property.query.path.target, ids);
    if (property.query.path.bound) collect_identifiers(*property.query.path.bound, ids);
    if (property.filter_states) collect_identifiers(*property.filter_states, ids);
    std::set<std::string> out;
    for (const auto& id : ids) {
        if (model_) {
            if (model_->constants.count(id) || model_->formulas.count(id) || model_->find_variable(id) ||
                model_->features.find(id))
                continue;
        }
        out.insert(id);
    }
    return out;
}

CheckResult evaluate_property(const CompiledMdp& mdp, const PropertyAst& property, const Bindings& bindings,
                              const TypedModel* model, const CheckerOptions& options) {
    return PropertyEvaluator(mdp, model, options).evaluate(property, bindings);
}

CheckResult run_experiment(const CompiledMdp& mdp, const PropertyAst& property, const std::string& parameter,
                           std::int64_t from, std::int64_t to, std::int64_t step, const TypedModel* model,
                           const CheckerOptions& options) {
    return PropertyEvaluator(mdp, model, options).run_experiment(property, parameter, from, to, step);
}

}  // namespace featmc
