#include "featmc/feature_model.hpp"

#include <algorithm>
#include <map>

#include "featmc/errors.hpp"

namespace featmc {

bool FeatureFormula::evaluate(Configuration config) const {
    switch (kind) {
        case Kind::Constant:
            return value;
        case Kind::Atom:
            return config.contains(feature);
        case Kind::Not:
            return !args[0].evaluate(config);
        case Kind::And:
            return std::all_of(args.begin(), args.end(), [&](const auto& a) { return a.evaluate(config); });
        case Kind::Or:
            return std::any_of(args.begin(), args.end(), [&](const auto& a) { return a.evaluate(config); });
        case Kind::Implies:
            return !args[0].evaluate(config) || args[1].evaluate(config);
        case Kind::Iff:
            return args[0].evaluate(config) == args[1].evaluate(config);
    }
    return false;
}

void FeatureFormula::collect_features(std::vector<int>& out) const {
    if (kind == Kind::Atom) out.push_back(feature);
    for (const auto& a : args) a.collect_features(out);
}

FeatureModel::FeatureModel(std::vector<FeatureNode> nodes, std::vector<FeatureConstraint> constraints,
                           std::optional<FeatureConstraint> initial_constraint)
    : nodes_(std::move(nodes)), constraints_(std::move(constraints)), initial_constraint_(std::move(initial_constraint)) {
    if (nodes_.empty()) throw ModelError("feature model has no features");
    if (nodes_.size() > static_cast<std::size_t>(FeatureSet::kMaxFeatures))
        throw ModelError("feature model has more than 64 features");

    std::map<std::string, int> seen;
    for (int f = 0; f < size(); ++f) {
        if (!seen.emplace(nodes_[f].name, f).second) throw ModelError("duplicate feature '" + nodes_[f].name + "'");
        if (nodes_[f].parent < 0) {
            if (root_ >= 0)
                throw ModelError("feature model has more than one root ('" + nodes_[root_].name + "' and '" +
                                 nodes_[f].name + "')");
            root_ = f;
        } else if (nodes_[f].parent >= size()) {
            throw ModelError("feature '" + nodes_[f].name + "' has an invalid parent");
        }
    }
    if (root_ < 0) throw ModelError("feature model has no root");

    for (int f = 0; f < size(); ++f) {
        for (int c : nodes_[f].children) {
            if (c < 0 || c >= size() || nodes_[c].parent != f)
                throw ModelError("feature tree edge " + nodes_[f].name + " -> child " + std::to_string(c) +
                                 " is inconsistent");
        }
        if (nodes_[f].parent >= 0) {
            const auto& siblings = nodes_[nodes_[f].parent].children;
            if (std::count(siblings.begin(), siblings.end(), f) != 1)
                throw ModelError("feature '" + nodes_[f].name + "' must appear exactly once below its parent");
        }
        if (nodes_[f].children.empty() != (nodes_[f].group == GroupKind::None))
            throw ModelError("feature '" + nodes_[f].name + "' has a group kind inconsistent with its children");
    }

    // every feature must reach the root without revisiting a node
    for (int f = 0; f < size(); ++f) {
        int steps = 0;
        for (int cur = f; nodes_[cur].parent >= 0; cur = nodes_[cur].parent) {
            if (++steps > size()) throw ModelError("feature tree contains a cycle through '" + nodes_[f].name + "'");
        }
    }

    auto check_refs = [&](const FeatureConstraint& c) {
        std::vector<int> refs;
        c.formula.collect_features(refs);
        for (int r : refs)
            if (r < 0 || r >= size()) throw ModelError("constraint '" + c.description + "' references an unknown feature");
    };
    for (const auto& c : constraints_) check_refs(c);
    if (initial_constraint_) check_refs(*initial_constraint_);
}

FeatureModel FeatureModel::from_groups(const std::string& root, const std::vector<GroupDecl>& groups,
                                       std::vector<FeatureConstraint> constraints,
                                       std::optional<FeatureConstraint> initial_constraint) {
    std::vector<FeatureNode> nodes;
    std::map<std::string, int> index;
    auto intern = [&](const std::string& name) {
        auto [it, inserted] = index.emplace(name, static_cast<int>(nodes.size()));
        if (inserted) nodes.push_back(FeatureNode{name, -1, GroupKind::None, {}});
        return it->second;
    };
    intern(root);
    for (const auto& g : groups) {
        int p = intern(g.parent);
        if (!nodes[p].children.empty()) throw ModelError("feature '" + g.parent + "' declares more than one group");
        nodes[p].group = g.kind;
        for (const auto& c : g.children) {
            int ci = intern(c);
            if (nodes[ci].parent >= 0) throw ModelError("feature '" + c + "' has more than one parent");
            if (ci == 0) throw ModelError("the root feature cannot be a child");
            nodes[ci].parent = p;
            nodes[p].children.push_back(ci);
        }
    }
    return FeatureModel(std::move(nodes), std::move(constraints), std::move(initial_constraint));
}

std::optional<int> FeatureModel::find(std::string_view name) const {
    for (int f = 0; f < size(); ++f)
        if (nodes_[f].name == name) return f;
    return std::nullopt;
}

int FeatureModel::index_of(std::string_view name) const {
    if (auto f = find(name)) return *f;
    throw ModelError("unknown feature '" + std::string(name) + "'");
}

FeatureSet FeatureModel::make_set(const std::vector<std::string>& names) const {
    FeatureSet out;
    for (const auto& n : names) out = out.with(index_of(n));
    return out;
}

FeatureSet FeatureModel::all_features() const {
    return FeatureSet(size() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << size()) - 1);
}

std::optional<std::string> FeatureModel::find_violation(Configuration config) const {
    if ((config - all_features()).bits() != 0) return "configuration references features outside the model";
    if (!config.contains(root_)) return "root feature '" + nodes_[root_].name + "' is not active";
    for (int f = 0; f < size(); ++f) {
        const auto& n = nodes_[f];
        bool active = config.contains(f);
        if (active && n.parent >= 0 && !config.contains(n.parent))
            return "feature '" + n.name + "' is active but its parent '" + nodes_[n.parent].name + "' is not";
        if (!active) continue;
        int active_children = 0;
        for (int c : n.children) active_children += config.contains(c) ? 1 : 0;
        if (n.group == GroupKind::AllOf && active_children != static_cast<int>(n.children.size()))
            return "all-of group of '" + n.name + "' requires every child to be active";
        if (n.group == GroupKind::OneOf && active_children != 1)
            return "one-of group of '" + n.name + "' requires exactly one active child (" +
                   std::to_string(active_children) + " active)";
    }
    for (const auto& c : constraints_)
        if (!c.formula.evaluate(config)) return "constraint '" + c.description + "' is violated";
    return std::nullopt;
}

std::vector<Configuration> FeatureModel::enumerate() const {
    // subtree expansions assuming the subtree's root is active
    std::function<std::vector<FeatureSet>(int)> expand = [&](int f) -> std::vector<FeatureSet> {
        const auto& n = nodes_[f];
        FeatureSet self = FeatureSet().with(f);
        if (n.group == GroupKind::None) return {self};
        if (n.group == GroupKind::OneOf) {
            std::vector<FeatureSet> out;
            for (int c : n.children)
                for (auto s : expand(c)) out.push_back(self | s);
            return out;
        }
        std::vector<FeatureSet> acc{self};
        for (int c : n.children) {
            std::vector<FeatureSet> next;
            for (auto a : acc)
                for (auto s : expand(c)) next.push_back(a | s);
            acc = std::move(next);
        }
        return acc;
    };
    std::vector<Configuration> out;
    for (auto candidate : expand(root_))
        if (is_valid(candidate)) out.push_back(candidate);
    std::sort(out.begin(), out.end(), [](auto a, auto b) { return a.bits() < b.bits(); });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Configuration FeatureModel::initial_configuration() const {
    std::vector<Configuration> matches;
    for (auto c : enumerate())
        if (!initial_constraint_ || initial_constraint_->formula.evaluate(c)) matches.push_back(c);
    if (matches.empty()) throw ModelError("no valid configuration satisfies the initial constraint");
    if (matches.size() > 1)
        throw ModelError("initial constraint is satisfied by " + std::to_string(matches.size()) +
                         " valid configurations (e.g. " + describe(matches[0]) + " and " + describe(matches[1]) +
                         "); exactly one is required");
    return matches.front();
}

std::string FeatureModel::describe(FeatureSet set, bool leaves_only) const {
    std::string out = "{";
    bool first = true;
    for (int f = 0; f < size(); ++f) {
        if (!set.contains(f) || (leaves_only && !is_leaf(f))) continue;
        if (!first) out += ",";
        out += nodes_[f].name;
        first = false;
    }
    return out + "}";
}

bool validate_configuration(const FeatureModel& fm, Configuration config) {
    return fm.is_valid(config);
}

std::vector<Configuration> enumerate_configurations(const FeatureModel& fm) {
    return fm.enumerate();
}

Configuration apply_switch(const FeatureModel& fm, Configuration config, FeatureSet activate, FeatureSet deactivate) {
    if (!(activate & deactivate).empty())
        throw ModelError("feature switch both activates and deactivates " + fm.describe(activate & deactivate, false));
    Configuration result = (config | activate) - deactivate;
    if (auto violation = fm.find_violation(result))
        throw ModelError("feature switch from " + fm.describe(config) + " yields invalid configuration " +
                         fm.describe(result) + ": " + *violation);
    return result;
}

}  // namespace featmc
