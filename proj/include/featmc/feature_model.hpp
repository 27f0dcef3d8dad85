#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace featmc {

/// Set of features as a bit-vector keyed by feature index (at most 64 features).
class FeatureSet {
  public:
    static constexpr int kMaxFeatures = 64;

    constexpr FeatureSet() = default;
    constexpr explicit FeatureSet(std::uint64_t bits) : bits_(bits) {}

    std::uint64_t bits() const { return bits_; }
    bool contains(int feature) const { return (bits_ >> feature) & 1u; }
    bool empty() const { return bits_ == 0; }
    int count() const { return __builtin_popcountll(bits_); }

    FeatureSet with(int feature) const { return FeatureSet(bits_ | (std::uint64_t{1} << feature)); }
    FeatureSet without(int feature) const { return FeatureSet(bits_ & ~(std::uint64_t{1} << feature)); }

    friend FeatureSet operator|(FeatureSet a, FeatureSet b) { return FeatureSet(a.bits_ | b.bits_); }
    friend FeatureSet operator&(FeatureSet a, FeatureSet b) { return FeatureSet(a.bits_ & b.bits_); }
    friend FeatureSet operator-(FeatureSet a, FeatureSet b) { return FeatureSet(a.bits_ & ~b.bits_); }
    friend bool operator==(FeatureSet, FeatureSet) = default;

  private:
    std::uint64_t bits_ = 0;
};

/// The active features of one product.
using Configuration = FeatureSet;

enum class GroupKind { None, AllOf, OneOf };

/// Propositional formula over `active(f)` atoms.
struct FeatureFormula {
    enum class Kind { Constant, Atom, Not, And, Or, Implies, Iff };

    Kind kind = Kind::Constant;
    bool value = true;
    int feature = -1;
    std::vector<FeatureFormula> args;

    static FeatureFormula constant(bool v) { return {Kind::Constant, v, -1, {}}; }
    static FeatureFormula atom(int f) { return {Kind::Atom, false, f, {}}; }
    static FeatureFormula make(Kind k, std::vector<FeatureFormula> args) { return {k, false, -1, std::move(args)}; }

    bool evaluate(Configuration config) const;
    void collect_features(std::vector<int>& out) const;
};

struct FeatureConstraint {
    FeatureFormula formula;
    std::string description;
};

struct FeatureNode {
    std::string name;
    int parent = -1;
    GroupKind group = GroupKind::None;
    std::vector<int> children;
};

/**
 * Feature tree with all-of / one-of groups and cross-tree constraints.
 *
 * Construction validates the tree shape: exactly one root, every other
 * feature has exactly one parent, no cycles, and every constraint only
 * references declared features. Immutable afterwards.
 */
class FeatureModel {
  public:
    FeatureModel() = default;
    FeatureModel(std::vector<FeatureNode> nodes, std::vector<FeatureConstraint> constraints,
                 std::optional<FeatureConstraint> initial_constraint = std::nullopt);

    /// Builds a model from parent -> (group, children) declarations; children
    /// that are never declared as parents become leaves.
    struct GroupDecl {
        std::string parent;
        GroupKind kind;
        std::vector<std::string> children;
    };
    static FeatureModel from_groups(const std::string& root, const std::vector<GroupDecl>& groups,
                                    std::vector<FeatureConstraint> constraints = {},
                                    std::optional<FeatureConstraint> initial_constraint = std::nullopt);

    int size() const { return static_cast<int>(nodes_.size()); }
    int root() const { return root_; }
    const FeatureNode& node(int f) const { return nodes_.at(static_cast<std::size_t>(f)); }
    const std::string& name(int f) const { return node(f).name; }
    bool is_leaf(int f) const { return node(f).children.empty(); }
    std::optional<int> find(std::string_view name) const;
    /// Throws ModelError("unknown feature ...") if absent.
    int index_of(std::string_view name) const;

    const std::vector<FeatureConstraint>& constraints() const { return constraints_; }
    const std::optional<FeatureConstraint>& initial_constraint() const { return initial_constraint_; }

    FeatureSet make_set(const std::vector<std::string>& names) const;
    FeatureSet all_features() const;

    /// Returns a description of the first violated rule, or nullopt if valid.
    std::optional<std::string> find_violation(Configuration config) const;
    bool is_valid(Configuration config) const { return !find_violation(config).has_value(); }

    /// All valid configurations, ascending by bit-vector value.
    std::vector<Configuration> enumerate() const;

    /// The unique valid configuration satisfying the initial constraint.
    Configuration initial_configuration() const;

    /// "{low,search}" using leaf names only, or all names when leaves_only is false.
    std::string describe(FeatureSet set, bool leaves_only = true) const;

  private:
    std::vector<FeatureNode> nodes_;
    int root_ = -1;
    std::vector<FeatureConstraint> constraints_;
    std::optional<FeatureConstraint> initial_constraint_;
};

bool validate_configuration(const FeatureModel& fm, Configuration config);
std::vector<Configuration> enumerate_configurations(const FeatureModel& fm);

/// config ∪ activate \ deactivate; throws ModelError naming the violated rule
/// if the result is not a valid configuration.
Configuration apply_switch(const FeatureModel& fm, Configuration config, FeatureSet activate, FeatureSet deactivate);

}  // namespace featmc

template <>
struct std::hash<featmc::FeatureSet> {
    std::size_t operator()(featmc::FeatureSet s) const noexcept { return std::hash<std::uint64_t>{}(s.bits()); }
};
