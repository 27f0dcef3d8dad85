#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "featmc/mdp.hpp"
#include "featmc/typed_model.hpp"

namespace featmc {

/// A state of the composed system before it is numbered.
struct StateValue {
    std::vector<std::int32_t> variables;
    Configuration config;

    friend bool operator==(const StateValue&, const StateValue&) = default;
};

struct JointBranch {
    Rational probability;
    StateValue target;
};

/// One synchronized choice: a tuple of enabled commands, one per
/// participating component.
struct JointChoice {
    int action = -1;
    std::vector<const TypedCommand*> commands;
    FeatureSet activate;
    FeatureSet deactivate;
    std::vector<JointBranch> branches;  // unmerged, in product order
};

struct CompileOptions {
    /// Maximum number of reachable states; FEATMC_STATE_CAP overrides the default.
    std::size_t state_cap = default_state_cap();

    static std::size_t default_state_cap();
};

/**
 * Successor computation for a typed model. Exposed separately from compile()
 * so that the synchronization result of a single state can be inspected.
 */
class StateSpaceBuilder {
  public:
    explicit StateSpaceBuilder(const TypedModel& model);

    StateValue initial_state() const;

    /// Choices in deterministic order: actions in declaration order (for
    /// each, the Cartesian product over components in declaration order),
    /// then unlabeled commands. Throws ModelError on out-of-range updates
    /// and invalid feature switches.
    std::vector<JointChoice> joint_choices(const StateValue& state) const;

    std::string describe(const StateValue& state) const;
    const TypedModel& model() const { return model_; }

  private:
    void expand(const StateValue& state, int action, const std::vector<std::vector<const TypedCommand*>>& enabled,
                std::vector<JointChoice>& out) const;

    const TypedModel& model_;
};

/// Breadth-first construction of the reachable MDP.
CompiledMdp compile(const TypedModel& model, const CompileOptions& options = {});

/// GraphViz rendering: states, intermediate choice nodes, probability edges.
std::string export_dot(const CompiledMdp& mdp);

/// `source,choice,action,target,probability` rows.
std::string export_transitions_csv(const CompiledMdp& mdp);

/// key=value statistics: states, choices, transitions, per-label counts.
std::string export_stats(const CompiledMdp& mdp);

}  // namespace featmc
