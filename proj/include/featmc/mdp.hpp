#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "featmc/feature_model.hpp"
#include "featmc/rational.hpp"
#include "featmc/state_set.hpp"

namespace featmc {

/**
 * Explicit MDP in compressed sparse row form.
 *
 * State s owns choices [choice_begin(s), choice_end(s)); choice c owns
 * branches [branch_begin(c), branch_end(c)). Branch targets within a choice
 * are strictly increasing. Probabilities are exact; a double copy is kept
 * for the numerical checker.
 */
class CompiledMdp {
  public:
    std::size_t num_states() const { return choice_offsets_.size() - 1; }
    std::size_t num_choices() const { return branch_offsets_.size() - 1; }
    std::size_t num_transitions() const { return targets_.size(); }
    std::uint32_t initial() const { return initial_; }

    std::uint32_t choice_begin(std::size_t s) const { return choice_offsets_[s]; }
    std::uint32_t choice_end(std::size_t s) const { return choice_offsets_[s + 1]; }
    std::uint32_t branch_begin(std::size_t c) const { return branch_offsets_[c]; }
    std::uint32_t branch_end(std::size_t c) const { return branch_offsets_[c + 1]; }
    std::uint32_t target(std::size_t b) const { return targets_[b]; }
    const Rational& probability(std::size_t b) const { return probabilities_[b]; }
    double probability_value(std::size_t b) const { return probability_values_[b]; }
    /// Action index of a choice; -1 for unlabeled.
    int choice_action(std::size_t c) const { return choice_actions_[c]; }
    const std::string& action_name(int action) const;
    const std::vector<std::string>& actions() const { return actions_; }

    // State contents. Hand-built MDPs have no variables and a trivial configuration.
    const std::vector<std::string>& variable_names() const { return variable_names_; }
    std::size_t num_variables() const { return variable_names_.size(); }
    const std::int32_t* valuation(std::size_t s) const { return valuations_.data() + s * variable_names_.size(); }
    Configuration configuration(std::size_t s) const { return configurations_[s]; }
    const FeatureModel& features() const { return features_; }
    /// "s=2, water_visib=5 {high,search}" or the builder-assigned name.
    std::string describe_state(std::size_t s) const;

    // Rewards
    const std::vector<std::string>& reward_names() const { return reward_names_; }
    std::optional<int> find_reward(const std::string& name) const;
    const Rational& state_reward(int structure, std::size_t s) const { return state_rewards_[structure][s]; }
    const Rational& transition_reward(int structure, std::size_t c) const { return transition_rewards_[structure][c]; }

    // Labels
    const std::map<std::string, StateSet>& labels() const { return labels_; }
    const StateSet* find_label(const std::string& name) const;

    /// Per-state, per-choice check that branch probabilities sum to exactly 1.
    bool distributions_exact() const;

  private:
    friend class MdpBuilder;
    friend class MdpAssembler;

    std::vector<std::uint32_t> choice_offsets_{0};
    std::vector<std::uint32_t> branch_offsets_{0};
    std::vector<int> choice_actions_;
    std::vector<std::uint32_t> targets_;
    std::vector<Rational> probabilities_;
    std::vector<double> probability_values_;
    std::vector<std::string> actions_;
    std::uint32_t initial_ = 0;

    std::vector<std::string> variable_names_;
    std::vector<std::int32_t> valuations_;
    std::vector<Configuration> configurations_;
    std::vector<std::string> state_names_;
    FeatureModel features_;

    std::vector<std::string> reward_names_;
    std::vector<std::vector<Rational>> state_rewards_;
    std::vector<std::vector<Rational>> transition_rewards_;
    std::map<std::string, StateSet> labels_;
};

/// Direct construction of small MDPs (tests, oracles, induced chains).
class MdpBuilder {
  public:
    struct Branch {
        std::uint32_t target;
        Rational probability;
    };

    std::uint32_t add_state(std::string name = {});
    /// Returns the choice's index among the state's choices.
    std::size_t add_choice(std::uint32_t state, std::vector<Branch> branches, const std::string& action = {});
    void set_state_reward(const std::string& structure, std::uint32_t state, Rational value);
    void set_transition_reward(const std::string& structure, std::uint32_t state, std::size_t choice, Rational value);
    void add_label(const std::string& name, const std::vector<std::uint32_t>& states);

    /// Validates (every state has a choice, distributions sum to 1, targets
    /// exist, rewards non-negative) and produces the MDP.
    CompiledMdp build(std::uint32_t initial = 0) const;

  private:
    struct PendingChoice {
        std::string action;
        std::vector<Branch> branches;
        std::map<std::string, Rational> rewards;
    };
    std::vector<std::string> names_;
    std::vector<std::vector<PendingChoice>> choices_;
    std::map<std::string, std::map<std::uint32_t, Rational>> state_rewards_;
    std::map<std::string, std::vector<std::uint32_t>> labels_;
    std::vector<std::string> reward_order_;
    void note_reward(const std::string& structure);
};

}  // namespace featmc
