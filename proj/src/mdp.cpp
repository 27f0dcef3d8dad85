#include "featmc/mdp.hpp"

#include <algorithm>

#include "featmc/errors.hpp"

namespace featmc {

const std::string& CompiledMdp::action_name(int action) const {
    static const std::string kUnlabeled;
    return action < 0 ? kUnlabeled : actions_.at(static_cast<std::size_t>(action));
}

std::string CompiledMdp::describe_state(std::size_t s) const {
    if (!state_names_.empty() && !state_names_[s].empty()) return state_names_[s];
    if (variable_names_.empty()) return std::to_string(s);
    std::string out;
    const std::int32_t* v = valuation(s);
    for (std::size_t i = 0; i < variable_names_.size(); ++i) {
        if (i) out += ", ";
        out += variable_names_[i] + "=" + std::to_string(v[i]);
    }
    if (features_.size() > 1) out += " " + features_.describe(configurations_[s]);
    return out;
}

std::optional<int> CompiledMdp::find_reward(const std::string& name) const {
    for (std::size_t i = 0; i < reward_names_.size(); ++i)
        if (reward_names_[i] == name) return static_cast<int>(i);
    return std::nullopt;
}

const StateSet* CompiledMdp::find_label(const std::string& name) const {
    auto it = labels_.find(name);
    return it == labels_.end() ? nullptr : &it->second;
}

bool CompiledMdp::distributions_exact() const {
    for (std::size_t c = 0; c < num_choices(); ++c) {
        Rational sum;
        for (auto b = branch_begin(c); b < branch_end(c); ++b) {
            if (!(probabilities_[b] > Rational(0))) return false;
            sum += probabilities_[b];
        }
        if (sum != Rational(1)) return false;
    }
    return true;
}

std::uint32_t MdpBuilder::add_state(std::string name) {
    names_.push_back(std::move(name));
    choices_.emplace_back();
    return static_cast<std::uint32_t>(names_.size() - 1);
}

std::size_t MdpBuilder::add_choice(std::uint32_t state, std::vector<Branch> branches, const std::string& action) {
    if (state >= choices_.size()) throw ModelError("add_choice: unknown state " + std::to_string(state));
    choices_[state].push_back({action, std::move(branches), {}});
    return choices_[state].size() - 1;
}

void MdpBuilder::note_reward(const std::string& structure) {
    if (std::find(reward_order_.begin(), reward_order_.end(), structure) == reward_order_.end())
        reward_order_.push_back(structure);
}

void MdpBuilder::set_state_reward(const std::string& structure, std::uint32_t state, Rational value) {
    note_reward(structure);
    state_rewards_[structure][state] = value;
}

void MdpBuilder::set_transition_reward(const std::string& structure, std::uint32_t state, std::size_t choice,
                                       Rational value) {
    note_reward(structure);
    choices_.at(state).at(choice).rewards[structure] = value;
}

void MdpBuilder::add_label(const std::string& name, const std::vector<std::uint32_t>& states) {
    auto& l = labels_[name];
    l.insert(l.end(), states.begin(), states.end());
}

CompiledMdp MdpBuilder::build(std::uint32_t initial) const {
    const std::size_t n = names_.size();
    if (initial >= n) throw ModelError("initial state " + std::to_string(initial) + " does not exist");
    CompiledMdp m;
    m.initial_ = initial;
    m.state_names_ = names_;
    m.configurations_.assign(n, Configuration());
    m.features_ = FeatureModel::from_groups("root", {});
    m.reward_names_ = reward_order_;
    m.state_rewards_.assign(reward_order_.size(), std::vector<Rational>(n));
    m.transition_rewards_.assign(reward_order_.size(), {});

    for (std::size_t r = 0; r < reward_order_.size(); ++r) {
        auto it = state_rewards_.find(reward_order_[r]);
        if (it == state_rewards_.end()) continue;
        for (auto [s, v] : it->second) {
            if (s >= n) throw ModelError("state reward on unknown state " + std::to_string(s));
            if (v.is_negative()) throw ModelError("negative state reward");
            m.state_rewards_[r][s] = v;
        }
    }

    for (std::size_t s = 0; s < n; ++s) {
        if (choices_[s].empty()) throw ModelError("deadlock: state " + m.describe_state(s) + " has no choices");
        for (const auto& c : choices_[s]) {
            int action = -1;
            if (!c.action.empty()) {
                auto it = std::find(m.actions_.begin(), m.actions_.end(), c.action);
                if (it == m.actions_.end()) it = m.actions_.insert(m.actions_.end(), c.action);
                action = static_cast<int>(it - m.actions_.begin());
            }
            std::map<std::uint32_t, Rational> merged;
            Rational sum;
            for (const auto& b : c.branches) {
                if (b.target >= n) throw ModelError("branch to unknown state " + std::to_string(b.target));
                if (b.probability.is_negative()) throw ModelError("negative probability");
                sum += b.probability;
                if (!b.probability.is_zero()) merged[b.target] += b.probability;
            }
            if (sum != Rational(1))
                throw ModelError("probabilities of a choice in state " + m.describe_state(s) + " sum to " +
                                 sum.to_string());
            for (auto& [t, p] : merged) {
                m.targets_.push_back(t);
                m.probabilities_.push_back(p);
                m.probability_values_.push_back(p.to_double());
            }
            m.branch_offsets_.push_back(static_cast<std::uint32_t>(m.targets_.size()));
            m.choice_actions_.push_back(action);
            for (std::size_t r = 0; r < reward_order_.size(); ++r) {
                auto it = c.rewards.find(reward_order_[r]);
                Rational v = it == c.rewards.end() ? Rational() : it->second;
                if (v.is_negative()) throw ModelError("negative transition reward");
                m.transition_rewards_[r].push_back(v);
            }
        }
        m.choice_offsets_.push_back(static_cast<std::uint32_t>(m.branch_offsets_.size() - 1));
    }

    for (const auto& [name, states] : labels_) {
        StateSet set(n);
        for (auto s : states) {
            if (s >= n) throw ModelError("label \"" + name + "\" names unknown state " + std::to_string(s));
            set.set(s);
        }
        m.labels_[name] = std::move(set);
    }
    return m;
}

}  // namespace featmc
