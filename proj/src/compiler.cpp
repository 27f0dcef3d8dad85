#include "featmc/compiler.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <unordered_map>

namespace featmc {

namespace {

struct StateHash {
    std::size_t operator()(const StateValue& s) const noexcept {
        std::uint64_t h = 1469598103934665603ull ^ s.config.bits();
        for (auto v : s.variables) {
            h ^= static_cast<std::uint32_t>(v);
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h ^ (h >> 29));
    }
};

/// Odometer step over a mixed-radix index; false once it wraps around.
template <typename Radix>
bool advance(std::vector<std::size_t>& index, Radix radix) {
    for (std::size_t i = index.size(); i-- > 0;) {
        if (++index[i] < radix(i)) return true;
        index[i] = 0;
    }
    return false;
}

EvalContext context(const StateValue& s) {
    return EvalContext{std::span<const std::int32_t>(s.variables), s.config};
}

}  // namespace

std::size_t CompileOptions::default_state_cap() {
    if (const char* env = std::getenv("FEATMC_STATE_CAP")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    return 10'000'000;
}

StateSpaceBuilder::StateSpaceBuilder(const TypedModel& model) : model_(model) {}

StateValue StateSpaceBuilder::initial_state() const {
    StateValue s;
    for (const auto& v : model_.variables) s.variables.push_back(v.init);
    s.config = model_.initial_configuration;
    return s;
}

std::string StateSpaceBuilder::describe(const StateValue& state) const {
    std::string out = "(";
    for (std::size_t i = 0; i < state.variables.size(); ++i) {
        if (i) out += ", ";
        out += model_.variables[i].name + "=" + std::to_string(state.variables[i]);
    }
    out += ")";
    if (model_.features.size() > 1) out += " " + model_.features.describe(state.config);
    return out;
}

std::vector<JointChoice> StateSpaceBuilder::joint_choices(const StateValue& state) const {
    std::vector<JointChoice> out;
    const EvalContext ctx = context(state);
    const std::size_t num_actions = model_.actions.size();

    for (std::size_t a = 0; a < num_actions; ++a) {
        const int action = static_cast<int>(a);
        std::vector<std::vector<const TypedCommand*>> enabled;
        bool blocked = false;
        for (const auto& comp : model_.components) {
            if (!comp.declares(action)) continue;
            std::vector<const TypedCommand*> cmds;
            for (const auto& c : comp.commands)
                if (c.action == action && evaluate_bool(*c.guard, ctx)) cmds.push_back(&c);
            if (cmds.empty()) {
                blocked = true;
                break;
            }
            enabled.push_back(std::move(cmds));
        }
        if (!blocked && !enabled.empty()) expand(state, action, enabled, out);
    }
    for (const auto& comp : model_.components) {
        for (const auto& c : comp.commands)
            if (c.action < 0 && evaluate_bool(*c.guard, ctx)) expand(state, -1, {{&c}}, out);
    }
    return out;
}

void StateSpaceBuilder::expand(const StateValue& state, int action,
                               const std::vector<std::vector<const TypedCommand*>>& enabled,
                               std::vector<JointChoice>& out) const {
    const EvalContext ctx = context(state);
    const std::size_t k = enabled.size();
    std::vector<std::size_t> pick(k, 0);
    while (true) {
        JointChoice choice;
        choice.action = action;
        for (std::size_t i = 0; i < k; ++i) choice.commands.push_back(enabled[i][pick[i]]);

        // product over the branches of the chosen commands
        std::vector<std::size_t> br(k, 0);
        while (true) {
            Rational p(1);
            StateValue next = state;
            FeatureSet activate, deactivate;
            std::vector<std::pair<const TypedAssignment*, std::int64_t>> writes;
            for (std::size_t i = 0; i < k; ++i) {
                const TypedBranch& b = choice.commands[i]->branches[br[i]];
                p *= b.probability;
                activate = activate | b.activate;
                deactivate = deactivate | b.deactivate;
                for (const auto& asg : b.assignments) writes.emplace_back(&asg, evaluate(*asg.value, ctx).as_int());
            }
            for (auto [asg, value] : writes) {
                const VariableInfo& var = model_.variables[static_cast<std::size_t>(asg->slot)];
                if (value < var.lower || value > var.upper)
                    throw ModelError("update " + var.name + "'=" + std::to_string(value) + " is outside [" +
                                         std::to_string(var.lower) + ".." + std::to_string(var.upper) +
                                         "] in state " + describe(state),
                                     asg->pos);
                next.variables[static_cast<std::size_t>(asg->slot)] = static_cast<std::int32_t>(value);
            }
            // controller switches apply after the variable updates
            try {
                next.config = apply_switch(model_.features, state.config, activate, deactivate);
            } catch (const ModelError& e) {
                const TypedCommand* ctrl = choice.commands.back();
                throw ModelError("feature switch of " + ctrl->describe() + " in state " + describe(state) + ": " +
                                     e.message(),
                                 ctrl->pos);
            }
            choice.activate = activate;
            choice.deactivate = deactivate;
            choice.branches.push_back({p, std::move(next)});

            if (!advance(br, [&](std::size_t i) { return choice.commands[i]->branches.size(); })) break;
        }
        out.push_back(std::move(choice));

        if (!advance(pick, [&](std::size_t i) { return enabled[i].size(); })) return;
    }
}

/// Fills the private representation of CompiledMdp during compilation.
class MdpAssembler {
  public:
    static CompiledMdp run(const TypedModel& model, const CompileOptions& options) {
        StateSpaceBuilder builder(model);
        CompiledMdp m;
        m.features_ = model.features;
        m.actions_ = model.actions;
        for (const auto& v : model.variables) m.variable_names_.push_back(v.name);
        for (const auto& r : model.rewards) m.reward_names_.push_back(r.name);
        m.state_rewards_.resize(model.rewards.size());
        m.transition_rewards_.resize(model.rewards.size());

        std::vector<StateValue> states;
        std::vector<std::uint32_t> parent;
        std::unordered_map<StateValue, std::uint32_t, StateHash> index;

        auto intern = [&](StateValue&& s, std::uint32_t from) {
            auto it = index.find(s);
            if (it != index.end()) return it->second;
            if (states.size() >= options.state_cap)
                throw ModelError("state space exceeds the cap of " + std::to_string(options.state_cap) +
                                 " states (set FEATMC_STATE_CAP to raise it)");
            auto id = static_cast<std::uint32_t>(states.size());
            index.emplace(s, id);
            states.push_back(std::move(s));
            parent.push_back(from);
            return id;
        };
        intern(builder.initial_state(), 0);

        for (std::uint32_t s = 0; s < states.size(); ++s) {
            const StateValue current = states[s];
            auto choices = builder.joint_choices(current);
            if (choices.empty()) throw deadlock(builder, states, parent, s);
            const EvalContext ctx{std::span<const std::int32_t>(current.variables), current.config};

            for (auto& choice : choices) {
                std::map<std::uint32_t, Rational> merged;
                Rational total;
                for (auto& b : choice.branches) {
                    total += b.probability;
                    if (b.probability.is_zero()) continue;
                    merged[intern(std::move(b.target), s)] += b.probability;
                }
                if (total != Rational(1))
                    throw ModelError("probabilities of " + choice.commands.front()->describe() + " sum to " +
                                     total.to_string() + " in state " + builder.describe(current));
                for (const auto& [t, p] : merged) {
                    m.targets_.push_back(t);
                    m.probabilities_.push_back(p);
                    m.probability_values_.push_back(p.to_double());
                }
                m.branch_offsets_.push_back(static_cast<std::uint32_t>(m.targets_.size()));
                m.choice_actions_.push_back(choice.action);

                for (std::size_t r = 0; r < model.rewards.size(); ++r) {
                    Rational sum;
                    for (const auto& item : model.rewards[r].items) {
                        if (!item.transition || item.action != choice.action) continue;
                        if (evaluate_bool(*item.guard, ctx)) sum += reward_value(item, ctx, builder, current);
                    }
                    m.transition_rewards_[r].push_back(sum);
                }
            }
            m.choice_offsets_.push_back(static_cast<std::uint32_t>(m.branch_offsets_.size() - 1));

            for (std::size_t r = 0; r < model.rewards.size(); ++r) {
                Rational sum;
                for (const auto& item : model.rewards[r].items) {
                    if (item.transition) continue;
                    if (evaluate_bool(*item.guard, ctx)) sum += reward_value(item, ctx, builder, current);
                }
                m.state_rewards_[r].push_back(sum);
            }
        }

        m.valuations_.reserve(states.size() * model.variables.size());
        for (const auto& s : states) {
            m.valuations_.insert(m.valuations_.end(), s.variables.begin(), s.variables.end());
            m.configurations_.push_back(s.config);
        }
        for (const auto& label : model.labels) {
            StateSet set(states.size());
            for (std::size_t s = 0; s < states.size(); ++s)
                if (evaluate_bool(*label.expr, context(states[s]))) set.set(s);
            m.labels_[label.name] = std::move(set);
        }
        return m;
    }

  private:
    static Rational reward_value(const TypedRewardItem& item, const EvalContext& ctx, const StateSpaceBuilder& b,
                                 const StateValue& state) {
        Value v = evaluate(*item.value, ctx);
        if (v.number.is_negative())
            throw ModelError("negative reward " + v.number.to_string() + " in state " + b.describe(state), item.pos);
        return v.number;
    }

    static ModelError deadlock(const StateSpaceBuilder& b, const std::vector<StateValue>& states,
                               const std::vector<std::uint32_t>& parent, std::uint32_t s) {
        std::vector<std::uint32_t> path{s};
        while (path.back() != 0) path.push_back(parent[path.back()]);
        std::reverse(path.begin(), path.end());
        std::string msg = "deadlock: no joint choice is enabled in state " + b.describe(states[s]) + "; reached via ";
        for (std::size_t i = 0; i < path.size(); ++i) msg += (i ? " -> " : "") + b.describe(states[path[i]]);
        return ModelError(msg);
    }
};

CompiledMdp compile(const TypedModel& model, const CompileOptions& options) {
    return MdpAssembler::run(model, options);
}

}  // namespace featmc
