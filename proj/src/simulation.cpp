#include "featmc/simulation.hpp"

#include <cmath>
#include <thread>

#include "featmc/checker.hpp"
#include "featmc/errors.hpp"

namespace featmc {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

ExactRational exact(const Rational& r) {
    return ExactRational(r.numerator()) / ExactRational(r.denominator());
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) : key_(splitmix64(seed) ^ splitmix64(~stream)) {}

std::uint64_t CounterRng::next() {
    return splitmix64(key_ + 0x632be59bd9b4e019ull * ++counter_);
}

double CounterRng::uniform() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::vector<ExactRational> exhaustive_bounded(const CompiledMdp& mdp, const StateSet& target, std::int64_t k,
                                              OptMode mode, std::size_t node_budget) {
    if (k < 0) throw ModelError("step bound must be non-negative");
    const std::size_t n = mdp.num_states();
    const std::size_t depth = static_cast<std::size_t>(k) + 1;
    std::vector<std::optional<ExactRational>> memo(n * depth);
    std::size_t nodes = 0;

    std::function<const ExactRational&(std::uint32_t, std::size_t)> value = [&](std::uint32_t s,
                                                                               std::size_t left) -> const ExactRational& {
        auto& slot = memo[s * depth + left];
        if (slot) return *slot;
        if (++nodes > node_budget)
            throw ModelError("exhaustive path expansion exceeds the budget of " + std::to_string(node_budget) + " nodes");
        if (target.test(s)) {
            slot = ExactRational(1);
        } else if (left == 0) {
            slot = ExactRational(0);
        } else {
            std::optional<ExactRational> best;
            for (auto c = mdp.choice_begin(s); c < mdp.choice_end(s); ++c) {
                ExactRational v(0);
                for (auto b = mdp.branch_begin(c); b < mdp.branch_end(c); ++b)
                    v += exact(mdp.probability(b)) * value(mdp.target(b), left - 1);
                if (!best || (mode == OptMode::Min ? v < *best : v > *best)) best = v;
            }
            slot = *best;
        }
        return *slot;
    };

    std::vector<ExactRational> out;
    out.reserve(n);
    for (std::uint32_t s = 0; s < n; ++s) out.push_back(value(s, static_cast<std::size_t>(k)));
    return out;
}

Policy Policy::first(const CompiledMdp& mdp) {
    return fixed(std::vector<std::uint32_t>(mdp.num_states(), 0));
}

Policy Policy::last(const CompiledMdp& mdp) {
    std::vector<std::uint32_t> choice(mdp.num_states());
    for (std::size_t s = 0; s < mdp.num_states(); ++s) choice[s] = mdp.choice_end(s) - mdp.choice_begin(s) - 1;
    return fixed(std::move(choice));
}

Policy Policy::random(const CompiledMdp& mdp, std::uint64_t seed) {
    std::vector<std::uint32_t> choice(mdp.num_states());
    for (std::size_t s = 0; s < mdp.num_states(); ++s) {
        auto count = mdp.choice_end(s) - mdp.choice_begin(s);
        choice[s] = static_cast<std::uint32_t>(CounterRng(seed, s).next() % count);
    }
    return fixed(std::move(choice));
}

namespace {

void check_policy(const CompiledMdp& mdp, const Policy& policy) {
    if (policy.kind != Policy::Kind::FixedIndex) return;
    if (policy.choice.size() != mdp.num_states())
        throw ModelError("policy covers " + std::to_string(policy.choice.size()) + " states, the MDP has " +
                         std::to_string(mdp.num_states()));
    for (std::size_t s = 0; s < mdp.num_states(); ++s)
        if (policy.choice[s] >= mdp.choice_end(s) - mdp.choice_begin(s))
            throw ModelError("policy picks choice " + std::to_string(policy.choice[s]) + " in state " +
                             mdp.describe_state(s) + " which has only " +
                             std::to_string(mdp.choice_end(s) - mdp.choice_begin(s)));
}

}  // namespace

CompiledMdp build_induced_chain(const CompiledMdp& mdp, const Policy& policy) {
    check_policy(mdp, policy);
    MdpBuilder b;
    const std::size_t n = mdp.num_states();
    for (std::size_t s = 0; s < n; ++s) b.add_state(mdp.describe_state(s));
    for (std::size_t s = 0; s < n; ++s) {
        const auto first = mdp.choice_begin(s), count = mdp.choice_end(s) - first;
        std::vector<MdpBuilder::Branch> branches;
        std::vector<Rational> reward(mdp.reward_names().size());
        auto take = [&](std::uint32_t c, const Rational& weight) {
            for (auto br = mdp.branch_begin(c); br < mdp.branch_end(c); ++br)
                branches.push_back({mdp.target(br), mdp.probability(br) * weight});
            for (std::size_t r = 0; r < reward.size(); ++r)
                reward[r] += mdp.transition_reward(static_cast<int>(r), c) * weight;
        };
        std::string action;
        if (policy.kind == Policy::Kind::FixedIndex) {
            take(first + policy.choice[s], Rational(1));
            action = mdp.action_name(mdp.choice_action(first + policy.choice[s]));
        } else {
            for (std::uint32_t c = first; c < first + count; ++c) take(c, Rational(1, count));
        }
        auto idx = b.add_choice(static_cast<std::uint32_t>(s), std::move(branches), action);
        for (std::size_t r = 0; r < reward.size(); ++r) {
            b.set_transition_reward(mdp.reward_names()[r], static_cast<std::uint32_t>(s), idx, reward[r]);
            b.set_state_reward(mdp.reward_names()[r], static_cast<std::uint32_t>(s),
                               mdp.state_reward(static_cast<int>(r), s));
        }
    }
    for (const auto& [name, set] : mdp.labels()) {
        std::vector<std::uint32_t> states;
        for (auto s : set.indices()) states.push_back(static_cast<std::uint32_t>(s));
        b.add_label(name, states);
    }
    return b.build(mdp.initial());
}

SimEstimate simulate_paths(const CompiledMdp& mdp, const Policy& policy, const SimObjective& objective,
                           const SimOptions& options) {
    if (options.trials < 1) throw ModelError("at least one trial is required");
    check_policy(mdp, policy);
    const bool reward = objective.kind == SimObjective::Kind::CumulatedReward;
    if (reward) {
        if (objective.structure < 0 || static_cast<std::size_t>(objective.structure) >= mdp.reward_names().size())
            throw ModelError("unknown reward structure");
        CompiledMdp chain = build_induced_chain(mdp, policy);
        if (!qualitative_reach(chain, objective.target, OptMode::Min).one.test(chain.initial()))
            throw ModelError("reward objective needs a policy that reaches the target almost surely");
    }

    std::vector<double> state_reward, trans_reward;
    if (reward) {
        for (std::size_t s = 0; s < mdp.num_states(); ++s)
            state_reward.push_back(mdp.state_reward(objective.structure, s).to_double());
        for (std::size_t c = 0; c < mdp.num_choices(); ++c)
            trans_reward.push_back(mdp.transition_reward(objective.structure, c).to_double());
    }

    // states that cannot reach the target under the policy decide a reach objective early
    std::vector<char> hopeless(mdp.num_states(), 0);
    if (!reward) {
        const std::size_t n = mdp.num_states();
        std::vector<std::vector<std::uint32_t>> pred(n);
        for (std::uint32_t s = 0; s < n; ++s) {
            auto first = mdp.choice_begin(s), last = mdp.choice_end(s);
            if (policy.kind == Policy::Kind::FixedIndex) last = (first += policy.choice[s]) + 1;
            for (auto c = first; c < last; ++c)
                for (auto b = mdp.branch_begin(c); b < mdp.branch_end(c); ++b) pred[mdp.target(b)].push_back(s);
        }
        std::vector<char> reaches(n, 0);
        std::vector<std::uint32_t> queue;
        for (std::uint32_t s = 0; s < n; ++s)
            if (objective.target.test(s)) reaches[s] = 1, queue.push_back(s);
        while (!queue.empty()) {
            auto t = queue.back();
            queue.pop_back();
            for (auto s : pred[t])
                if (!reaches[s]) reaches[s] = 1, queue.push_back(s);
        }
        for (std::size_t s = 0; s < n; ++s) hopeless[s] = !reaches[s];
    }

    SimEstimate est;
    est.trials = options.trials;
    est.seed = options.seed;
    est.outcomes.assign(options.trials, 0.0);
    std::vector<char> truncated(options.trials, 0);

    auto run = [&](std::size_t trial) {
        CounterRng rng(options.seed, trial);
        std::uint32_t s = mdp.initial();
        double total = 0;
        for (std::size_t step = 0;; ++step) {
            if (objective.target.test(s)) {
                est.outcomes[trial] = reward ? total : 1.0;
                return;
            }
            if (hopeless[s]) return;
            if (step == options.max_steps) break;
            const auto first = mdp.choice_begin(s), count = mdp.choice_end(s) - first;
            std::uint32_t c = policy.kind == Policy::Kind::FixedIndex
                                  ? first + policy.choice[s]
                                  : first + static_cast<std::uint32_t>(rng.next() % count);
            if (reward) total += state_reward[s] + trans_reward[c];
            double u = rng.uniform(), acc = 0;
            std::uint32_t next = mdp.target(mdp.branch_end(c) - 1);
            for (auto b = mdp.branch_begin(c); b < mdp.branch_end(c); ++b) {
                acc += mdp.probability_value(b);
                if (u < acc) {
                    next = mdp.target(b);
                    break;
                }
            }
            s = next;
        }
        truncated[trial] = 1;
        est.outcomes[trial] = reward ? total : 0.0;
    };

    const unsigned threads = std::max(1u, options.threads);
    if (threads == 1) {
        for (std::size_t t = 0; t < options.trials; ++t) run(t);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < threads; ++w)
            pool.emplace_back([&, w] {
                for (std::size_t t = w; t < options.trials; t += threads) run(t);
            });
        for (auto& th : pool) th.join();
    }

    // aggregate in trial order so the result is independent of scheduling
    double sum = 0, truncations = 0;
    for (std::size_t t = 0; t < options.trials; ++t) {
        sum += est.outcomes[t];
        truncations += truncated[t];
    }
    const double n = static_cast<double>(options.trials);
    est.estimate = sum / n;
    double sq = 0;
    for (double v : est.outcomes) sq += (v - est.estimate) * (v - est.estimate);
    est.standard_error = options.trials > 1 ? std::sqrt(sq / (n - 1) / n) : 0.0;
    est.half_width = 1.96 * est.standard_error;
    est.truncation_rate = truncations / n;
    return est;
}

}  // namespace featmc
