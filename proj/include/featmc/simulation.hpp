#pragma once

#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "featmc/mdp.hpp"
#include "featmc/model_ast.hpp"

namespace featmc {

using ExactRational = boost::multiprecision::cpp_rational;

/// Exact bounded reachability by expanding every path of length <= k.
/// Memoized on (state, remaining steps); throws ModelError once more than
/// `node_budget` nodes would be expanded.
std::vector<ExactRational> exhaustive_bounded(const CompiledMdp& mdp, const StateSet& target, std::int64_t k,
                                              OptMode mode, std::size_t node_budget = 10'000'000);

/// Resolution of nondeterminism for simulation.
struct Policy {
    enum class Kind { UniformRandom, FixedIndex };
    Kind kind = Kind::UniformRandom;
    std::vector<std::uint32_t> choice;  // FixedIndex: choice index per state

    static Policy uniform() { return {}; }
    static Policy fixed(std::vector<std::uint32_t> choice) { return {Kind::FixedIndex, std::move(choice)}; }
    static Policy first(const CompiledMdp& mdp);
    static Policy last(const CompiledMdp& mdp);
    /// Fixed policy with a pseudorandom choice per state derived from `seed`.
    static Policy random(const CompiledMdp& mdp, std::uint64_t seed);
};

/// Markov chain (one choice per state) induced by the policy; uniform
/// policies mix all choices with equal weight. Rewards and labels carry over.
CompiledMdp build_induced_chain(const CompiledMdp& mdp, const Policy& policy);

struct SimObjective {
    enum class Kind { Reach, CumulatedReward };
    Kind kind = Kind::Reach;
    StateSet target;
    int structure = -1;  // CumulatedReward

    static SimObjective reach(StateSet target) { return {Kind::Reach, std::move(target), -1}; }
    static SimObjective reward(int structure, StateSet target) {
        return {Kind::CumulatedReward, std::move(target), structure};
    }
};

struct SimOptions {
    std::size_t trials = 10'000;
    std::size_t max_steps = 10'000;
    std::uint64_t seed = 1;
    unsigned threads = 1;
};

struct SimEstimate {
    double estimate = 0;
    std::size_t trials = 0;
    double standard_error = 0;
    double half_width = 0;  // 95% confidence, 1.96 standard errors
    std::uint64_t seed = 0;
    double truncation_rate = 0;
    std::vector<double> outcomes;  // per trial, in trial order
};

/**
 * Monte-Carlo rollouts from the initial state. Trial i draws from a stream
 * keyed by (seed, i) only, so the estimate is independent of the thread count.
 * Reward objectives require the policy to reach the target almost surely.
 */
SimEstimate simulate_paths(const CompiledMdp& mdp, const Policy& policy, const SimObjective& objective,
                           const SimOptions& options = {});

/// Counter-based generator: splitmix64 over (key, counter).
class CounterRng {
  public:
    CounterRng(std::uint64_t seed, std::uint64_t stream);
    std::uint64_t next();
    /// Uniform in [0, 1) with 53 random bits.
    double uniform();

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace featmc
