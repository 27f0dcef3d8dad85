#pragma once

// Exact reference solutions for small MDPs: enumerate every memoryless
// deterministic policy, solve the induced chain with rational Gaussian
// elimination, and take the per-state optimum.

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "featmc/mdp.hpp"
#include "featmc/model_ast.hpp"

namespace oracle {

using Q = boost::multiprecision::cpp_rational;

inline Q exact(const featmc::Rational& r) {
    return Q(r.numerator()) / Q(r.denominator());
}

/// Solves A x = b in place; A must be nonsingular.
inline std::vector<Q> solve(std::vector<std::vector<Q>> a, std::vector<Q> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && a[pivot][col] == 0) ++pivot;
        if (pivot == n) throw std::runtime_error("singular system");
        std::swap(a[pivot], a[col]);
        std::swap(b[pivot], b[col]);
        for (std::size_t row = 0; row < n; ++row) {
            if (row == col || a[row][col] == 0) continue;
            Q f = a[row][col] / a[col][col];
            for (std::size_t k = col; k < n; ++k) a[row][k] -= f * a[col][k];
            b[row] -= f * b[col];
        }
    }
    for (std::size_t i = 0; i < n; ++i) b[i] /= a[i][i];
    return b;
}

/// Calls f(policy) for every memoryless deterministic policy (choice offset per state).
template <typename F>
void for_each_policy(const featmc::CompiledMdp& mdp, F f) {
    const std::size_t n = mdp.num_states();
    std::vector<std::uint32_t> policy(n, 0);
    while (true) {
        f(policy);
        std::size_t s = 0;
        for (; s < n; ++s) {
            if (++policy[s] < mdp.choice_end(s) - mdp.choice_begin(s)) break;
            policy[s] = 0;
        }
        if (s == n) return;
    }
}

/// States that reach `target` with positive probability in the policy's chain.
inline std::vector<bool> can_reach(const featmc::CompiledMdp& mdp, const std::vector<std::uint32_t>& policy,
                                   const featmc::StateSet& target) {
    const std::size_t n = mdp.num_states();
    std::vector<bool> reach(n);
    for (std::size_t s = 0; s < n; ++s) reach[s] = target.test(s);
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t s = 0; s < n; ++s) {
            if (reach[s]) continue;
            auto c = mdp.choice_begin(s) + policy[s];
            for (auto b = mdp.branch_begin(c); b < mdp.branch_end(c); ++b)
                if (reach[mdp.target(b)]) {
                    reach[s] = changed = true;
                    break;
                }
        }
    }
    return reach;
}

/// Reachability probabilities of one policy's chain.
inline std::vector<Q> chain_reach(const featmc::CompiledMdp& mdp, const std::vector<std::uint32_t>& policy,
                                  const featmc::StateSet& target) {
    const std::size_t n = mdp.num_states();
    auto reach = can_reach(mdp, policy, target);
    // unknowns: states that can reach but are not in the target
    std::vector<int> slot(n, -1);
    std::size_t m = 0;
    for (std::size_t s = 0; s < n; ++s)
        if (reach[s] && !target.test(s)) slot[s] = static_cast<int>(m++);
    std::vector<std::vector<Q>> a(m, std::vector<Q>(m));
    std::vector<Q> rhs(m);
    for (std::size_t s = 0; s < n; ++s) {
        if (slot[s] < 0) continue;
        auto i = static_cast<std::size_t>(slot[s]);
        a[i][i] += 1;
        auto c = mdp.choice_begin(s) + policy[s];
        for (auto b = mdp.branch_begin(c); b < mdp.branch_end(c); ++b) {
            auto t = mdp.target(b);
            Q p = exact(mdp.probability(b));
            if (target.test(t))
                rhs[i] += p;
            else if (slot[t] >= 0)
                a[i][static_cast<std::size_t>(slot[t])] -= p;
        }
    }
    auto x = solve(a, rhs);
    std::vector<Q> out(n);
    for (std::size_t s = 0; s < n; ++s) out[s] = target.test(s) ? Q(1) : slot[s] >= 0 ? x[slot[s]] : Q(0);
    return out;
}

/// Expected cumulated reward of one policy's chain; nullopt where the
/// target is not reached almost surely.
inline std::vector<std::optional<Q>> chain_reward(const featmc::CompiledMdp& mdp, int structure,
                                                  const std::vector<std::uint32_t>& policy,
                                                  const featmc::StateSet& target) {
    const std::size_t n = mdp.num_states();
    auto prob = chain_reach(mdp, policy, target);
    std::vector<int> slot(n, -1);
    std::size_t m = 0;
    for (std::size_t s = 0; s < n; ++s)
        if (prob[s] == 1 && !target.test(s)) slot[s] = static_cast<int>(m++);
    std::vector<std::vector<Q>> a(m, std::vector<Q>(m));
    std::vector<Q> rhs(m);
    for (std::size_t s = 0; s < n; ++s) {
        if (slot[s] < 0) continue;
        auto i = static_cast<std::size_t>(slot[s]);
        auto c = mdp.choice_begin(s) + policy[s];
        a[i][i] += 1;
        rhs[i] = exact(mdp.state_reward(structure, s)) + exact(mdp.transition_reward(structure, c));
        // successors of an almost-surely-reaching state also reach almost surely
        for (auto b = mdp.branch_begin(c); b < mdp.branch_end(c); ++b)
            if (slot[mdp.target(b)] >= 0) a[i][static_cast<std::size_t>(slot[mdp.target(b)])] -= exact(mdp.probability(b));
    }
    auto x = solve(a, rhs);
    std::vector<std::optional<Q>> out(n);
    for (std::size_t s = 0; s < n; ++s) {
        if (target.test(s))
            out[s] = Q(0);
        else if (slot[s] >= 0)
            out[s] = x[slot[s]];
    }
    return out;
}

inline std::vector<Q> optimal_reach(const featmc::CompiledMdp& mdp, const featmc::StateSet& target,
                                    featmc::OptMode mode) {
    std::vector<std::optional<Q>> best(mdp.num_states());
    for_each_policy(mdp, [&](const std::vector<std::uint32_t>& policy) {
        auto v = chain_reach(mdp, policy, target);
        for (std::size_t s = 0; s < v.size(); ++s)
            if (!best[s] || (mode == featmc::OptMode::Min ? v[s] < *best[s] : v[s] > *best[s])) best[s] = v[s];
    });
    std::vector<Q> out;
    for (auto& b : best) out.push_back(*b);
    return out;
}

/// Optimal expected reward; nullopt stands for +infinity. Min ranges over
/// policies reaching the target almost surely, max is infinite as soon as
/// one policy fails to.
inline std::vector<std::optional<Q>> optimal_reward(const featmc::CompiledMdp& mdp, int structure,
                                                    const featmc::StateSet& target, featmc::OptMode mode) {
    const std::size_t n = mdp.num_states();
    std::vector<std::optional<Q>> best(n);
    std::vector<bool> infinite(n, false), seen(n, false);
    for_each_policy(mdp, [&](const std::vector<std::uint32_t>& policy) {
        auto v = chain_reward(mdp, structure, policy, target);
        for (std::size_t s = 0; s < n; ++s) {
            if (!v[s]) {
                if (mode == featmc::OptMode::Max) infinite[s] = true;
                continue;
            }
            if (!seen[s] || (mode == featmc::OptMode::Min ? *v[s] < *best[s] : *v[s] > *best[s])) best[s] = v[s];
            seen[s] = true;
        }
    });
    for (std::size_t s = 0; s < n; ++s)
        if (infinite[s] || !seen[s]) best[s].reset();
    return best;
}

}  // namespace oracle
