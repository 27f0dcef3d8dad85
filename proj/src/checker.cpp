#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "featmc/checker.hpp"
#include "featmc/errors.hpp"

namespace featmc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Runs body(begin, end, chunk) over contiguous state ranges. Each chunk
/// writes only its own range, so results do not depend on the thread count.
template <typename Body>
void parallel_for(std::size_t n, unsigned threads, std::size_t& chunks, Body body) {
    constexpr std::size_t kMinChunk = 4096;
    std::size_t t = std::max<std::size_t>(1, std::min<std::size_t>(threads, n / kMinChunk));
    chunks = t;
    if (t == 1) {
        body(std::size_t{0}, n, std::size_t{0});
        return;
    }
    std::vector<std::thread> pool;
    const std::size_t per = (n + t - 1) / t;
    for (std::size_t i = 0; i < t; ++i) {
        std::size_t b = i * per, e = std::min(n, b + per);
        pool.emplace_back([=, &body] { body(b, e, i); });
    }
    for (auto& th : pool) th.join();
}

struct ReverseGraph {
    // for every state: the choices having a branch into it
    std::vector<std::uint32_t> offsets;
    std::vector<std::uint32_t> choices;
    std::vector<std::uint32_t> owner;  // choice -> source state

    explicit ReverseGraph(const CompiledMdp& mdp) {
        const std::size_t n = mdp.num_states();
        owner.resize(mdp.num_choices());
        offsets.assign(n + 1, 0);
        for (std::size_t s = 0; s < n; ++s)
            for (auto c = mdp.choice_begin(s); c < mdp.choice_end(s); ++c) {
                owner[c] = static_cast<std::uint32_t>(s);
                for (auto b = mdp.branch_begin(c); b < mdp.branch_end(c); ++b) ++offsets[mdp.target(b) + 1];
            }
        for (std::size_t s = 0; s < n; ++s) offsets[s + 1] += offsets[s];
        choices.resize(offsets[n]);
        std::vector<std::uint32_t> fill(offsets.begin(), offsets.end() - 1);
        for (std::size_t c = 0; c < mdp.num_choices(); ++c)
            for (auto b = mdp.branch_begin(c); b < mdp.branch_end(c); ++b)
                choices[fill[mdp.target(b)]++] = static_cast<std::uint32_t>(c);
    }
};

/// States that can reach `target` with positive probability, moving only
/// through `allowed` states and using choices accepted by `usable`.
template <typename Usable>
StateSet backward_reach(const ReverseGraph& rev, const StateSet& target, const StateSet& allowed,
                        Usable usable) {
    StateSet reached = target;
    std::vector<std::uint32_t> queue;
    for (auto s : target.indices()) queue.push_back(static_cast<std::uint32_t>(s));
    while (!queue.empty()) {
        auto t = queue.back();
        queue.pop_back();
        for (auto i = rev.offsets[t]; i < rev.offsets[t + 1]; ++i) {
            auto c = rev.choices[i];
            auto s = rev.owner[c];
            if (reached.test(s) || !allowed.test(s) || !usable(c)) continue;
            reached.set(s);
            queue.push_back(s);
        }
    }
    return reached;
}

/// Prob0 for MIN: states with some policy that never reaches target.
StateSet prob0_min(const CompiledMdp& mdp, const ReverseGraph& rev, const StateSet& target) {
    // Y = least fixpoint of target ∪ {s : every choice has a successor in Y}
    const std::size_t n = mdp.num_states();
    StateSet y = target;
    std::vector<std::uint32_t> pending(n);
    for (std::size_t s = 0; s < n; ++s) pending[s] = mdp.choice_end(s) - mdp.choice_begin(s);
    std::vector<char> hit(mdp.num_choices(), 0);
    std::vector<std::uint32_t> queue;
    for (auto s : target.indices()) queue.push_back(static_cast<std::uint32_t>(s));
    while (!queue.empty()) {
        auto t = queue.back();
        queue.pop_back();
        for (auto i = rev.offsets[t]; i < rev.offsets[t + 1]; ++i) {
            auto c = rev.choices[i];
            if (hit[c]) continue;
            hit[c] = 1;
            auto s = rev.owner[c];
            if (--pending[s] == 0 && !y.test(s)) {
                y.set(s);
                queue.push_back(s);
            }
        }
    }
    return ~y;
}

/// Prob1 for MAX: states with some policy reaching target almost surely.
StateSet prob1_max(const CompiledMdp& mdp, const ReverseGraph& rev, const StateSet& target) {
    const std::size_t n = mdp.num_states();
    StateSet u(n, true);
    while (true) {
        auto stays_in_u = [&](std::uint32_t c) {
            for (auto b = mdp.branch_begin(c); b < mdp.branch_end(c); ++b)
                if (!u.test(mdp.target(b))) return false;
            return true;
        };
        StateSet r = backward_reach(rev, target, u, stays_in_u);
        if (r == u) return u;
        u = r;
    }
}

/// Prob1 for MIN: states where every policy reaches target almost surely.
StateSet prob1_min(const ReverseGraph& rev, const StateSet& target, const StateSet& zero_min) {
    StateSet bad = backward_reach(rev, zero_min, ~target, [](std::uint32_t) { return true; });
    return ~bad;
}

double combine(OptMode mode, double a, double b) {
    return mode == OptMode::Min ? std::min(a, b) : std::max(a, b);
}

double change(double updated, double old, bool relative) {
    double d = std::fabs(updated - old);
    if (relative && updated != 0) d /= std::fabs(updated);
    return d;
}

/// Jacobi iteration of x'(s) = opt_c [bonus(s, c) + Σ p x(t)] over `active` states.
template <typename Bonus>
void iterate(const CompiledMdp& mdp, const StateSet& active, OptMode mode, const CheckerOptions& options,
             ValueVector& x, Bonus bonus, const char* what) {
    std::vector<std::uint32_t> work;
    for (auto s : active.indices()) work.push_back(static_cast<std::uint32_t>(s));
    if (work.empty()) return;
    ValueVector next = x;
    std::vector<double> residuals(std::max(1u, options.threads), 0.0);
    for (std::size_t it = 0; it < options.max_iters; ++it) {
        std::size_t chunks = 1;
        parallel_for(work.size(), options.threads, chunks, [&](std::size_t b, std::size_t e, std::size_t chunk) {
            double residual = 0;
            for (std::size_t i = b; i < e; ++i) {
                const auto s = work[i];
                double best = mode == OptMode::Min ? kInf : -kInf;
                for (auto c = mdp.choice_begin(s); c < mdp.choice_end(s); ++c) {
                    double v = bonus(s, c);
                    for (auto br = mdp.branch_begin(c); br < mdp.branch_end(c); ++br) {
                        double xt = x[mdp.target(br)];
                        if (xt == kInf) {
                            v = kInf;
                            break;
                        }
                        v += mdp.probability_value(br) * xt;
                    }
                    best = combine(mode, best, v);
                }
                next[s] = best;
                if (best != kInf) residual = std::max(residual, change(best, x[s], options.relative));
                else if (x[s] != kInf) residual = kInf;
            }
            residuals[chunk] = residual;
        });
        double residual = *std::max_element(residuals.begin(), residuals.begin() + static_cast<long>(chunks));
        for (auto s : work) x[s] = next[s];
        if (residual < options.epsilon) return;
        if (it + 1 == options.max_iters)
            throw ConvergenceError(std::string(what) + " did not converge within " + std::to_string(options.max_iters) +
                                       " iterations (residual " + std::to_string(residual) + ")",
                                   residual, options.max_iters);
    }
}

}  // namespace

QualitativeSets qualitative_reach(const CompiledMdp& mdp, const StateSet& target, OptMode mode) {
    ReverseGraph rev(mdp);
    const std::size_t n = mdp.num_states();
    QualitativeSets out;
    if (mode == OptMode::Max) {
        StateSet can_reach = backward_reach(rev, target, StateSet(n, true), [](std::uint32_t) { return true; });
        out.zero = ~can_reach;
        out.one = prob1_max(mdp, rev, target);
    } else {
        out.zero = prob0_min(mdp, rev, target);
        out.one = prob1_min(rev, target, out.zero);
    }
    return out;
}

ValueVector reach_probability(const CompiledMdp& mdp, const StateSet& target, OptMode mode,
                              const CheckerOptions& options) {
    if (!(options.epsilon > 0)) throw std::invalid_argument("epsilon must be positive");
    auto q = qualitative_reach(mdp, target, mode);
    ValueVector x(mdp.num_states(), 0.0);
    for (auto s : q.one.indices()) x[s] = 1.0;
    StateSet unknown = ~(q.zero | q.one);
    // Both optima are approached from below, so a truncated Pmax run could end
    // under Pmin. Seeding it with the Pmin iterate (a post-fixpoint of the max
    // operator) keeps the sequence monotone and Pmin <= Pmax exact.
    if (mode == OptMode::Max && !unknown.empty()) {
        ValueVector lower = reach_probability(mdp, target, OptMode::Min, options);
        for (auto s : unknown.indices()) x[s] = lower[s];
    }
    iterate(mdp, unknown, mode, options, x, [](std::uint32_t, std::uint32_t) { return 0.0; }, "reachability");
    return x;
}

void bounded_reach_sweep(const CompiledMdp& mdp, const StateSet& target, std::int64_t k_max, OptMode mode,
                         const CheckerOptions& options,
                         const std::function<void(std::int64_t, const ValueVector&)>& visit) {
    if (k_max < 0) throw std::invalid_argument("step bound must be non-negative");
    const std::size_t n = mdp.num_states();
    ValueVector x(n, 0.0);
    for (auto s : target.indices()) x[s] = 1.0;
    visit(0, x);
    std::vector<std::uint32_t> work;
    for (auto s : (~target).indices()) work.push_back(static_cast<std::uint32_t>(s));
    ValueVector next = x;
    for (std::int64_t i = 1; i <= k_max; ++i) {
        std::size_t chunks = 1;
        parallel_for(work.size(), options.threads, chunks, [&](std::size_t b, std::size_t e, std::size_t) {
            for (std::size_t j = b; j < e; ++j) {
                const auto s = work[j];
                double best = mode == OptMode::Min ? kInf : -kInf;
                for (auto c = mdp.choice_begin(s); c < mdp.choice_end(s); ++c) {
                    double v = 0;
                    for (auto br = mdp.branch_begin(c); br < mdp.branch_end(c); ++br)
                        v += mdp.probability_value(br) * x[mdp.target(br)];
                    best = combine(mode, best, v);
                }
                next[s] = best;
            }
        });
        x.swap(next);
        for (auto s : target.indices()) x[s] = 1.0;
        visit(i, x);
    }
}

ValueVector bounded_reach_probability(const CompiledMdp& mdp, const StateSet& target, std::int64_t k, OptMode mode,
                                      const CheckerOptions& options) {
    ValueVector out;
    bounded_reach_sweep(mdp, target, k, mode, options, [&](std::int64_t i, const ValueVector& x) {
        if (i == k) out = x;
    });
    return out;
}

ValueVector invariant_probability(const CompiledMdp& mdp, const StateSet& safe, OptMode mode,
                                  const CheckerOptions& options) {
    OptMode dual = mode == OptMode::Min ? OptMode::Max : OptMode::Min;
    ValueVector x = reach_probability(mdp, ~safe, dual, options);
    for (auto& v : x) v = 1.0 - v;
    return x;
}

ValueVector expected_reward(const CompiledMdp& mdp, int structure, const StateSet& target, OptMode mode,
                            const CheckerOptions& options) {
    if (structure < 0 || static_cast<std::size_t>(structure) >= mdp.reward_names().size())
        throw ModelError("unknown reward structure");
    if (!(options.epsilon > 0)) throw std::invalid_argument("epsilon must be positive");
    const std::size_t n = mdp.num_states();
    // finite exactly where the dual adversary still reaches the target almost surely
    OptMode dual = mode == OptMode::Min ? OptMode::Max : OptMode::Min;
    StateSet finite = qualitative_reach(mdp, target, dual).one;

    ValueVector x(n, 0.0);
    for (std::size_t s = 0; s < n; ++s)
        if (!finite.test(s)) x[s] = kInf;

    std::vector<double> state_reward(n), trans_reward(mdp.num_choices());
    for (std::size_t s = 0; s < n; ++s) state_reward[s] = mdp.state_reward(structure, s).to_double();
    for (std::size_t c = 0; c < mdp.num_choices(); ++c) trans_reward[c] = mdp.transition_reward(structure, c).to_double();

    StateSet active = finite & ~target;
    iterate(mdp, active, mode, options, x,
            [&](std::uint32_t s, std::uint32_t c) { return state_reward[s] + trans_reward[c]; }, "expected reward");
    return x;
}

}  // namespace featmc
