#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "featmc/mdp.hpp"
#include "featmc/model_ast.hpp"
#include "featmc/typed_model.hpp"

namespace featmc {

struct CheckerOptions {
    double epsilon = 1e-6;
    std::size_t max_iters = 1'000'000;
    bool relative = true;  // false: absolute change criterion
    unsigned threads = 1;
};

/// Per-state values; expected rewards may be +infinity.
using ValueVector = std::vector<double>;

struct QualitativeSets {
    StateSet zero;  // optimal probability exactly 0
    StateSet one;   // optimal probability exactly 1
};

/// Graph-based prob0/prob1 precomputation for the optimum selected by `mode`.
QualitativeSets qualitative_reach(const CompiledMdp& mdp, const StateSet& target, OptMode mode);

/// Unbounded reachability by Jacobi value iteration outside the qualitative sets.
ValueVector reach_probability(const CompiledMdp& mdp, const StateSet& target, OptMode mode,
                              const CheckerOptions& options = {});

/// Probability of reaching `target` within k steps.
ValueVector bounded_reach_probability(const CompiledMdp& mdp, const StateSet& target, std::int64_t k, OptMode mode,
                                      const CheckerOptions& options = {});

/// Calls `visit(i, x_i)` for i = 0..k_max with the bounded reachability vectors.
void bounded_reach_sweep(const CompiledMdp& mdp, const StateSet& target, std::int64_t k_max, OptMode mode,
                         const CheckerOptions& options,
                         const std::function<void(std::int64_t, const ValueVector&)>& visit);

/// Probability of staying in `safe` forever: 1 - opt' F !safe with the dual optimum.
ValueVector invariant_probability(const CompiledMdp& mdp, const StateSet& safe, OptMode mode,
                                  const CheckerOptions& options = {});

/// Expected reward cumulated before reaching `target`; +inf where the target
/// is not reached almost surely under the adversary of the dual optimum.
ValueVector expected_reward(const CompiledMdp& mdp, int structure, const StateSet& target, OptMode mode,
                            const CheckerOptions& options = {});

struct SeriesPoint {
    std::int64_t parameter = 0;
    double value = 0;
};

struct CheckResult {
    enum class Kind { Scalar, Filter, Series };
    Kind kind = Kind::Scalar;
    double value = 0;                 // Scalar and Filter
    std::string parameter;            // Series
    std::vector<SeriesPoint> series;  // ascending parameter
};

using Bindings = std::map<std::string, std::int64_t>;

/**
 * Evaluates properties against a compiled MDP. State expressions are
 * resolved against `model` (when given) and may use the MDP's labels plus
 * any labels added from a property file.
 */
class PropertyEvaluator {
  public:
    PropertyEvaluator(const CompiledMdp& mdp, const TypedModel* model = nullptr, CheckerOptions options = {});

    /// Adds property-file labels; redeclaring an existing label is an error.
    void add_labels(const std::vector<LabelDecl>& labels);

    StateSet state_set(const ExprPtr& expr, const Bindings& bindings = {}) const;

    /// The inner query's per-state values.
    ValueVector query_values(const Query& query, const Bindings& bindings = {}) const;

    CheckResult evaluate(const PropertyAst& property, const Bindings& bindings = {}) const;

    CheckResult run_experiment(const PropertyAst& property, const std::string& parameter, std::int64_t from,
                               std::int64_t to, std::int64_t step = 1, const Bindings& bindings = {}) const;

    /// Identifiers the property uses that are neither model names nor labels.
    std::set<std::string> free_parameters(const PropertyAst& property) const;

    const CheckerOptions& options() const { return options_; }

  private:
    StateSet eval_set(const Expr& e) const;
    double aggregate(const PropertyAst& property, const ValueVector& values, const StateSet* filter) const;
    std::int64_t bound_value(const PathFormula& path, const Bindings& bindings) const;

    const CompiledMdp& mdp_;
    const TypedModel* model_;
    CheckerOptions options_;
    std::map<std::string, StateSet> extra_labels_;
};

CheckResult evaluate_property(const CompiledMdp& mdp, const PropertyAst& property, const Bindings& bindings = {},
                              const TypedModel* model = nullptr, const CheckerOptions& options = {});

CheckResult run_experiment(const CompiledMdp& mdp, const PropertyAst& property, const std::string& parameter,
                           std::int64_t from, std::int64_t to, std::int64_t step = 1, const TypedModel* model = nullptr,
                           const CheckerOptions& options = {});

}  // namespace featmc
