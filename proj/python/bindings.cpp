#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

#include "featmc/auv.hpp"
#include "featmc/checker.hpp"
#include "featmc/compiler.hpp"
#include "featmc/errors.hpp"
#include "featmc/simulation.hpp"

namespace py = pybind11;
using namespace featmc;

namespace {

/// A typechecked model together with its compiled MDP.
class Model {
  public:
    Model(const std::string& text, const ConstantOverrides& overrides, double epsilon, unsigned threads)
        : model_(std::make_unique<TypedModel>(typecheck(parse_model(text), overrides))),
          mdp_(compile(*model_)) {
        options_.epsilon = epsilon;
        options_.threads = threads;
    }

    std::size_t num_states() const { return mdp_.num_states(); }
    std::size_t num_choices() const { return mdp_.num_choices(); }
    std::size_t num_transitions() const { return mdp_.num_transitions(); }

    std::vector<std::string> configurations() const {
        std::vector<std::string> out;
        for (auto c : model_->features.enumerate()) out.push_back(model_->features.describe(c));
        return out;
    }

    std::string initial_configuration() const { return model_->features.describe(model_->initial_configuration); }

    std::vector<std::string> labels() const {
        std::vector<std::string> out;
        for (const auto& [name, set] : mdp_.labels()) out.push_back(name);
        return out;
    }

    double check(const std::string& property, const Bindings& bindings) const {
        return evaluator().evaluate(single(property), bindings).value;
    }

    std::vector<std::pair<std::int64_t, double>> experiment(const std::string& property, const std::string& name,
                                                            std::int64_t from, std::int64_t to, std::int64_t step,
                                                            const Bindings& bindings) const {
        auto r = evaluator().run_experiment(single(property), name, from, to, step, bindings);
        std::vector<std::pair<std::int64_t, double>> out;
        for (const auto& p : r.series) out.emplace_back(p.parameter, p.value);
        return out;
    }

    py::dict simulate(const std::string& target, const std::optional<std::string>& reward, const std::string& policy,
                      std::size_t trials, std::size_t max_steps, std::uint64_t seed) const {
        StateSet t = evaluator().state_set(parse_expression(target));
        SimObjective objective = SimObjective::reach(t);
        if (reward) {
            auto idx = mdp_.find_reward(*reward);
            if (!idx) throw ModelError("unknown reward structure " + *reward);
            objective = SimObjective::reward(*idx, t);
        }
        Policy p;
        if (policy == "uniform")
            p = Policy::uniform();
        else if (policy == "first")
            p = Policy::first(mdp_);
        else if (policy == "last")
            p = Policy::last(mdp_);
        else if (policy.rfind("random:", 0) == 0)
            p = Policy::random(mdp_, std::stoull(policy.substr(7)));
        else
            throw ModelError("unknown policy " + policy);
        SimOptions opts;
        opts.trials = trials;
        opts.max_steps = max_steps;
        opts.seed = seed;
        opts.threads = options_.threads;
        auto e = simulate_paths(mdp_, p, objective, opts);
        py::dict d;
        d["estimate"] = e.estimate;
        d["standard_error"] = e.standard_error;
        d["half_width"] = e.half_width;
        d["trials"] = e.trials;
        d["seed"] = e.seed;
        d["truncation_rate"] = e.truncation_rate;
        return d;
    }

    std::string export_dot() const { return featmc::export_dot(mdp_); }
    std::string export_csv() const { return export_transitions_csv(mdp_); }
    std::string stats() const { return export_stats(mdp_); }

  private:
    PropertyEvaluator evaluator() const { return PropertyEvaluator(mdp_, model_.get(), options_); }

    static PropertyAst single(const std::string& text) {
        std::string t = text;
        if (t.find(';') == std::string::npos) t += ";";
        PropertyFile f = parse_properties(t);
        if (f.properties.size() != 1) throw ModelError("expected exactly one property");
        return f.properties.front();
    }

    std::unique_ptr<TypedModel> model_;
    CompiledMdp mdp_;
    CheckerOptions options_;
};

Scenario scenario_named(const std::string& name) {
    if (name == "north_sea" || name == "1") return Scenario::north_sea();
    if (name == "caribbean" || name == "2") return Scenario::caribbean();
    throw ModelError("unknown scenario " + name + " (expected north_sea or caribbean)");
}

py::list series(const std::vector<SeriesPoint>& s) {
    py::list out;
    for (const auto& p : s) out.append(py::make_tuple(p.parameter, p.value));
    return out;
}

}  // namespace

PYBIND11_MODULE(_featmc, m) {
    m.doc() = "Family-based MDP model checking for feature-oriented probabilistic models";

    auto model_error = py::register_exception<ModelError>(m, "ModelError", PyExc_ValueError);
    py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
    (void)model_error;

    py::class_<Model>(m, "Model")
        .def(py::init<const std::string&, const ConstantOverrides&, double, unsigned>(), py::arg("text"),
             py::arg("overrides") = ConstantOverrides{}, py::arg("epsilon") = 1e-6, py::arg("threads") = 1)
        .def_property_readonly("num_states", &Model::num_states)
        .def_property_readonly("num_choices", &Model::num_choices)
        .def_property_readonly("num_transitions", &Model::num_transitions)
        .def_property_readonly("labels", &Model::labels)
        .def_property_readonly("initial_configuration", &Model::initial_configuration)
        .def("configurations", &Model::configurations)
        .def("check", &Model::check, py::arg("property"), py::arg("bindings") = Bindings{})
        .def("experiment", &Model::experiment, py::arg("property"), py::arg("name"), py::arg("start"), py::arg("stop"),
             py::arg("step") = 1, py::arg("bindings") = Bindings{})
        .def("simulate", &Model::simulate, py::arg("target"), py::arg("reward") = std::nullopt,
             py::arg("policy") = "uniform", py::arg("trials") = 10'000, py::arg("max_steps") = 10'000,
             py::arg("seed") = 1)
        .def("export_dot", &Model::export_dot)
        .def("export_csv", &Model::export_csv)
        .def("stats", &Model::stats);

    m.def("auv_model_text", &auv_model_text);
    m.def("auv_properties_text", &auv_properties_text);
    m.def(
        "scenario_overrides", [](const std::string& name) { return scenario_named(name).overrides(); },
        py::arg("name"));
    m.def(
        "auv_model",
        [](const std::string& name, double epsilon, unsigned threads) {
            auto build = build_scenario(scenario_named(name));
            return Model(build.model_text, build.overrides, epsilon, threads);
        },
        py::arg("scenario"), py::arg("epsilon") = 1e-6, py::arg("threads") = 1);
    m.def(
        "standard_analysis",
        [](const std::string& name) {
            AnalysisReport r = run_standard_analysis(scenario_named(name));
            py::dict d;
            d["scenario"] = r.scenario;
            d["states"] = r.states;
            d["p_done"] = r.p_done;
            d["energy_min"] = r.energy_min;
            d["energy_max"] = r.energy_max;
            d["time_min"] = r.time_min;
            d["time_max"] = r.time_max;
            d["p_safe"] = r.p_safe;
            d["recovery"] = series(r.recovery);
            d["unsafe_max"] = series(r.unsafe_max);
            d["unsafe_avg"] = series(r.unsafe_avg);
            return d;
        },
        py::arg("scenario"));
}
