#include <CLI11.hpp>

#include <filesystem>
#include <optional>
#include <set>
#include <fstream>
#include <iostream>
#include <sstream>

#include "featmc/auv.hpp"
#include "featmc/checker.hpp"
#include "featmc/compiler.hpp"
#include "featmc/errors.hpp"
#include "featmc/simulation.hpp"

namespace fs = std::filesystem;
using namespace featmc;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kModelError = 2, kNoConvergence = 3 };

/// Input problems reported with the file they came from.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("file not found: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path);
    out << text;
}

/// Runs `f` and rethrows model errors prefixed with the source path.
template <typename F>
auto in_file(const std::string& path, F f) {
    try {
        return f();
    } catch (const ModelError& e) {
        std::string where = path;
        if (e.pos().valid()) where += ":" + e.pos().to_string();
        throw InputError(where + ": " + e.message());
    }
}

struct ModelArgs {
    std::string model_path;
    std::vector<std::string> constants;
    std::string overrides_path;
    std::string scenario_path;
};

void add_model_args(CLI::App* cmd, ModelArgs& args) {
    cmd->add_option("model", args.model_path, "Model file (.pfm)")->required();
    cmd->add_option("-c,--const", args.constants, "Constant override name=value (repeatable)");
    cmd->add_option("--overrides", args.overrides_path, "File of name = value constant overrides");
    cmd->add_option("--scenario", args.scenario_path, "Scenario file (see scenarios/) supplying the AUV constants");
}

ConstantOverrides collect_overrides(const ModelArgs& args, const std::set<std::string>& skip = {}) {
    ConstantOverrides out;
    if (!args.scenario_path.empty())
        out = in_file(args.scenario_path, [&] { return Scenario::parse(read_file(args.scenario_path)).overrides(); });
    if (!args.overrides_path.empty())
        for (const auto& [k, v] : in_file(args.overrides_path, [&] { return parse_overrides(read_file(args.overrides_path)); }))
            out[k] = v;
    for (const auto& c : args.constants) {
        auto eq = c.find('=');
        if (eq == std::string::npos || eq == 0) throw CLI::ValidationError("-c", "expected name=value, got '" + c + "'");
        std::string name = c.substr(0, eq);
        if (!skip.count(name)) out[name] = c.substr(eq + 1);
    }
    return out;
}

TypedModel load_model(const ModelArgs& args, const std::set<std::string>& skip = {}) {
    std::string text = read_file(args.model_path);
    ConstantOverrides overrides = collect_overrides(args, skip);
    return in_file(args.model_path, [&] { return typecheck(parse_model(text), overrides); });
}

struct SolverArgs {
    double epsilon = 1e-6;
    std::size_t max_iters = 1'000'000;
    bool absolute = false;
    unsigned threads = 1;
    std::size_t state_cap = 0;
};

void add_solver_args(CLI::App* cmd, SolverArgs& args) {
    cmd->add_option("--epsilon", args.epsilon, "Convergence threshold")->check(CLI::PositiveNumber);
    cmd->add_option("--max-iters", args.max_iters, "Iteration limit of value iteration")->check(CLI::PositiveNumber);
    cmd->add_flag("--absolute", args.absolute, "Use the absolute instead of the relative change criterion");
    cmd->add_option("--threads", args.threads, "Worker threads")->check(CLI::Range(1u, 1024u));
    cmd->add_option("--state-cap", args.state_cap, "Maximum number of states (default: FEATMC_STATE_CAP or 10^7)");
}

CheckerOptions checker_options(const SolverArgs& a) {
    CheckerOptions o;
    o.epsilon = a.epsilon;
    o.max_iters = a.max_iters;
    o.relative = !a.absolute;
    o.threads = a.threads;
    return o;
}

CompiledMdp build_mdp(const ModelArgs& m, const TypedModel& model, const SolverArgs& s) {
    CompileOptions opts;
    if (s.state_cap) opts.state_cap = s.state_cap;
    return in_file(m.model_path, [&] { return compile(model, opts); });
}

// ---- validate ----

int run_validate(const ModelArgs& args) {
    TypedModel model = load_model(args);
    const auto configs = model.features.enumerate();
    std::cout << "features: " << model.features.size() << '\n';
    std::cout << "modules: " << model.components.size() - (model.components.back().is_controller ? 1 : 0) << '\n';
    std::cout << "variables: " << model.variables.size() << '\n';
    std::cout << "valid configurations: " << configs.size() << '\n';
    for (auto c : configs) std::cout << "  " << model.features.describe(c) << '\n';
    std::cout << "initial configuration: " << model.features.describe(model.initial_configuration) << '\n';
    return kOk;
}

// ---- check ----

struct Experiment {
    std::string name;
    std::int64_t from = 0, to = 0, step = 1;
};

Experiment parse_experiment(const std::string& spec) {
    Experiment e;
    auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0) throw CLI::ValidationError("--experiment", "expected name=from:to[:step]");
    e.name = spec.substr(0, eq);
    std::vector<std::int64_t> parts;
    std::stringstream ss(spec.substr(eq + 1));
    std::string item;
    while (std::getline(ss, item, ':')) {
        try {
            std::size_t used = 0;
            parts.push_back(std::stoll(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw CLI::ValidationError("--experiment", "'" + item + "' is not an integer");
        }
    }
    if (parts.size() < 2 || parts.size() > 3) throw CLI::ValidationError("--experiment", "expected name=from:to[:step]");
    e.from = parts[0];
    e.to = parts[1];
    if (parts.size() == 3) e.step = parts[2];
    if (e.from > e.to || e.step < 1) throw CLI::ValidationError("--experiment", "empty range in '" + spec + "'");
    return e;
}

int run_check(const ModelArgs& margs, const std::string& props_path, const SolverArgs& sargs,
              const std::string& experiment_spec, const std::string& csv_dir) {
    std::string props_text = read_file(props_path);
    PropertyFile props = in_file(props_path, [&] { return parse_properties(props_text); });

    // constants declared in the property file are property parameters
    std::set<std::string> prop_constants;
    Bindings bindings;
    for (const auto& c : props.constants) {
        prop_constants.insert(c.name);
        if (c.value) {
            ExprPtr v = in_file(props_path, [&] { return resolve_expression(TypedModel{}, c.value); });
            if (v->kind != ExprKind::Literal || v->type != ValueType::Int)
                throw InputError(props_path + ":" + c.pos.to_string() + ": property constant " + c.name +
                                 " must be an integer");
            bindings[c.name] = v->value.as_int();
        }
    }
    for (const auto& c : margs.constants) {
        auto eq = c.find('=');
        if (eq == std::string::npos) continue;
        std::string name = c.substr(0, eq);
        if (!prop_constants.count(name)) continue;
        try {
            std::size_t used = 0;
            std::string value = c.substr(eq + 1);
            bindings[name] = std::stoll(value, &used);
            if (used != value.size()) throw std::invalid_argument(value);
        } catch (const std::exception&) {
            throw CLI::ValidationError("-c", "property constant " + name + " needs an integer value");
        }
    }
    std::optional<Experiment> experiment;
    if (!experiment_spec.empty()) experiment = parse_experiment(experiment_spec);

    TypedModel model = load_model(margs, prop_constants);
    CompiledMdp mdp = build_mdp(margs, model, sargs);
    PropertyEvaluator eval(mdp, &model, checker_options(sargs));
    in_file(props_path, [&] {
        eval.add_labels(props.labels);
        return 0;
    });

    for (std::size_t i = 0; i < props.properties.size(); ++i) {
        const PropertyAst& p = props.properties[i];
        const std::string text = to_string(p);
        std::set<std::string> unbound;
        for (const auto& name : eval.free_parameters(p))
            if (!bindings.count(name)) unbound.insert(name);
        if (experiment) unbound.erase(experiment->name);
        if (!unbound.empty()) {
            std::cerr << "featmc: skipping " << text << ": unbound parameter " << *unbound.begin()
                      << " (bind it with -c or --experiment)\n";
            continue;
        }
        if (experiment && eval.free_parameters(p).count(experiment->name)) {
            CheckResult r = in_file(props_path, [&] {
                return eval.run_experiment(p, experiment->name, experiment->from, experiment->to, experiment->step,
                                           bindings);
            });
            std::ostringstream csv;
            csv << experiment->name << ",value\n";
            for (const auto& pt : r.series) {
                std::cout << text << " [" << experiment->name << "=" << pt.parameter << "] = " << format_number(pt.value)
                          << '\n';
                csv << pt.parameter << ',' << format_number(pt.value) << '\n';
            }
            if (!csv_dir.empty()) {
                fs::create_directories(csv_dir);
                write_file((fs::path(csv_dir) / ("property" + std::to_string(i + 1) + ".csv")).string(), csv.str());
            }
        } else {
            CheckResult r = in_file(props_path, [&] { return eval.evaluate(p, bindings); });
            std::cout << text << " = " << format_number(r.value) << '\n';
        }
    }
    return kOk;
}

// ---- simulate ----

Policy load_policy(const std::string& spec, const CompiledMdp& mdp) {
    if (spec == "uniform") return Policy::uniform();
    if (spec == "first") return Policy::first(mdp);
    if (spec == "last") return Policy::last(mdp);
    if (spec.rfind("random:", 0) == 0) {
        try {
            return Policy::random(mdp, std::stoull(spec.substr(7)));
        } catch (const std::exception&) {
            throw CLI::ValidationError("--policy", "bad seed in '" + spec + "'");
        }
    }
    if (spec.rfind("file:", 0) == 0) {
        std::string path = spec.substr(5);
        std::istringstream in(read_file(path));
        std::vector<std::uint32_t> choice;
        std::uint64_t v;
        while (in >> v) choice.push_back(static_cast<std::uint32_t>(v));
        return Policy::fixed(std::move(choice));
    }
    throw CLI::ValidationError("--policy", "expected uniform, first, last, random:SEED or file:PATH");
}

struct SimArgs {
    std::string target;
    std::string reward;
    std::string policy = "uniform";
    std::size_t trials = 10'000;
    std::size_t max_steps = 10'000;
    std::uint64_t seed = 1;
    std::string trace_csv;
};

int run_simulate(const ModelArgs& margs, const SolverArgs& sargs, const SimArgs& a) {
    TypedModel model = load_model(margs);
    CompiledMdp mdp = build_mdp(margs, model, sargs);
    PropertyEvaluator eval(mdp, &model);
    StateSet target = in_file("--target", [&] { return eval.state_set(parse_expression(a.target)); });
    SimObjective objective = SimObjective::reach(target);
    if (!a.reward.empty()) {
        auto r = mdp.find_reward(a.reward);
        if (!r) throw InputError("unknown reward structure \"" + a.reward + "\"");
        objective = SimObjective::reward(*r, target);
    }
    Policy policy = load_policy(a.policy, mdp);
    SimOptions opts;
    opts.trials = a.trials;
    opts.max_steps = a.max_steps;
    opts.seed = a.seed;
    opts.threads = sargs.threads;
    SimEstimate e = in_file(margs.model_path, [&] { return simulate_paths(mdp, policy, objective, opts); });

    std::cout << "objective = " << (a.reward.empty() ? "reach " : "reward \"" + a.reward + "\" until ") << a.target
              << '\n';
    std::cout << "policy = " << a.policy << '\n';
    std::cout << "estimate = " << format_number(e.estimate) << '\n';
    std::cout << "standard_error = " << format_number(e.standard_error) << '\n';
    std::cout << "ci95 = [" << format_number(e.estimate - e.half_width) << ", "
              << format_number(e.estimate + e.half_width) << "]\n";
    std::cout << "trials = " << e.trials << '\n';
    std::cout << "seed = " << e.seed << '\n';
    std::cout << "truncation_rate = " << format_number(e.truncation_rate) << '\n';
    if (!a.trace_csv.empty()) {
        std::ostringstream csv;
        csv << "trial,outcome\n";
        for (std::size_t i = 0; i < e.outcomes.size(); ++i) csv << i << ',' << format_number(e.outcomes[i]) << '\n';
        write_file(a.trace_csv, csv.str());
    }
    return kOk;
}

// ---- export ----

int run_export(const ModelArgs& margs, const SolverArgs& sargs, const std::string& dot, const std::string& csv,
               bool stats) {
    if (dot.empty() && csv.empty() && !stats) throw CLI::ValidationError("export", "choose --dot, --csv or --stats");
    TypedModel model = load_model(margs);
    CompiledMdp mdp = build_mdp(margs, model, sargs);
    if (!dot.empty()) write_file(dot, export_dot(mdp));
    if (!csv.empty()) write_file(csv, export_transitions_csv(mdp));
    if (stats) std::cout << export_stats(mdp);
    return kOk;
}

// ---- reproduce ----

int run_reproduce(const std::string& scenario_arg, const std::string& overrides_path, const std::string& out_dir,
                  const SolverArgs& sargs) {
    std::vector<std::pair<int, Scenario>> scenarios;
    if (scenario_arg == "all" || scenario_arg.empty()) {
        scenarios = {{1, Scenario::north_sea()}, {2, Scenario::caribbean()}};
    } else if (scenario_arg == "north_sea" || scenario_arg == "1") {
        scenarios = {{1, Scenario::north_sea()}};
    } else if (scenario_arg == "caribbean" || scenario_arg == "2") {
        scenarios = {{2, Scenario::caribbean()}};
    } else {
        std::string text = read_file(scenario_arg);
        scenarios = {{1, in_file(scenario_arg, [&] { return Scenario::parse(text); })}};
    }
    ConstantOverrides extra;
    if (!overrides_path.empty())
        extra = in_file(overrides_path, [&] { return parse_overrides(read_file(overrides_path)); });

    std::vector<AnalysisReport> reports;
    for (const auto& [index, s] : scenarios)
        reports.push_back(in_file("<bundled auv model>", [&] { return run_standard_analysis(s, checker_options(sargs), extra); }));

    fs::create_directories(out_dir);
    const std::string report = format_report(reports);
    write_file((fs::path(out_dir) / "report.txt").string(), report);
    write_file((fs::path(out_dir) / "table2.csv").string(), table2_csv(reports));
    for (std::size_t i = 0; i < reports.size(); ++i)
        write_file((fs::path(out_dir) / ("fig6_scenario" + std::to_string(scenarios[i].first) + ".csv")).string(),
                   fig6_csv(reports[i]));
    std::cout << report;
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Probabilistic model checker for feature-aware guarded-command models"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "featmc 1.0.0");

    ModelArgs margs;
    SolverArgs sargs;

    auto* validate = app.add_subcommand("validate", "Parse and typecheck a model; list its valid configurations");
    add_model_args(validate, margs);

    std::string props_path, experiment, csv_dir;
    auto* check = app.add_subcommand("check", "Compile a model and evaluate a property file");
    add_model_args(check, margs);
    check->add_option("properties", props_path, "Property file (.props)")->required();
    check->add_option("--experiment", experiment, "Sweep a parameter: name=from:to[:step]");
    check->add_option("--csv-dir", csv_dir, "Write experiment series as CSV files into this directory");
    add_solver_args(check, sargs);

    SimArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Monte-Carlo rollouts under a fixed or uniform policy");
    add_model_args(simulate, margs);
    simulate->add_option("--target", sim.target, "Target state formula, e.g. 's=done' or '\"unsafe\"'")->required();
    simulate->add_option("--reward", sim.reward, "Estimate this reward cumulated until the target instead");
    simulate->add_option("--policy", sim.policy, "uniform | first | last | random:SEED | file:PATH");
    simulate->add_option("--trials", sim.trials, "Number of rollouts")->check(CLI::PositiveNumber);
    simulate->add_option("--max-steps", sim.max_steps, "Truncation length of a rollout");
    simulate->add_option("--seed", sim.seed, "Random seed");
    simulate->add_option("--trace-csv", sim.trace_csv, "Write per-trial outcomes to this CSV file");
    add_solver_args(simulate, sargs);

    std::string dot_path, csv_path;
    bool stats = false;
    auto* exp = app.add_subcommand("export", "Export the compiled MDP");
    add_model_args(exp, margs);
    exp->add_option("--dot", dot_path, "GraphViz output file ('-' for stdout)");
    exp->add_option("--csv", csv_path, "Transition table output file ('-' for stdout)");
    exp->add_flag("--stats", stats, "Print key=value statistics");
    add_solver_args(exp, sargs);

    std::string scenario = "all", overrides, out_dir = "reproduce_out";
    auto* reproduce = app.add_subcommand("reproduce", "Run the standard AUV analysis");
    reproduce->add_option("--scenario", scenario, "north_sea | caribbean | all | path to a scenario file");
    reproduce->add_option("--overrides", overrides, "Constant override file applied to the model");
    reproduce->add_option("--out", out_dir, "Output directory");
    add_solver_args(reproduce, sargs);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (validate->parsed()) return run_validate(margs);
        if (check->parsed()) return run_check(margs, props_path, sargs, experiment, csv_dir);
        if (simulate->parsed()) return run_simulate(margs, sargs, sim);
        if (exp->parsed()) return run_export(margs, sargs, dot_path, csv_path, stats);
        if (reproduce->parsed()) return run_reproduce(scenario, overrides, out_dir, sargs);
    } catch (const CLI::ParseError& e) {
        std::cerr << "featmc: " << e.what() << '\n';
        return kUsage;
    } catch (const ConvergenceError& e) {
        std::cerr << "featmc: " << e.what() << '\n';
        return kNoConvergence;
    } catch (const InputError& e) {
        std::cerr << "featmc: " << e.what() << '\n';
        return kModelError;
    } catch (const ModelError& e) {
        std::cerr << "featmc: " << e.what() << '\n';
        return kModelError;
    } catch (const std::exception& e) {
        std::cerr << "featmc: " << e.what() << '\n';
        return kModelError;
    }
    return kUsage;
}
