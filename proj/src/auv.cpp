#include "featmc/auv.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "featmc/compiler.hpp"
#include "featmc/errors.hpp"

namespace featmc {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::int64_t parse_int(const std::string& key, const std::string& text) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw ModelError("scenario value for " + key + " is not an integer: '" + text + "'");
    return v;
}

}  // namespace

ConstantOverrides parse_overrides(const std::string& text) {
    ConstantOverrides out;
    std::istringstream in(text);
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ModelError("expected name = value", SourcePos{number, 1});
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) throw ModelError("expected name = value", SourcePos{number, 1});
        out[key] = value;
    }
    return out;
}

void Scenario::validate() const {
    if (!(0 < min_visib)) throw ModelError("scenario " + name + ": min_visib must be positive");
    if (!(min_visib < max_visib)) throw ModelError("scenario " + name + ": min_visib must be below max_visib");
    if (current_prob.is_negative() || current_prob > Rational(1))
        throw ModelError("scenario " + name + ": current_prob must lie in [0,1]");
    if (inspect < 1) throw ModelError("scenario " + name + ": inspect must be at least 1");
    if (infl_tf < 1) throw ModelError("scenario " + name + ": infl_tf must be at least 1");
}

ConstantOverrides Scenario::overrides() const {
    return {{"min_visib", std::to_string(min_visib)},
            {"max_visib", std::to_string(max_visib)},
            {"current_prob", current_prob.to_string()},
            {"inspect", std::to_string(inspect)},
            {"infl_tf", std::to_string(infl_tf)}};
}

Scenario Scenario::north_sea() {
    return {"north_sea", 1, 10, Rational(3, 5), 10, 2};
}

Scenario Scenario::caribbean() {
    return {"caribbean", 3, 20, Rational(3, 10), 30, 2};
}

Scenario Scenario::parse(const std::string& text) {
    Scenario s;
    s.name = "scenario";
    bool seen[5] = {};
    for (const auto& [key, value] : parse_overrides(text)) {
        if (key == "name") {
            s.name = value;
        } else if (key == "min_visib") {
            s.min_visib = parse_int(key, value);
            seen[0] = true;
        } else if (key == "max_visib") {
            s.max_visib = parse_int(key, value);
            seen[1] = true;
        } else if (key == "current_prob") {
            try {
                s.current_prob = Rational::parse(value);
            } catch (const std::exception&) {
                throw ModelError("scenario value for current_prob is not a number: '" + value + "'");
            }
            seen[2] = true;
        } else if (key == "inspect") {
            s.inspect = parse_int(key, value);
            seen[3] = true;
        } else if (key == "infl_tf") {
            s.infl_tf = parse_int(key, value);
            seen[4] = true;
        } else {
            throw ModelError("unknown scenario key '" + key + "'");
        }
    }
    const char* keys[] = {"min_visib", "max_visib", "current_prob", "inspect", "infl_tf"};
    for (int i = 0; i < 5; ++i)
        if (!seen[i]) throw ModelError("scenario is missing " + std::string(keys[i]));
    s.validate();
    return s;
}

ScenarioBuild build_scenario(const Scenario& scenario, const ConstantOverrides& extra) {
    scenario.validate();
    ScenarioBuild b{auv_model_text(), scenario.overrides()};
    for (const auto& [k, v] : extra) b.overrides[k] = v;
    return b;
}

AnalysisReport run_standard_analysis(const Scenario& scenario, const CheckerOptions& options,
                                     const ConstantOverrides& extra) {
    ScenarioBuild build = build_scenario(scenario, extra);
    TypedModel model = typecheck(parse_model(build.model_text), build.overrides);
    CompiledMdp mdp = compile(model);
    PropertyFile props = parse_properties(auv_properties_text());
    if (props.properties.size() != 9) throw ModelError("bundled property file must list 9 properties");
    PropertyEvaluator eval(mdp, &model, options);
    eval.add_labels(props.labels);
    const auto& p = props.properties;

    AnalysisReport r;
    r.scenario = scenario.name;
    r.states = mdp.num_states();
    r.choices = mdp.num_choices();
    r.transitions = mdp.num_transitions();
    r.p_done = eval.evaluate(p[0]).value;
    StateSet done = eval.state_set(p[0].query.path.target);
    r.p_done_pinned = qualitative_reach(mdp, done, OptMode::Min).one.test(mdp.initial());
    r.energy_min = eval.evaluate(p[1]).value;
    r.energy_max = eval.evaluate(p[2]).value;
    r.time_min = eval.evaluate(p[3]).value;
    r.time_max = eval.evaluate(p[4]).value;
    r.p_safe = eval.evaluate(p[5]).value;
    r.recovery = eval.run_experiment(p[6], "k", 0, 10).series;
    r.unsafe_max = eval.run_experiment(p[7], "k", 0, 100).series;
    r.unsafe_avg = eval.run_experiment(p[8], "k", 0, 100).series;
    return r;
}

std::string format_number(double value) {
    if (std::isinf(value)) return value > 0 ? "Infinity" : "-Infinity";
    if (std::isnan(value)) return "NaN";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    std::string out(buf, ptr);
    if (out.find_first_of(".e") == std::string::npos) out += ".0";
    return out;
}

std::string format_report(const std::vector<AnalysisReport>& reports) {
    std::ostringstream out;
    for (const auto& r : reports) {
        out << "scenario " << r.scenario << '\n';
        out << "  states = " << r.states << ", choices = " << r.choices << ", transitions = " << r.transitions << '\n';
        out << "  Pmin=? [F s=done] = " << format_number(r.p_done)
            << (r.p_done_pinned ? " (qualitative)" : "") << '\n';
        out << "  R{\"energy\"}min=? [F s=done] = " << format_number(r.energy_min) << '\n';
        out << "  R{\"energy\"}max=? [F s=done] = " << format_number(r.energy_max) << '\n';
        out << "  R{\"time\"}min=? [F s=done] = " << format_number(r.time_min) << '\n';
        out << "  R{\"time\"}max=? [F s=done] = " << format_number(r.time_max) << '\n';
        out << "  Pmin=? [G \"safe\"] = " << format_number(r.p_safe) << '\n';
        out << "  filter(min, Pmin=? [F<=k \"safe\"], \"unsafe\"):\n";
        for (const auto& pt : r.recovery) out << "    k=" << pt.parameter << ' ' << format_number(pt.value) << '\n';
        out << "  filter(max, Pmax=? [F<=k \"unsafe\"], \"safe\") at k=100 = "
            << format_number(r.unsafe_max.back().value) << '\n';
        out << "  filter(avg, Pmax=? [F<=k \"unsafe\"], \"safe\") at k=100 = "
            << format_number(r.unsafe_avg.back().value) << '\n';
    }
    return out.str();
}

std::string table2_csv(const std::vector<AnalysisReport>& reports) {
    std::ostringstream out;
    out << "scenario,energy_min,energy_max,time_min,time_max\n";
    for (const auto& r : reports)
        out << r.scenario << ',' << format_number(r.energy_min) << ',' << format_number(r.energy_max) << ','
            << format_number(r.time_min) << ',' << format_number(r.time_max) << '\n';
    return out.str();
}

std::string fig6_csv(const AnalysisReport& report) {
    std::ostringstream out;
    out << "k,max,avg\n";
    for (std::size_t i = 0; i < report.unsafe_max.size(); ++i)
        out << report.unsafe_max[i].parameter << ',' << format_number(report.unsafe_max[i].value) << ','
            << format_number(report.unsafe_avg[i].value) << '\n';
    return out.str();
}

}  // namespace featmc
