#pragma once

#include <string>
#include <vector>

#include "featmc/checker.hpp"
#include "featmc/typed_model.hpp"

namespace featmc {

/// The bundled AUV pipeline-inspection model and its property file.
const std::string& auv_model_text();
const std::string& auv_properties_text();

struct Scenario {
    std::string name;
    std::int64_t min_visib = 0;  // 0.5 m units
    std::int64_t max_visib = 0;
    Rational current_prob;
    std::int64_t inspect = 0;  // meters of pipeline
    std::int64_t infl_tf = 1;

    /// Throws ModelError naming the violated condition.
    void validate() const;
    ConstantOverrides overrides() const;

    static Scenario north_sea();  // scenario 1
    static Scenario caribbean();  // scenario 2
    /// Parses `key = value` lines; '#' starts a comment.
    static Scenario parse(const std::string& text);
};

/// `name = value` lines ('#' comments) as constant overrides.
ConstantOverrides parse_overrides(const std::string& text);

struct ScenarioBuild {
    std::string model_text;
    ConstantOverrides overrides;
};

/// Model text plus scenario overrides; `extra` (e.g. an override file) wins.
ScenarioBuild build_scenario(const Scenario& scenario, const ConstantOverrides& extra = {});

struct AnalysisReport {
    std::string scenario;
    std::size_t states = 0;
    std::size_t choices = 0;
    std::size_t transitions = 0;
    double p_done = 0;
    bool p_done_pinned = false;  // initial state in the qualitative one-set
    double energy_min = 0;
    double energy_max = 0;
    double time_min = 0;
    double time_max = 0;
    double p_safe = 0;
    std::vector<SeriesPoint> recovery;    // filter(min, Pmin [F<=k "safe"], "unsafe"), k = 0..10
    std::vector<SeriesPoint> unsafe_max;  // filter(max, Pmax [F<=k "unsafe"], "safe"), k = 0..100
    std::vector<SeriesPoint> unsafe_avg;  // filter(avg, ...), k = 0..100
};

AnalysisReport run_standard_analysis(const Scenario& scenario, const CheckerOptions& options = {},
                                     const ConstantOverrides& extra = {});

std::string format_report(const std::vector<AnalysisReport>& reports);
/// scenario,energy_min,energy_max,time_min,time_max
std::string table2_csv(const std::vector<AnalysisReport>& reports);
/// k,max,avg
std::string fig6_csv(const AnalysisReport& report);

/// Shortest round-trip decimal; integral values get ".0"; infinity is "Infinity".
std::string format_number(double value);

}  // namespace featmc
