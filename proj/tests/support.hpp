#pragma once

#include <initializer_list>
#include <string>

#include "featmc/auv.hpp"
#include "featmc/compiler.hpp"
#include "featmc/mdp.hpp"
#include "featmc/state_set.hpp"

namespace support {

inline featmc::StateSet states(std::size_t n, std::initializer_list<std::size_t> members) {
    featmc::StateSet s(n);
    for (auto m : members) s.set(m);
    return s;
}

/// A -> {A: 1/2, B: 1/2}, B absorbing; "step" transition reward 1 in A.
inline featmc::CompiledMdp coin_chain() {
    featmc::MdpBuilder b;
    auto a = b.add_state("A");
    auto t = b.add_state("B");
    auto c = b.add_choice(a, {{a, featmc::Rational(1, 2)}, {t, featmc::Rational(1, 2)}}, "step");
    b.add_choice(t, {{t, 1}}, "step");
    b.set_transition_reward("steps", a, c, 1);
    b.add_label("target", {t});
    return b.build(a);
}

inline featmc::TypedModel auv_model(const featmc::Scenario& scenario) {
    auto build = featmc::build_scenario(scenario);
    return featmc::typecheck(featmc::parse_model(build.model_text), build.overrides);
}

/// Compiled models are cached: the AUV build is the slowest fixture.
inline const featmc::CompiledMdp& auv_mdp(int which) {
    static const featmc::CompiledMdp s1 = featmc::compile(auv_model(featmc::Scenario::north_sea()));
    static const featmc::CompiledMdp s2 = featmc::compile(auv_model(featmc::Scenario::caribbean()));
    return which == 1 ? s1 : s2;
}

inline const featmc::TypedModel& auv_typed(int which) {
    static const featmc::TypedModel s1 = auv_model(featmc::Scenario::north_sea());
    static const featmc::TypedModel s2 = auv_model(featmc::Scenario::caribbean());
    return which == 1 ? s1 : s2;
}

}  // namespace support
