#include <sstream>

#include "featmc/compiler.hpp"

namespace featmc {

namespace {

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

}  // namespace

std::string export_dot(const CompiledMdp& mdp) {
    std::ostringstream out;
    out << "digraph mdp {\n";
    out << "  node [shape=box];\n";
    for (std::size_t s = 0; s < mdp.num_states(); ++s) {
        out << "  s" << s << " [label=\"" << s << ": " << escape(mdp.describe_state(s)) << "\"";
        if (s == mdp.initial()) out << ", peripheries=2";
        out << "];\n";
    }
    for (std::size_t s = 0; s < mdp.num_states(); ++s) {
        for (auto c = mdp.choice_begin(s); c < mdp.choice_end(s); ++c) {
            out << "  c" << c << " [shape=point];\n";
            out << "  s" << s << " -> c" << c;
            const std::string& action = mdp.action_name(mdp.choice_action(c));
            if (!action.empty()) out << " [label=\"" << escape(action) << "\", arrowhead=none]";
            else out << " [arrowhead=none]";
            out << ";\n";
            for (auto b = mdp.branch_begin(c); b < mdp.branch_end(c); ++b)
                out << "  c" << c << " -> s" << mdp.target(b) << " [label=\"" << mdp.probability(b).to_string()
                    << "\"];\n";
        }
    }
    out << "}\n";
    return out.str();
}

std::string export_transitions_csv(const CompiledMdp& mdp) {
    std::ostringstream out;
    out << "source,choice,action,target,probability\n";
    for (std::size_t s = 0; s < mdp.num_states(); ++s) {
        for (auto c = mdp.choice_begin(s); c < mdp.choice_end(s); ++c) {
            for (auto b = mdp.branch_begin(c); b < mdp.branch_end(c); ++b) {
                out << s << ',' << (c - mdp.choice_begin(s)) << ',' << mdp.action_name(mdp.choice_action(c)) << ','
                    << mdp.target(b) << ',' << mdp.probability(b).to_string() << '\n';
            }
        }
    }
    return out.str();
}

std::string export_stats(const CompiledMdp& mdp) {
    std::ostringstream out;
    out << "states=" << mdp.num_states() << '\n';
    out << "choices=" << mdp.num_choices() << '\n';
    out << "transitions=" << mdp.num_transitions() << '\n';
    out << "initial=" << mdp.initial() << '\n';
    for (const auto& [name, set] : mdp.labels()) out << "label." << name << '=' << set.count() << '\n';
    return out.str();
}

}  // namespace featmc
