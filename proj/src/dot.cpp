#include <optional>

#include <fmt/format.h>

#include "stateabs/harness.hpp"
#include "stateabs/io.hpp"

namespace stateabs {

namespace {

constexpr const char* kActionColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

}  // namespace

std::string to_dot(const TabularMdp& mdp, const AbstractionMap* map) {
    std::optional<TabularMdp> abstract;
    if (map) abstract.emplace(induce_abstract_mdp(mdp, *map));
    const TabularMdp& g = abstract ? *abstract : mdp;

    std::string out = fmt::format("digraph {} {{\n", abstract ? "abstract_mdp" : "ground_mdp");
    out += "  node [shape=circle, style=filled, fillcolor=\"#d3d3d3\"];\n";
    for (State s = 0; s < g.n_states(); ++s) {
        out += fmt::format("  s{} [label=\"{}\"];\n", s, escape(g.label(s)));
    }
    for (State s = 0; s < g.n_states(); ++s) {
        for (Action a = 0; a < g.n_actions(); ++a) {
            const double penwidth = 1.0 + 4.0 * g.reward(s, a);
            const char* color = kActionColors[a % std::size(kActionColors)];
            for (const auto& [next, p] : g.successors(s, a)) {
                out += fmt::format("  s{} -> s{} [label=\"a{} p={:.3g}\", color=\"{}\", penwidth={:.3f}];\n", s,
                                   next, a, p, color, penwidth);
            }
        }
    }
    out += "}\n";
    return out;
}

void export_dot(const TabularMdp& mdp, const AbstractionMap* map, const std::filesystem::path& path) {
    io::write_text(path, to_dot(mdp, map));
}

}  // namespace stateabs
