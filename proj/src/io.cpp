#include "stateabs/io.hpp"

#include <fstream>

#include <fmt/format.h>

namespace stateabs::io {

json to_json(const TabularMdp& mdp) {
    const std::size_t n = mdp.n_states();
    const std::size_t m = mdp.n_actions();
    json rewards = json::array();
    json transitions = json::array();
    for (State s = 0; s < n; ++s) {
        json r = json::array();
        json t = json::array();
        for (Action a = 0; a < m; ++a) {
            r.push_back(mdp.reward(s, a));
            const auto row = mdp.transition_row(s, a);
            t.push_back(json(std::vector<double>(row.begin(), row.end())));
        }
        rewards.push_back(std::move(r));
        transitions.push_back(std::move(t));
    }
    json j = {{"n_states", n},
              {"n_actions", m},
              {"gamma", mdp.gamma()},
              {"rewards", std::move(rewards)},
              {"transitions", std::move(transitions)}};
    if (mdp.has_labels()) j["labels"] = mdp.tables().labels;
    return j;
}

namespace {

const json& field(const json& j, const char* name) {
    if (!j.is_object() || !j.contains(name)) {
        throw FormatError(fmt::format("missing field '{}'", name));
    }
    return j.at(name);
}

void expect_array(const json& j, std::size_t size, const std::string& what) {
    if (!j.is_array() || j.size() != size) {
        throw FormatError(fmt::format("'{}' must be an array of length {}", what, size));
    }
}

double number(const json& j, const std::string& what) {
    if (!j.is_number()) throw FormatError(fmt::format("'{}' must be a number", what));
    return j.get<double>();
}

}  // namespace

TabularMdp mdp_from_json(const json& j) {
    MdpTables t;
    const json& ns = field(j, "n_states");
    const json& na = field(j, "n_actions");
    if (!ns.is_number_unsigned() || !na.is_number_unsigned()) {
        throw FormatError("'n_states' and 'n_actions' must be non-negative integers");
    }
    t.n_states = ns.get<std::size_t>();
    t.n_actions = na.get<std::size_t>();
    t.gamma = number(field(j, "gamma"), "gamma");

    const json& rewards = field(j, "rewards");
    const json& transitions = field(j, "transitions");
    expect_array(rewards, t.n_states, "rewards");
    expect_array(transitions, t.n_states, "transitions");
    t.rewards.reserve(t.n_states * t.n_actions);
    t.transitions.reserve(t.n_states * t.n_actions * t.n_states);
    for (std::size_t s = 0; s < t.n_states; ++s) {
        expect_array(rewards[s], t.n_actions, fmt::format("rewards[{}]", s));
        expect_array(transitions[s], t.n_actions, fmt::format("transitions[{}]", s));
        for (std::size_t a = 0; a < t.n_actions; ++a) {
            t.rewards.push_back(number(rewards[s][a], fmt::format("rewards[{}][{}]", s, a)));
            const json& row = transitions[s][a];
            expect_array(row, t.n_states, fmt::format("transitions[{}][{}]", s, a));
            for (std::size_t n = 0; n < t.n_states; ++n) {
                t.transitions.push_back(number(row[n], fmt::format("transitions[{}][{}][{}]", s, a, n)));
            }
        }
    }
    if (j.contains("labels")) {
        const json& labels = j.at("labels");
        expect_array(labels, t.n_states, "labels");
        for (const auto& l : labels) {
            if (!l.is_string()) throw FormatError("'labels' must hold strings");
            t.labels.push_back(l.get<std::string>());
        }
    }
    return TabularMdp(std::move(t));
}

json to_json(const AbstractionMap& map) {
    return {{"phi", map.phi()}, {"weights", map.weights()}};
}

AbstractionMap map_from_json(const json& j) {
    const json& phi = field(j, "phi");
    const json& weights = field(j, "weights");
    if (!phi.is_array() || !weights.is_array()) throw FormatError("'phi' and 'weights' must be arrays");
    std::vector<std::size_t> p;
    std::vector<double> w;
    for (const auto& x : phi) {
        if (!x.is_number_unsigned()) throw FormatError("'phi' must hold non-negative integers");
        p.push_back(x.get<std::size_t>());
    }
    for (const auto& x : weights) w.push_back(number(x, "weights"));
    try {
        return AbstractionMap(std::move(p), std::move(w));
    } catch (const std::invalid_argument& e) {
        throw FormatError(e.what());
    }
}

json to_json(const Solution& solution) {
    json q = json::array();
    for (State s = 0; s < solution.q.n_states(); ++s) {
        const auto row = solution.q.row(s);
        q.push_back(std::vector<double>(row.begin(), row.end()));
    }
    return {{"v", solution.v.v},
            {"q", std::move(q)},
            {"policy", solution.policy.action_of},
            {"residual", solution.residual},
            {"iterations", solution.iterations},
            {"tolerance", solution.tolerance}};
}

json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(fmt::format("cannot open '{}'", path.string()));
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw FormatError(fmt::format("'{}': {}", path.string(), e.what()));
    }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
    out << text;
    if (!out) throw std::runtime_error(fmt::format("write to '{}' failed", path.string()));
}

void write_json(const std::filesystem::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

}  // namespace stateabs::io
