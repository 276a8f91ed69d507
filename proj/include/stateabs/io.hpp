#pragma once

#include <filesystem>
#include <stdexcept>

#include <json.hpp>

#include "stateabs/abstraction.hpp"
#include "stateabs/solver.hpp"

namespace stateabs::io {

using nlohmann::json;

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// MDP interchange: {n_states, n_actions, gamma, rewards[s][a],
// transitions[s][a][s'], labels?}.
json to_json(const TabularMdp& mdp);
/// Throws FormatError on missing or mis-shaped fields, InvalidMdp on invalid tables.
TabularMdp mdp_from_json(const json& j);

// Abstraction map: {phi: [...], weights: [...]}.
json to_json(const AbstractionMap& map);
AbstractionMap map_from_json(const json& j);

json to_json(const Solution& solution);

json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const json& j);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace stateabs::io
