#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "stateabs/mdp.hpp"

namespace stateabs {

/// A generated benchmark MDP with its start state and generator parameters.
struct DomainInstance {
    TabularMdp mdp;
    State initial_state = 0;
    std::string name;
    std::map<std::string, std::string> params;
};

inline constexpr double kDefaultGamma = 0.95;

// Chain of n states with actions {advance, return}. With probability 1-slip the
// chosen action happens, otherwise the opposite one. Returning to state 0 pays
// small_reward, entering the last state pays goal_reward, and advancing at the
// end of the chain stays there (so the goal reward recurs).
struct NChainParams {
    std::size_t n = 10;
    double slip = 0.2;
    double small_reward = 0.2;
    double goal_reward = 1.0;
    double gamma = kDefaultGamma;
};

namespace nchain_actions {
inline constexpr Action kAdvance = 0;
inline constexpr Action kReturn = 1;
}  // namespace nchain_actions

DomainInstance nchain(const NChainParams& params = {});

// rows x cols grid, row 0 at the bottom, start at the lower-left cell.
// Actions {up, left, right}; every transition into the top row pays 1.
struct UpworldParams {
    std::size_t rows = 10;
    std::size_t cols = 4;
    double gamma = kDefaultGamma;
};

namespace upworld_actions {
inline constexpr Action kUp = 0;
inline constexpr Action kLeft = 1;
inline constexpr Action kRight = 2;
}  // namespace upworld_actions

DomainInstance upworld(const UpworldParams& params = {});

/// Grid cell, x to the east and y to the north.
struct Cell {
    std::size_t x = 0;
    std::size_t y = 0;
    bool operator==(const Cell&) const = default;
};

struct TaxiParams {
    std::size_t width = 5;
    std::size_t height = 5;
    std::vector<Cell> depots = {{0, 4}, {4, 4}, {0, 0}, {3, 0}};
    std::size_t n_passengers = 1;
    Cell start = {0, 0};
    double gamma = kDefaultGamma;
};

namespace taxi_actions {
inline constexpr Action kNorth = 0;
inline constexpr Action kSouth = 1;
inline constexpr Action kEast = 2;
inline constexpr Action kWest = 3;
inline constexpr Action kPickup = 4;
inline constexpr Action kDropoff = 5;
}  // namespace taxi_actions

/// Largest Taxi state space the dense generator will build.
inline constexpr std::size_t kMaxTaxiStates = 2500;

/// Deterministic taxi with a single-seat cab. Passenger i waits at depot
/// i mod |depots| and wants to go to depot (i+1) mod |depots|. All states in
/// which every passenger has been delivered collapse into one absorbing goal
/// state; the dropoff that reaches it pays 1, every other transition pays 0.
/// Pickup or dropoff where it cannot apply is a no-op.
DomainInstance taxi(const TaxiParams& params = {});

struct MinefieldParams {
    std::size_t rows = 10;
    std::size_t cols = 4;
    std::size_t n_mines = 5;
    double slip = 0.01;
    std::uint64_t seed = 0;
    double gamma = kDefaultGamma;
};

namespace minefield_actions {
inline constexpr Action kUp = 0;
inline constexpr Action kDown = 1;
inline constexpr Action kLeft = 2;
inline constexpr Action kRight = 3;
}  // namespace minefield_actions

/// Grid world where a move succeeds with probability 1-slip and otherwise goes
/// to either perpendicular direction with slip/2 each. Moving up in the top row
/// pays 1, entering a mine pays 0, everything else pays 0.2. Mine cells (any
/// row) are drawn without replacement from the seed.
DomainInstance minefield(const MinefieldParams& params = {});

/// Mine cells as state indices, ascending; same draw minefield() uses.
std::vector<State> minefield_mines(const MinefieldParams& params);

struct RandomMdpParams {
    std::size_t n_states = 100;
    std::size_t n_actions = 3;
    std::uint64_t seed = 0;
    double gamma = kDefaultGamma;
};

/// Every (s,a) moves to one of two distinct uniformly drawn states with
/// probability 0.5 each; rewards are i.i.d. uniform on [0,1).
DomainInstance random_mdp(const RandomMdpParams& params = {});

/// Names accepted by make_domain: nchain, upworld, taxi, minefield, random.
const std::vector<std::string>& domain_names();

/// Builds a domain by name with default parameters except for the seed.
DomainInstance make_domain(const std::string& name, std::uint64_t seed = 0);

}  // namespace stateabs
