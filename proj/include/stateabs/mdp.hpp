#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace stateabs {

using State = std::size_t;
using Action = std::size_t;

/// Raw tables of a finite MDP. Rewards are indexed [s * n_actions + a],
/// transitions [(s * n_actions + a) * n_states + s'].
struct MdpTables {
    std::size_t n_states = 0;
    std::size_t n_actions = 0;
    double gamma = 0.0;
    std::vector<double> rewards;
    std::vector<double> transitions;
    std::vector<std::string> labels;
};

enum class ViolationKind {
    EmptyStateSpace,
    EmptyActionSpace,
    TableShape,
    RowSum,
    ProbabilityRange,
    RewardRange,
    Discount,
    LabelCount,
};

struct Violation {
    ViolationKind kind;
    std::string message;
};

/// Checks every structural invariant and returns the violated ones (empty if valid).
std::vector<Violation> validate(const MdpTables& tables);

class InvalidMdp : public std::invalid_argument {
public:
    explicit InvalidMdp(std::vector<Violation> violations);
    const std::vector<Violation>& violations() const noexcept { return violations_; }

private:
    std::vector<Violation> violations_;
};

/// A validated tabular MDP with rewards in [0,1] and gamma in [0,1).
///
/// Immutable after construction. Transitions are kept densely, and a compressed
/// list of nonzero successors per (s,a) is built once for the solvers.
class TabularMdp {
public:
    struct Successor {
        State next;
        double probability;
    };

    /// Throws InvalidMdp when validate(tables) is non-empty.
    explicit TabularMdp(MdpTables tables);

    std::size_t n_states() const noexcept { return tables_.n_states; }
    std::size_t n_actions() const noexcept { return tables_.n_actions; }
    double gamma() const noexcept { return tables_.gamma; }

    double reward(State s, Action a) const { return tables_.rewards[s * n_actions() + a]; }
    double transition(State s, Action a, State next) const {
        return tables_.transitions[(s * n_actions() + a) * n_states() + next];
    }
    std::span<const double> transition_row(State s, Action a) const {
        return {tables_.transitions.data() + (s * n_actions() + a) * n_states(), n_states()};
    }
    std::span<const Successor> successors(State s, Action a) const {
        const std::size_t row = s * n_actions() + a;
        return {successors_.data() + row_start_[row], row_start_[row + 1] - row_start_[row]};
    }

    bool has_labels() const noexcept { return !tables_.labels.empty(); }
    /// Label of a state; falls back to the decimal index when no labels are set.
    std::string label(State s) const;

    const MdpTables& tables() const noexcept { return tables_; }

    bool operator==(const TabularMdp& other) const;

private:
    MdpTables tables_;
    std::vector<std::size_t> row_start_;
    std::vector<Successor> successors_;
};

inline std::vector<Violation> validate(const TabularMdp& mdp) { return validate(mdp.tables()); }

/// Largest achievable discounted return, 1/(1-gamma) with rewards capped at 1.
double max_value(const TabularMdp& mdp);
double max_value(double gamma);

struct Policy {
    std::vector<Action> action_of;

    std::size_t size() const noexcept { return action_of.size(); }
    Action operator[](State s) const { return action_of[s]; }
    bool operator==(const Policy&) const = default;
};

struct ValueTable {
    std::vector<double> v;

    std::size_t size() const noexcept { return v.size(); }
    double operator[](State s) const { return v[s]; }
};

class QTable {
public:
    QTable() = default;
    QTable(std::size_t n_states, std::size_t n_actions, double fill = 0.0)
        : n_states_(n_states), n_actions_(n_actions), q_(n_states * n_actions, fill) {}

    std::size_t n_states() const noexcept { return n_states_; }
    std::size_t n_actions() const noexcept { return n_actions_; }

    double& operator()(State s, Action a) { return q_[s * n_actions_ + a]; }
    double operator()(State s, Action a) const { return q_[s * n_actions_ + a]; }
    std::span<const double> row(State s) const { return {q_.data() + s * n_actions_, n_actions_}; }
    std::span<double> row(State s) { return {q_.data() + s * n_actions_, n_actions_}; }

    const std::vector<double>& data() const noexcept { return q_; }

private:
    std::size_t n_states_ = 0;
    std::size_t n_actions_ = 0;
    std::vector<double> q_;
};

/// Throws std::invalid_argument unless the policy is total and in range for the MDP.
void check_policy(const TabularMdp& mdp, const Policy& policy);

}  // namespace stateabs
