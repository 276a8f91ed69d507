#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "stateabs/abstraction.hpp"
#include "stateabs/mdp.hpp"

namespace stateabs::oracle {

/// Largest number of deterministic policies enumerate_solve will visit.
inline constexpr std::size_t kMaxPolicies = 1'000'000;

class InstanceTooLarge : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct OracleResult {
    ValueTable v_star;
    Policy best_policy;
    std::string method;
};

/// Exact value of a fixed policy by solving (I - gamma T_pi) V = R_pi directly.
ValueTable exact_policy_value(const TabularMdp& mdp, const Policy& policy);

/// Visits every deterministic policy, evaluates each exactly and keeps the
/// pointwise best. Throws InstanceTooLarge beyond kMaxPolicies.
OracleResult enumerate_solve(const TabularMdp& mdp);

struct PairReport {
    double max_gap = 0.0;  ///< max over co-clustered pairs and actions of |Q(s1,a) - Q(s2,a)|
    State s1 = 0;
    State s2 = 0;
    Action action = 0;
    std::size_t pairs_checked = 0;
    bool within_epsilon = true;
};

/// Scans every co-clustered pair of ground states for the worst per-action Q gap.
PairReport exhaustive_pair_check(const QTable& q, const AbstractionMap& map, double epsilon);

/// Small MDP for cross-checks. Each (s,a) spreads random mass over a random
/// number of successors; rewards are uniform on [0,1], sometimes snapped to
/// {0, 0.5, 1} so that ties and exact aggregation occur.
TabularMdp random_instance(std::uint64_t seed, std::size_t n_states, std::size_t n_actions, double gamma);

struct SelfcheckReport {
    std::size_t instances = 0;
    double max_value_gap = 0.0;  ///< worst sup-norm gap between solver and enumeration
    std::size_t bound_checks = 0;
    std::size_t bound_failures = 0;
    bool passed = false;
};

/// Solver-versus-enumeration agreement (within 1e-6) on n_instances random
/// MDPs with at most 4 states and 2 actions, plus a bound check of every
/// family at a few epsilons on each instance.
SelfcheckReport selfcheck(std::size_t n_instances = 100, std::uint64_t seed = 1);

}  // namespace stateabs::oracle
