#pragma once

#include <cstddef>
#include <stdexcept>

#include "stateabs/mdp.hpp"

namespace stateabs {

struct SolveConfig {
    double tolerance = 1e-10;           ///< sup-norm Bellman residual threshold
    std::size_t max_iterations = 100000;

    /// Throws std::invalid_argument on a non-positive tolerance or zero iterations.
    void check() const;
};

/// Converged optimal Q with its greedy value and policy.
struct Solution {
    QTable q;
    ValueTable v;
    Policy policy;
    double residual = 0.0;
    std::size_t iterations = 0;
    double tolerance = 0.0;
};

/// Raised when value iteration fails to reach the tolerance.
class SolverError : public std::runtime_error {
public:
    SolverError(double residual, std::size_t iterations);
    double residual() const noexcept { return residual_; }
    std::size_t iterations() const noexcept { return iterations_; }

private:
    double residual_;
    std::size_t iterations_;
};

/// Synchronous value iteration on Q from zero until the sup-norm residual drops
/// below cfg.tolerance.
Solution solve(const TabularMdp& mdp, const SolveConfig& cfg = {});

/// Iterative evaluation of a fixed deterministic policy.
ValueTable evaluate_policy(const TabularMdp& mdp, const Policy& policy, const SolveConfig& cfg = {});

/// Argmax per state, ties to the lowest action index.
Policy greedy_policy(const QTable& q);

/// Error budget used when comparing two solves and two evaluations: 4 tol / (1 - gamma).
inline double solver_slack(double tolerance, double gamma) { return 4.0 * tolerance / (1.0 - gamma); }

}  // namespace stateabs
