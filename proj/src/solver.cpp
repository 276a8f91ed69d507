#include "stateabs/solver.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace stateabs {

void SolveConfig::check() const {
    if (!(tolerance > 0.0)) {
        throw std::invalid_argument(fmt::format("solver tolerance must be positive, got {}", tolerance));
    }
    if (max_iterations < 1) {
        throw std::invalid_argument("solver max_iterations must be at least 1");
    }
}

SolverError::SolverError(double residual, std::size_t iterations)
    : std::runtime_error(fmt::format("value iteration did not converge after {} iterations (residual {})",
                                     iterations, residual)),
      residual_(residual),
      iterations_(iterations) {}

namespace {

double backup(const TabularMdp& mdp, State s, Action a, const std::vector<double>& v) {
    double expected = 0.0;
    for (const auto& [next, p] : mdp.successors(s, a)) {
        expected += p * v[next];
    }
    return mdp.reward(s, a) + mdp.gamma() * expected;
}

}  // namespace

Solution solve(const TabularMdp& mdp, const SolveConfig& cfg) {
    cfg.check();
    const std::size_t n = mdp.n_states();
    const std::size_t m = mdp.n_actions();

    QTable q(n, m);
    std::vector<double> v(n, 0.0);
    double residual = 0.0;
    for (std::size_t it = 1; it <= cfg.max_iterations; ++it) {
        QTable next(n, m);
        residual = 0.0;
        for (State s = 0; s < n; ++s) {
            for (Action a = 0; a < m; ++a) {
                next(s, a) = backup(mdp, s, a, v);
                residual = std::max(residual, std::abs(next(s, a) - q(s, a)));
            }
        }
        q = std::move(next);
        for (State s = 0; s < n; ++s) {
            const auto row = q.row(s);
            v[s] = *std::max_element(row.begin(), row.end());
        }
        if (residual < cfg.tolerance) {
            // Report the Bellman residual of the returned q, not the step size.
            QTable check(n, m);
            double final_residual = 0.0;
            for (State s = 0; s < n; ++s) {
                for (Action a = 0; a < m; ++a) {
                    check(s, a) = backup(mdp, s, a, v);
                    final_residual = std::max(final_residual, std::abs(check(s, a) - q(s, a)));
                }
            }
            Solution sol;
            sol.policy = greedy_policy(q);
            sol.q = std::move(q);
            sol.v.v = std::move(v);
            sol.residual = final_residual;
            sol.iterations = it;
            sol.tolerance = cfg.tolerance;
            return sol;
        }
    }
    throw SolverError(residual, cfg.max_iterations);
}

ValueTable evaluate_policy(const TabularMdp& mdp, const Policy& policy, const SolveConfig& cfg) {
    cfg.check();
    check_policy(mdp, policy);
    const std::size_t n = mdp.n_states();
    std::vector<double> v(n, 0.0);
    std::vector<double> next(n, 0.0);
    double residual = 0.0;
    for (std::size_t it = 1; it <= cfg.max_iterations; ++it) {
        residual = 0.0;
        for (State s = 0; s < n; ++s) {
            next[s] = backup(mdp, s, policy[s], v);
            residual = std::max(residual, std::abs(next[s] - v[s]));
        }
        std::swap(v, next);
        if (residual < cfg.tolerance) {
            return ValueTable{std::move(v)};
        }
    }
    throw SolverError(residual, cfg.max_iterations);
}

Policy greedy_policy(const QTable& q) {
    Policy pi;
    pi.action_of.resize(q.n_states());
    for (State s = 0; s < q.n_states(); ++s) {
        const auto row = q.row(s);
        pi.action_of[s] = static_cast<Action>(std::max_element(row.begin(), row.end()) - row.begin());
    }
    return pi;
}

}  // namespace stateabs
