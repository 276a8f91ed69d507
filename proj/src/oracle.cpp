#include "stateabs/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "stateabs/bounds.hpp"
#include "stateabs/solver.hpp"

namespace stateabs::oracle {

ValueTable exact_policy_value(const TabularMdp& mdp, const Policy& policy) {
    check_policy(mdp, policy);
    const auto n = static_cast<Eigen::Index>(mdp.n_states());
    Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd rewards(n);
    for (Eigen::Index s = 0; s < n; ++s) {
        const auto row = mdp.transition_row(static_cast<State>(s), policy[static_cast<State>(s)]);
        for (Eigen::Index t = 0; t < n; ++t) {
            system(s, t) -= mdp.gamma() * row[static_cast<std::size_t>(t)];
        }
        rewards(s) = mdp.reward(static_cast<State>(s), policy[static_cast<State>(s)]);
    }
    const Eigen::VectorXd v = system.partialPivLu().solve(rewards);
    return ValueTable{std::vector<double>(v.data(), v.data() + n)};
}

OracleResult enumerate_solve(const TabularMdp& mdp) {
    const std::size_t n = mdp.n_states();
    const std::size_t m = mdp.n_actions();
    std::size_t count = 1;
    for (std::size_t i = 0; i < n; ++i) {
        if (count > kMaxPolicies / m) {
            throw InstanceTooLarge(
                fmt::format("{} actions over {} states exceed {} policies", m, n, kMaxPolicies));
        }
        count *= m;
    }

    Policy policy{std::vector<Action>(n, 0)};
    OracleResult best;
    best.v_star.v.assign(n, -1.0);
    best.best_policy = policy;
    best.method = fmt::format("enumerated {} deterministic policies, exact LU evaluation", count);

    double best_total = -1.0;
    for (std::size_t visited = 0; visited < count; ++visited) {
        const ValueTable v = exact_policy_value(mdp, policy);
        // An optimal deterministic policy dominates every state at once, so it
        // also has the largest total value.
        double total = 0.0;
        for (State s = 0; s < n; ++s) total += v[s];
        if (total > best_total) {
            best_total = total;
            best.best_policy = policy;
        }
        for (State s = 0; s < n; ++s) best.v_star.v[s] = std::max(best.v_star.v[s], v[s]);

        for (State s = 0; s < n; ++s) {
            if (++policy.action_of[s] < m) break;
            policy.action_of[s] = 0;
        }
    }
    return best;
}

PairReport exhaustive_pair_check(const QTable& q, const AbstractionMap& map, double epsilon) {
    PairReport report;
    for (State s1 = 0; s1 < map.n_ground(); ++s1) {
        for (State s2 = s1 + 1; s2 < map.n_ground(); ++s2) {
            if (map(s1) != map(s2)) continue;
            ++report.pairs_checked;
            for (Action a = 0; a < q.n_actions(); ++a) {
                const double gap = std::abs(q(s1, a) - q(s2, a));
                if (gap > report.max_gap) {
                    report.max_gap = gap;
                    report.s1 = s1;
                    report.s2 = s2;
                    report.action = a;
                }
            }
        }
    }
    report.within_epsilon = report.max_gap <= epsilon;
    return report;
}

TabularMdp random_instance(std::uint64_t seed, std::size_t n_states, std::size_t n_actions, double gamma) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> support_size(1, n_states);

    MdpTables t;
    t.n_states = n_states;
    t.n_actions = n_actions;
    t.gamma = gamma;
    t.rewards.resize(n_states * n_actions);
    t.transitions.assign(n_states * n_actions * n_states, 0.0);
    std::vector<State> states(n_states);
    std::iota(states.begin(), states.end(), State{0});
    for (std::size_t row = 0; row < n_states * n_actions; ++row) {
        double r = unit(rng);
        if (unit(rng) < 0.3) r = std::round(2.0 * r) / 2.0;
        t.rewards[row] = r;

        std::shuffle(states.begin(), states.end(), rng);
        const std::size_t k = support_size(rng);
        double* p = t.transitions.data() + row * n_states;
        double total = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            p[states[i]] = unit(rng) + 1e-3;
            total += p[states[i]];
        }
        for (std::size_t i = 0; i < k; ++i) p[states[i]] /= total;
    }
    return TabularMdp(std::move(t));
}

SelfcheckReport selfcheck(std::size_t n_instances, std::uint64_t seed) {
    SelfcheckReport report;
    const double gammas[] = {0.5, 0.9, 0.95};
    const double epsilons[] = {0.0, 0.05, 0.1};
    const SolveConfig cfg;
    for (std::size_t i = 0; i < n_instances; ++i) {
        const std::size_t n = 1 + i % 4;
        const TabularMdp mdp = random_instance(seed * 1'000'003ULL + i, n, 2, gammas[i % 3]);
        const Solution sol = solve(mdp, cfg);
        const OracleResult exact = enumerate_solve(mdp);
        for (State s = 0; s < n; ++s) {
            report.max_value_gap = std::max(report.max_value_gap, std::abs(sol.v[s] - exact.v_star[s]));
        }
        ++report.instances;

        std::vector<State> order(n);
        std::iota(order.begin(), order.end(), State{0});
        for (Family family : kAllFamilies) {
            for (double eps : epsilons) {
                const PredicateSpec spec{family, eps};
                const AbstractionMap map = build_abstraction(mdp, sol.q, spec, order);
                const auto k = measure_normalizer_constants(sol.q, map, eps);
                const BoundReport b = verify(mdp, sol, map, spec, k, cfg);
                ++report.bound_checks;
                if (!b.satisfied) ++report.bound_failures;
            }
        }
    }
    report.passed = report.max_value_gap < 1e-6 && report.bound_failures == 0;
    return report;
}

}  // namespace stateabs::oracle
