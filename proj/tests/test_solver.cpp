#include <doctest.h>

#include <cmath>
#include <random>

#include "stateabs/domains.hpp"
#include "stateabs/oracle.hpp"
#include "stateabs/solver.hpp"
#include "support.hpp"

using namespace stateabs;
namespace t = stateabs::testing;

TEST_CASE("single state with reward 1 is worth 1/(1-gamma)") {
    const Solution sol = solve(t::self_loop(1.0, 0.95));
    CHECK(std::abs(sol.v[0] - 20.0) < 1e-8);
    CHECK(sol.residual < sol.tolerance);
    CHECK(sol.policy[0] == 0);
}

TEST_CASE("decoupled self loops") {
    const TabularMdp m = t::mdp(0.5, {{0.0}, {1.0}}, {{{1.0, 0.0}}, {{0.0, 1.0}}});
    const Solution sol = solve(m);
    CHECK(std::abs(sol.v[0] - 0.0) < 1e-9);
    CHECK(std::abs(sol.v[1] - 2.0) < 1e-9);
}

TEST_CASE("solver matches policy enumeration on small instances") {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const std::size_t n = 1 + seed % 4;
        const TabularMdp m = oracle::random_instance(seed + 500, n, 2, seed % 2 ? 0.9 : 0.95);
        const Solution sol = solve(m);
        const auto exact = oracle::enumerate_solve(m);
        for (State s = 0; s < n; ++s) CHECK(std::abs(sol.v[s] - exact.v_star[s]) < 1e-6);
    }
}

TEST_CASE("non-convergence carries the final residual") {
    const TabularMdp m = t::self_loop(1.0, 0.99);
    try {
        solve(m, {.tolerance = 1e-12, .max_iterations = 5});
        FAIL("expected SolverError");
    } catch (const SolverError& e) {
        CHECK(e.iterations() == 5);
        CHECK(e.residual() == doctest::Approx(std::pow(0.99, 4)));
    }
    CHECK_THROWS_AS(evaluate_policy(m, Policy{{0}}, {.tolerance = 1e-12, .max_iterations = 3}), SolverError);
}

TEST_CASE("solve config is checked") {
    CHECK_THROWS_AS(solve(t::self_loop(1.0, 0.5), {.tolerance = 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(solve(t::self_loop(1.0, 0.5), {.tolerance = 1e-6, .max_iterations = 0}), std::invalid_argument);
}

TEST_CASE("evaluate_policy basics") {
    CHECK(std::abs(evaluate_policy(t::self_loop(0.2, 0.95), Policy{{0}})[0] - 4.0) < 1e-8);

    const TabularMdp m = nchain().mdp;
    const SolveConfig cfg;
    const Solution sol = solve(m, cfg);
    const ValueTable v = evaluate_policy(m, sol.policy, cfg);
    for (State s = 0; s < m.n_states(); ++s) {
        CHECK(std::abs(v[s] - sol.v[s]) <= 2 * cfg.tolerance / (1 - m.gamma()));
    }
    CHECK_THROWS_AS(evaluate_policy(m, Policy{{0, 1}}), std::invalid_argument);
    CHECK_THROWS_AS(evaluate_policy(m, Policy{std::vector<Action>(10, 2)}), std::invalid_argument);
}

TEST_CASE("evaluate_policy matches the direct linear solve") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const TabularMdp m = oracle::random_instance(seed, 3, 2, 0.9);
        const Policy pi{{seed % 2, (seed / 2) % 2, (seed / 4) % 2}};
        const ValueTable iterative = evaluate_policy(m, pi);
        const ValueTable exact = oracle::exact_policy_value(m, pi);
        for (State s = 0; s < 3; ++s) CHECK(std::abs(iterative[s] - exact[s]) < 1e-6);
    }
}

TEST_CASE("greedy_policy breaks ties toward the lowest action") {
    CHECK(greedy_policy(t::q_from_rows({{1.0, 1.0}}))[0] == 0);
    CHECK(greedy_policy(t::q_from_rows({{0.1, 0.9}}))[0] == 1);
    CHECK(greedy_policy(t::q_from_rows({{0.5, 0.9, 0.9}}))[0] == 1);
}

TEST_CASE("greedy policy on NChain agrees with the enumerated optimum") {
    const TabularMdp m = nchain().mdp;
    const Solution sol = solve(m);
    const auto exact = oracle::enumerate_solve(m);
    const QTable q_exact = t::backup_q(m, exact.v_star.v);
    const Policy expected = greedy_policy(q_exact);
    CHECK(sol.policy == expected);
    CHECK(sol.policy == exact.best_policy);
    // The chain end always advances.
    CHECK(sol.policy[9] == nchain_actions::kAdvance);
}

TEST_CASE("solver properties on random instances") {
    // V* dominates any policy's value; values stay in [0, 1/(1-gamma)]; a
    // tenfold tighter tolerance moves V* by no more than the looser guarantee.
    std::mt19937_64 rng(42);
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const double gamma = seed % 3 == 0 ? 0.5 : 0.95;
        const TabularMdp m = oracle::random_instance(seed + 77, 2 + seed % 5, 1 + seed % 3, gamma);
        const SolveConfig loose{.tolerance = 1e-8};
        const SolveConfig tight{.tolerance = 1e-9};
        const Solution a = solve(m, loose);
        const Solution b = solve(m, tight);
        Policy pi{std::vector<Action>(m.n_states())};
        for (auto& x : pi.action_of) x = rng() % m.n_actions();
        const ValueTable vpi = evaluate_policy(m, pi, loose);
        const double slack = 2 * loose.tolerance / (1 - gamma);
        for (State s = 0; s < m.n_states(); ++s) {
            CHECK(a.v[s] >= vpi[s] - slack);
            CHECK(a.v[s] >= 0.0);
            CHECK(a.v[s] <= max_value(gamma));
            CHECK(std::abs(a.v[s] - b.v[s]) <= loose.tolerance / (1 - gamma));
        }
    }
}
