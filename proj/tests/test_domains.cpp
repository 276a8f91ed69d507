#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "stateabs/domains.hpp"
#include "stateabs/oracle.hpp"
#include "stateabs/solver.hpp"

using namespace stateabs;

TEST_CASE("nchain defaults") {
    const DomainInstance d = nchain();
    CHECK(d.mdp.n_states() == 10);
    CHECK(d.mdp.n_actions() == 2);
    CHECK(d.mdp.gamma() == 0.95);
    CHECK(d.initial_state == 0);
    using namespace nchain_actions;
    // Advance from 3: 0.8 to 4, 0.2 slip back to 0 paying 0.2.
    CHECK(d.mdp.transition(3, kAdvance, 4) == doctest::Approx(0.8));
    CHECK(d.mdp.transition(3, kAdvance, 0) == doctest::Approx(0.2));
    CHECK(d.mdp.reward(3, kAdvance) == doctest::Approx(0.04));
    CHECK(d.mdp.reward(3, kReturn) == doctest::Approx(0.16));
    // Entering the last state pays 1; the end of the chain loops on advance.
    CHECK(d.mdp.reward(8, kAdvance) == doctest::Approx(0.8 + 0.04));
    CHECK(d.mdp.transition(9, kAdvance, 9) == doctest::Approx(0.8));
    CHECK(d.mdp.reward(9, kAdvance) == doctest::Approx(0.84));
}

TEST_CASE("nchain without slip is deterministic") {
    const DomainInstance d = nchain({.slip = 0.0});
    for (State s = 0; s + 1 < 10; ++s) CHECK(d.mdp.transition(s, nchain_actions::kAdvance, s + 1) == 1.0);
    CHECK_THROWS_AS(nchain({.n = 1}), std::invalid_argument);
    CHECK_THROWS_AS(nchain({.slip = 1.5}), std::invalid_argument);
}

TEST_CASE("nchain optimum matches enumeration at the initial state") {
    const DomainInstance d = nchain();
    const Solution sol = solve(d.mdp);
    const auto exact = oracle::enumerate_solve(d.mdp);
    CHECK(std::abs(sol.v[d.initial_state] - exact.v_star[d.initial_state]) < 1e-6);
    CHECK(sol.policy[d.initial_state] == exact.best_policy[d.initial_state]);
}

TEST_CASE("upworld") {
    const DomainInstance d = upworld();
    CHECK(d.mdp.n_states() == 40);
    CHECK(d.mdp.n_actions() == 3);
    CHECK(d.initial_state == 0);
    CHECK_THROWS_AS(upworld({.rows = 0}), std::invalid_argument);

    for (std::size_t rows : {1, 2, 5, 10}) {
        for (std::size_t cols : {1, 3, 4, 7}) {
            const DomainInstance u = upworld({.rows = rows, .cols = cols});
            const Solution sol = solve(u.mdp);
            for (State s = 0; s < u.mdp.n_states(); ++s) {
                const auto row = sol.q.row(s);
                CHECK(row[upworld_actions::kUp] == *std::max_element(row.begin(), row.end()));
                CHECK(sol.policy[s] == upworld_actions::kUp);
            }
        }
    }
}

TEST_CASE("upworld 2x2 Q is constant within rows and differs across them") {
    const DomainInstance d = upworld({.rows = 2, .cols = 2});
    const Solution sol = solve(d.mdp);
    for (Action a = 0; a < 3; ++a) {
        CHECK(sol.q(0, a) == sol.q(1, a));
        CHECK(sol.q(2, a) == sol.q(3, a));
    }
    // Top row: every action pays 1 forever -> 20. Bottom row: up pays 1 then 20 discounted.
    CHECK(sol.q(2, upworld_actions::kUp) == doctest::Approx(20.0));
    CHECK(sol.q(0, upworld_actions::kUp) == doctest::Approx(20.0));
    CHECK(sol.q(0, upworld_actions::kLeft) == doctest::Approx(19.0));
    CHECK(sol.q(0, upworld_actions::kLeft) != sol.q(2, upworld_actions::kLeft));
}

TEST_CASE("upworld row constancy on the default instance") {
    const DomainInstance d = upworld();
    const Solution sol = solve(d.mdp);
    double spread = 0.0;
    for (State s = 0; s < 40; ++s) {
        for (Action a = 0; a < 3; ++a) spread = std::max(spread, std::abs(sol.q(s, a) - sol.q((s / 4) * 4, a)));
    }
    CHECK(spread < 4e-10 / 0.05);
}

TEST_CASE("taxi") {
    const DomainInstance d = taxi();
    // 25 cells x (4 depots + aboard) x 4 destinations + goal.
    CHECK(d.mdp.n_states() == 501);
    CHECK(d.mdp.n_actions() == 6);
    CHECK(d.params.at("n_states") == "501");

    using namespace taxi_actions;
    const State goal = 500;
    CHECK(d.mdp.label(goal) == "goal");
    for (Action a = 0; a < 6; ++a) {
        CHECK(d.mdp.transition(goal, a, goal) == 1.0);
        CHECK(d.mdp.reward(goal, a) == 0.0);
    }
    // Start is at (0,0), passenger at depot 0 (0,4), which is not here.
    CHECK(d.mdp.label(d.initial_state) == "(0,0) p0:0>1");
    CHECK(d.mdp.transition(d.initial_state, kPickup, d.initial_state) == 1.0);
    CHECK(d.mdp.reward(d.initial_state, kPickup) == 0.0);
    CHECK(d.mdp.transition(d.initial_state, kDropoff, d.initial_state) == 1.0);

    const Solution sol = solve(d.mdp);
    // 4 north, pickup, 4 east, dropoff: reward on the 10th action.
    CHECK(sol.v[d.initial_state] == doctest::Approx(std::pow(0.95, 9)));
    CHECK(sol.v[d.initial_state] > 0.0);

    // Only completing dropoffs pay.
    std::size_t paying = 0;
    for (State s = 0; s < 501; ++s) {
        for (Action a = 0; a < 6; ++a) {
            if (d.mdp.reward(s, a) > 0.0) {
                ++paying;
                CHECK(a == kDropoff);
                CHECK(d.mdp.transition(s, a, goal) == 1.0);
            }
        }
    }
    CHECK(paying == 4);  // taxi at each destination depot with the passenger aboard
}

TEST_CASE("taxi geometry checks") {
    CHECK_THROWS_AS(taxi({.depots = {{9, 9}}}), std::invalid_argument);
    CHECK_THROWS_AS(taxi({.depots = {{1, 1}, {1, 1}}}), std::invalid_argument);
    CHECK_THROWS_AS(taxi({.n_passengers = 0}), std::invalid_argument);
    CHECK_THROWS_AS(taxi({.n_passengers = 3}), std::invalid_argument);  // too large for dense storage
    const DomainInstance two = taxi({.width = 3, .height = 3, .depots = {{0, 0}, {2, 2}}, .n_passengers = 2});
    CHECK(validate(two.mdp).empty());
    const Solution sol = solve(two.mdp);
    CHECK(sol.v[two.initial_state] > 0.0);
}

TEST_CASE("minefield") {
    const MinefieldParams p{.seed = 17};
    const DomainInstance d = minefield(p);
    CHECK(d.mdp.n_states() == 40);
    CHECK(d.mdp.n_actions() == 4);
    const auto mines = minefield_mines(p);
    CHECK(mines.size() == 5);
    CHECK(std::set<State>(mines.begin(), mines.end()).size() == 5);

    const DomainInstance again = minefield(p);
    CHECK(again.mdp == d.mdp);
    CHECK(again.params == d.params);

    using namespace minefield_actions;
    // Up from the top-left corner: 0.99 stays (pays 1), 0.005 wall-left stays, 0.005 right.
    const State corner = 9 * 4;
    const bool right_mined = std::count(mines.begin(), mines.end(), corner + 1) > 0;
    const bool corner_mined = std::count(mines.begin(), mines.end(), corner) > 0;
    const double expected = 0.99 * 1.0 + 0.005 * (corner_mined ? 0.0 : 0.2) + 0.005 * (right_mined ? 0.0 : 0.2);
    CHECK(d.mdp.reward(corner, kUp) == doctest::Approx(expected));
    CHECK(d.mdp.transition(corner, kUp, corner) == doctest::Approx(0.995));

    const DomainInstance det = minefield({.slip = 0.0, .seed = 17});
    for (State s = 0; s < 40; ++s) {
        for (Action a = 0; a < 4; ++a) CHECK(det.mdp.successors(s, a).size() == 1);
    }
    CHECK_THROWS_AS(minefield({.rows = 2, .cols = 2, .n_mines = 5}), std::invalid_argument);
}

TEST_CASE("minefield mines can land anywhere including the top row") {
    std::set<State> seen;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        for (State m : minefield_mines({.seed = seed})) seen.insert(m);
    }
    CHECK(seen.size() == 40);
}

TEST_CASE("random mdp") {
    const DomainInstance d = random_mdp();
    CHECK(d.mdp.n_states() == 100);
    CHECK(d.mdp.n_actions() == 3);
    for (State s = 0; s < 100; ++s) {
        for (Action a = 0; a < 3; ++a) {
            const auto succ = d.mdp.successors(s, a);
            REQUIRE(succ.size() == 2);
            CHECK(succ[0].probability == 0.5);
            CHECK(succ[1].probability == 0.5);
            CHECK(d.mdp.reward(s, a) >= 0.0);
            CHECK(d.mdp.reward(s, a) <= 1.0);
        }
    }
    CHECK(random_mdp({.seed = 4}).mdp == random_mdp({.seed = 4}).mdp);
    CHECK_FALSE(random_mdp({.seed = 4}).mdp == random_mdp({.seed = 5}).mdp);
    CHECK_THROWS_AS(random_mdp({.n_states = 1}), std::invalid_argument);
}

TEST_CASE("make_domain") {
    for (const auto& name : domain_names()) CHECK(make_domain(name, 1).name == name);
    CHECK_THROWS_AS(make_domain("gridworld"), std::invalid_argument);
}
