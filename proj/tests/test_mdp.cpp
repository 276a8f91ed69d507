#include <doctest.h>

#include <random>

#include "stateabs/domains.hpp"
#include "stateabs/io.hpp"
#include "stateabs/mdp.hpp"
#include "stateabs/oracle.hpp"
#include "support.hpp"

using namespace stateabs;
using stateabs::testing::tables;

namespace {

bool has(const std::vector<Violation>& vs, ViolationKind kind) {
    for (const auto& v : vs) {
        if (v.kind == kind) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("validate accepts the single-state self loop") {
    CHECK(validate(tables(0.95, {{1.0}}, {{{1.0}}})).empty());
    CHECK_NOTHROW(TabularMdp(tables(0.95, {{1.0}}, {{{1.0}}})));
}

TEST_CASE("validate reports a row that does not sum to one") {
    const auto vs = validate(tables(0.9, {{0.0}, {0.0}}, {{{0.5, 0.4}}, {{0.0, 1.0}}}));
    REQUIRE(vs.size() == 1);
    CHECK(vs[0].kind == ViolationKind::RowSum);
    CHECK(vs[0].message.find("row sum != 1") != std::string::npos);
}

TEST_CASE("validate reports rewards outside [0,1]") {
    const auto vs = validate(tables(0.9, {{1.5}}, {{{1.0}}}));
    REQUIRE(vs.size() == 1);
    CHECK(vs[0].kind == ViolationKind::RewardRange);
    CHECK(vs[0].message.find("reward outside [0,1]") != std::string::npos);
    CHECK(has(validate(tables(0.9, {{-0.1}}, {{{1.0}}})), ViolationKind::RewardRange));
}

TEST_CASE("validate covers discount, probability range, shape and labels") {
    CHECK(has(validate(tables(1.0, {{0.0}}, {{{1.0}}})), ViolationKind::Discount));
    CHECK(has(validate(tables(-0.1, {{0.0}}, {{{1.0}}})), ViolationKind::Discount));
    CHECK(has(validate(tables(0.5, {{0.0}, {0.0}}, {{{1.5, -0.5}}, {{0.0, 1.0}}})), ViolationKind::ProbabilityRange));

    MdpTables bad_shape = tables(0.5, {{0.0}}, {{{1.0}}});
    bad_shape.transitions.push_back(0.0);
    CHECK(has(validate(bad_shape), ViolationKind::TableShape));

    MdpTables labelled = tables(0.5, {{0.0}}, {{{1.0}}});
    labelled.labels = {"a", "b"};
    CHECK(has(validate(labelled), ViolationKind::LabelCount));

    CHECK(has(validate(MdpTables{}), ViolationKind::EmptyStateSpace));
}

TEST_CASE("construction rejects invalid tables with the violations attached") {
    try {
        TabularMdp m(tables(0.9, {{1.5}}, {{{0.9}}}));
        FAIL("expected InvalidMdp");
    } catch (const InvalidMdp& e) {
        CHECK(e.violations().size() == 2);
    }
}

TEST_CASE("max_value is 1/(1-gamma)") {
    CHECK(max_value(0.95) == doctest::Approx(20.0).epsilon(1e-12));
    CHECK(max_value(0.5) == 2.0);
    CHECK(max_value(0.0) == 1.0);
    CHECK(max_value(stateabs::testing::self_loop(1.0, 0.5)) == 2.0);
}

TEST_CASE("successor lists match the dense rows") {
    const TabularMdp m = random_mdp({.n_states = 12, .n_actions = 2, .seed = 3}).mdp;
    for (State s = 0; s < m.n_states(); ++s) {
        for (Action a = 0; a < m.n_actions(); ++a) {
            double total = 0.0;
            for (const auto& [next, p] : m.successors(s, a)) {
                CHECK(p == m.transition(s, a, next));
                total += p;
            }
            CHECK(total == doctest::Approx(1.0));
        }
    }
}

TEST_CASE("every generated domain validates") {
    for (const auto& name : domain_names()) {
        CAPTURE(name);
        const DomainInstance d = make_domain(name, 7);
        CHECK(validate(d.mdp).empty());
        CHECK(d.initial_state < d.mdp.n_states());
    }
}

TEST_CASE("JSON round trip preserves every field") {
    // Property: serialize then parse yields an identical MDP, over random
    // instances and the benchmark domains.
    std::vector<TabularMdp> cases;
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        cases.push_back(oracle::random_instance(seed, 1 + seed % 6, 1 + seed % 3, 0.5 + 0.01 * static_cast<double>(seed)));
    }
    cases.push_back(taxi({.width = 3, .height = 2, .depots = {{0, 0}, {2, 1}}}).mdp);
    cases.push_back(minefield({.seed = 11}).mdp);
    for (const auto& m : cases) {
        const std::string text = io::to_json(m).dump();
        const TabularMdp back = io::mdp_from_json(io::json::parse(text));
        CHECK(back == m);
    }
}

TEST_CASE("JSON parsing reports malformed documents") {
    using io::json;
    CHECK_THROWS_AS(io::mdp_from_json(json::object()), io::FormatError);
    json j = io::to_json(stateabs::testing::self_loop(0.5, 0.9));
    j["transitions"][0][0] = json::array({0.5, 0.5});
    CHECK_THROWS_AS(io::mdp_from_json(j), io::FormatError);
    j = io::to_json(stateabs::testing::self_loop(0.5, 0.9));
    j["rewards"][0][0] = 2.0;
    CHECK_THROWS_AS(io::mdp_from_json(j), InvalidMdp);
}
