#include <doctest.h>

#include <stdexcept>
#include <vector>

#include "mechlab/allocation.hpp"
#include "mechlab/errors.hpp"
#include "mechlab/generators.hpp"
#include "mechlab/rng.hpp"
#include "mechlab/types.hpp"

#include "test_util.hpp"

using namespace mechlab;

TEST_CASE("posted threshold: step level and exact own-bid integral") {
    PostedThreshold rule({0.5, 0.0}, 2.0);
    CHECK(rule.a_max() == 2.0);

    std::vector<double> lv = rule.levels(BidVector({0.49, 0.0}));
    CHECK(lv[0] == 0.0);
    CHECK(lv[1] == 2.0); // threshold zero always wins

    lv = rule.levels(BidVector({0.5, 1.0}));
    CHECK(lv[0] == 2.0);

    CHECK(rule.own_bid_integral(0, BidVector({0.8, 0.0}), 0.8).value() ==
          doctest::Approx(2.0 * 0.3).epsilon(1e-12));
    CHECK(rule.own_bid_integral(0, BidVector({0.8, 0.0}), 0.3).value() == 0.0);
    CHECK(rule.own_bid_integral(1, BidVector({0.8, 0.7}), 0.7).value() ==
          doctest::Approx(2.0 * 0.7).epsilon(1e-12));
}

TEST_CASE("top-k by score: selection, ties, monotonicity") {
    TopKByScore rule(2, {1.0, 1.0, 1.0, 1.0});
    std::vector<double> lv = rule.levels(BidVector({0.1, 0.9, 0.5, 0.9}));
    CHECK(lv[0] == 0.0);
    CHECK(lv[1] == 1.0);
    CHECK(lv[2] == 0.0);
    CHECK(lv[3] == 1.0); // 0.9 tie: both beat 0.5

    // exact tie for the last seat goes to the lower index
    lv = rule.levels(BidVector({0.5, 0.9, 0.5, 0.1}));
    CHECK(lv[0] == 1.0);
    CHECK(lv[2] == 0.0);

    CounterRng rng(5);
    CHECK(monotonicity_probe(rule, 1.0, 2000, rng) >= 0.0);

    // score weights reorder the ranking
    TopKByScore weighted(1, {10.0, 1.0});
    lv = weighted.levels(BidVector({0.2, 1.0}));
    CHECK(lv[0] == 1.0);
    CHECK(lv[1] == 0.0);
}

TEST_CASE("grid step: cells are right-continuous and integrals are exact") {
    // one agent, thresholds {0.25, 0.5}: levels 0 / 0.4 / 1.0
    GridStepAllocation rule({{0.25, 0.5}}, {{0.0, 0.4, 1.0}});
    CHECK(rule.cell_index(0, 0.0) == 0);
    CHECK(rule.cell_index(0, 0.25) == 1); // threshold belongs to the upper cell
    CHECK(rule.cell_index(0, 0.49) == 1);
    CHECK(rule.cell_index(0, 0.5) == 2);

    CHECK(rule.levels(BidVector({0.25}))[0] == 0.4);

    const double exact = 0.25 * 0.0 + 0.25 * 0.4 + 0.3 * 1.0;
    CHECK(rule.own_bid_integral(0, BidVector({0.8}), 0.8).value() ==
          doctest::Approx(exact).epsilon(1e-12));

    const double riemann =
        testutil::riemann_own_bid_integral(rule, BidVector({0.8}), 0, 0.8, 200000);
    CHECK(rule.own_bid_integral(0, BidVector({0.8}), 0.8).value() ==
          doctest::Approx(riemann).epsilon(1e-4));
}

TEST_CASE("grid step: own-axis monotonicity is enforced at construction") {
    CHECK_THROWS_AS(GridStepAllocation({{0.5}}, {{0.7, 0.2}}), ConfigError);
    CHECK_THROWS_AS(GridStepAllocation({{0.5}}, {{0.2, 1.5}}), ConfigError);
    CHECK_THROWS_AS(GridStepAllocation({{0.5, 0.5}}, {{0.0, 0.1, 0.2}}), ConfigError);
    CHECK_THROWS_AS(GridStepAllocation({{-0.5}}, {{0.0, 1.0}}), ConfigError);

    // cross-agent effects may be arbitrary; only the own axis must be monotone
    CHECK_NOTHROW(GridStepAllocation({{0.5}, {0.5}},
                                     {{0.0, 0.9, 0.1, 1.0}, {0.3, 0.5, 0.8, 0.9}}));
}

TEST_CASE("grid step: two-agent integral respects the other agent's cell") {
    GridStepAllocation rule({{0.5}, {0.4}}, {{0.1, 0.2, 0.6, 0.9}, {0.0, 0.0, 0.0, 0.0}});
    // agent 0's table rows by (own cell, other cell): low-other column is {0.1, 0.6}
    BidVector low_other({0.9, 0.1});
    CHECK(rule.levels(low_other)[0] == 0.6);
    const double integral = rule.own_bid_integral(0, low_other, 0.9).value();
    CHECK(integral == doctest::Approx(0.5 * 0.1 + 0.4 * 0.6).epsilon(1e-12));

    BidVector high_other({0.9, 0.4});
    CHECK(rule.levels(high_other)[0] == 0.9);
    CHECK(rule.own_bid_integral(0, high_other, 0.9).value() ==
          doctest::Approx(0.5 * 0.2 + 0.4 * 0.9).epsilon(1e-12));
}

TEST_CASE("generated grid rules are monotone") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        CounterRng rng(seed);
        GridStepAllocation rule = gen::random_grid_step(3, 3, rng);
        CounterRng probe_rng(seed + 100);
        CHECK(monotonicity_probe(rule, 1.3, 3000, probe_rng) >= 0.0);
    }
}

TEST_CASE("counted allocation tracks evaluations") {
    PostedThreshold inner({0.5}, 1.0);
    CountedAllocation counted(inner);
    CHECK(counted.calls() == 0);
    (void)counted.levels(BidVector({0.6}));
    (void)counted.levels(BidVector({0.7}));
    CHECK(counted.calls() == 2);
    CHECK_FALSE(enforce_single_call(counted.calls()));
}
