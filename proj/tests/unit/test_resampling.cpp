#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "mechlab/errors.hpp"
#include "mechlab/resampling.hpp"
#include "mechlab/rng.hpp"
#include "mechlab/subset.hpp"

#include "test_util.hpp"

using namespace mechlab;

TEST_CASE("mass validation catches the failure modes") {
    CHECK(validate_subset_masses({0.1, 0.2, 0.3, 0.4}, 2).ok);

    DistributionDiagnostics zero = validate_subset_masses({0.0, 0.3, 0.3, 0.4}, 2);
    CHECK_FALSE(zero.ok);
    CHECK(zero.first_bad_mask.value() == 0);

    CHECK_FALSE(validate_subset_masses({0.1, 0.2, 0.3, 0.3}, 2).ok); // sums to 0.9
    CHECK_FALSE(validate_subset_masses({-0.1, 0.5, 0.3, 0.3}, 2).ok);
    CHECK_FALSE(validate_subset_masses({0.5, 0.5}, 2).ok); // wrong size
}

TEST_CASE("explicit table: coefficients are the mass ratios") {
    SubsetDistribution law(2, {0.1, 0.2, 0.3, 0.4});
    CHECK(law.coefficient(0, SubsetMask(0b01, 2)) == -1.0);
    CHECK(law.coefficient(1, SubsetMask(0b11, 2)) == -1.0);
    CHECK(law.coefficient(0, SubsetMask::empty(2)) == doctest::Approx(0.2 / 0.1));
    CHECK(law.coefficient(0, SubsetMask(0b10, 2)) == doctest::Approx(0.4 / 0.3));
    CHECK(law.coefficient(1, SubsetMask(0b01, 2)) == doctest::Approx(0.4 / 0.2));
    CHECK(law.precision() == doctest::Approx(0.4));
}

TEST_CASE("explicit table: sampling matches the masses") {
    SubsetDistribution law(2, {0.1, 0.2, 0.3, 0.4});
    CounterRng rng(17);
    const std::size_t trials = 100000;
    std::vector<std::size_t> hits(4, 0);
    for (std::size_t t = 0; t < trials; ++t) ++hits[law.sample(rng).bits()];
    for (std::uint32_t m = 0; m < 4; ++m)
        CHECK(testutil::binomial_within(hits[m], trials, law.masses()[m], 3.0));
}

TEST_CASE("explicit table rejects bad masses") {
    CHECK_THROWS_AS(SubsetDistribution(2, {0.0, 0.3, 0.3, 0.4}), ConfigError);
    CHECK_THROWS_AS(SubsetDistribution(2, {0.1, 0.2, 0.3}), ConfigError);
}

TEST_CASE("product law: closed forms match the generic definitions") {
    const double gamma = 0.3;
    ProductGammaDistribution law(gamma, 3);
    for (std::uint32_t bits = 0; bits < 8; ++bits) {
        SubsetMask m(bits, 3);
        const double k = static_cast<double>(m.size());
        CHECK(law.mass(m) ==
              doctest::Approx(std::pow(gamma, 3.0 - k) * std::pow(1.0 - gamma, k))
                  .epsilon(1e-14));
        for (std::size_t i = 0; i < 3; ++i) {
            const double expect = m.contains(i) ? -1.0 : (1.0 - gamma) / gamma;
            CHECK(law.coefficient(i, m) == doctest::Approx(expect).epsilon(1e-14));
        }
    }
    CHECK(law.precision() == doctest::Approx(std::pow(0.7, 3)).epsilon(1e-14));

    // and against an explicit table carrying the same masses
    std::vector<double> masses(8);
    for (std::uint32_t bits = 0; bits < 8; ++bits) masses[bits] = law.mass(SubsetMask(bits, 3));
    SubsetDistribution table(3, masses);
    for (std::uint32_t bits = 0; bits < 8; ++bits)
        for (std::size_t i = 0; i < 3; ++i)
            CHECK(table.coefficient(i, SubsetMask(bits, 3)) ==
                  doctest::Approx(law.coefficient(i, SubsetMask(bits, 3))).epsilon(1e-12));
}

TEST_CASE("product law: sampling keeps each agent with probability 1-gamma") {
    ProductGammaDistribution law(0.4, 5);
    CounterRng rng(23);
    const std::size_t trials = 100000;
    std::vector<std::size_t> kept(5, 0);
    std::size_t all_kept = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        SubsetMask m = law.sample(rng);
        for (std::size_t i = 0; i < 5; ++i)
            if (m.contains(i)) ++kept[i];
        if (m.is_full()) ++all_kept;
    }
    for (std::size_t i = 0; i < 5; ++i)
        CHECK(testutil::binomial_within(kept[i], trials, 0.6, 3.0));
    CHECK(testutil::binomial_within(all_kept, trials, std::pow(0.6, 5), 3.0));
}

TEST_CASE("product law rejects gamma outside (0,1)") {
    CHECK_THROWS_AS(ProductGammaDistribution(0.0, 2), std::invalid_argument);
    CHECK_THROWS_AS(ProductGammaDistribution(1.0, 2), std::invalid_argument);
    CHECK_THROWS_AS(ProductGammaDistribution(-0.2, 2), std::invalid_argument);
    CHECK_THROWS_AS(ProductGammaDistribution(1.3, 2), std::invalid_argument);
}

TEST_CASE("coefficients of any valid law average to zero") {
    CounterRng rng(31);
    for (std::size_t n = 2; n <= 4; ++n) {
        SubsetDistribution law(n, testutil::random_full_support_masses(n, rng));
        for (std::size_t i = 0; i < n; ++i) {
            double mean = 0.0;
            for (std::uint32_t bits = 0; bits < subset_count(n); ++bits) {
                SubsetMask m(bits, n);
                mean += law.mass(m) * law.coefficient(i, m);
            }
            CHECK(std::abs(mean) <= 1e-12);
        }
    }
}
