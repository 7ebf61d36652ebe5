#include <doctest.h>

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "mechlab/errors.hpp"
#include "mechlab/metrics.hpp"
#include "mechlab/records.hpp"
#include "mechlab/resampling.hpp"

using namespace mechlab;
using records::ResultRow;

namespace {
ResultRow sample_row() {
    ResultRow r;
    r.experiment = "run-midr";
    r.n = 3;
    r.gamma = 0.3;
    r.seed = 123456789012345ULL;
    r.precision = 0.342999999999999971;
    r.welfare_ratio = 1.0 / 3.0;
    r.revenue_ratio = 0.512;
    r.coeff_variance = 7.0 / 3.0;
    r.max_abs_coeff = 7.0 / 3.0;
    r.truth_residual_max = 3.5e-17;
    return r;
}
} // namespace

TEST_CASE("csv header is the exact column contract") {
    CHECK(std::string(records::kCsvHeader) ==
          "experiment,n,gamma,seed,precision,welfare_ratio,revenue_ratio,"
          "coeff_variance,max_abs_coeff,truth_residual_max");
    CHECK(records::to_csv({}) == std::string(records::kCsvHeader) + "\n");
}

TEST_CASE("doubles format to shortest round-trip strings") {
    for (double v : {0.1, 1.0 / 3.0, 0.0, -2.5, 1e-300, 1.7976931348623157e308, 0.512}) {
        const std::string s = records::format_double(v);
        CHECK(std::stod(s) == v);
    }
    CHECK(records::format_double(0.512) == "0.512");
    CHECK(records::format_double(0.0) == "0");
}

TEST_CASE("csv round trip is lossless") {
    std::vector<ResultRow> rows = {sample_row()};
    rows.push_back(sample_row());
    rows[1].experiment = "sweep";
    rows[1].gamma = 0.7000000000000001;

    const std::string csv = records::to_csv(rows);
    std::vector<ResultRow> back = records::rows_from_csv(csv);
    REQUIRE(back.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(back[i].experiment == rows[i].experiment);
        CHECK(back[i].n == rows[i].n);
        CHECK(back[i].gamma == rows[i].gamma);
        CHECK(back[i].seed == rows[i].seed);
        CHECK(back[i].precision == rows[i].precision);
        CHECK(back[i].welfare_ratio == rows[i].welfare_ratio);
        CHECK(back[i].revenue_ratio == rows[i].revenue_ratio);
        CHECK(back[i].coeff_variance == rows[i].coeff_variance);
        CHECK(back[i].max_abs_coeff == rows[i].max_abs_coeff);
        CHECK(back[i].truth_residual_max == rows[i].truth_residual_max);
    }
    CHECK(records::to_csv(back) == csv);
}

TEST_CASE("json mirrors the csv fields losslessly") {
    std::vector<ResultRow> rows = {sample_row()};
    const std::string json_text = records::to_json(rows);
    std::vector<ResultRow> back = records::rows_from_json(json_text);
    REQUIRE(back.size() == 1);
    CHECK(back[0].gamma == rows[0].gamma);
    CHECK(back[0].truth_residual_max == rows[0].truth_residual_max);
    CHECK(records::to_json(back) == json_text);

    // csv -> rows -> json -> rows -> csv closes the loop
    std::vector<ResultRow> via_csv = records::rows_from_csv(records::to_csv(rows));
    CHECK(records::to_json(via_csv) == json_text);
}

TEST_CASE("non-finite ratios survive both formats") {
    // a rule where nobody is pivotal has zero benchmark revenue, so the ratio
    // can legitimately be +inf; JSON carries it as a string
    ResultRow r = sample_row();
    r.revenue_ratio = std::numeric_limits<double>::infinity();

    std::vector<ResultRow> back = records::rows_from_csv(records::to_csv({r}));
    REQUIRE(back.size() == 1);
    CHECK(back[0].revenue_ratio == r.revenue_ratio);

    const std::string json_text = records::to_json({r});
    CHECK(json_text.find("\"inf\"") != std::string::npos);
    CHECK(json_text.find("null") == std::string::npos);
    back = records::rows_from_json(json_text);
    REQUIRE(back.size() == 1);
    CHECK(back[0].revenue_ratio == r.revenue_ratio);
    CHECK(records::to_json(back) == json_text);
}

TEST_CASE("parsers reject malformed input") {
    CHECK_THROWS_AS(records::rows_from_csv(""), ConfigError);
    CHECK_THROWS_AS(records::rows_from_csv("wrong,header\n"), ConfigError);
    const std::string header = std::string(records::kCsvHeader) + "\n";
    CHECK_THROWS_AS(records::rows_from_csv(header + "a,b\n"), ConfigError);
    CHECK_THROWS_AS(records::rows_from_csv(header + "x,1,zzz,0,0,0,0,0,0,0\n"), ConfigError);
    CHECK_THROWS_AS(records::rows_from_json("{not json"), ConfigError);
    CHECK_THROWS_AS(records::rows_from_json("{\"a\": 1}"), ConfigError);
}

TEST_CASE("closed-form row values for gamma=0.5, n=2") {
    ProductGammaDistribution law(0.5, 2);
    metrics::RiskStats rs = metrics::risk_stats(law);
    ResultRow row;
    row.experiment = "sweep";
    row.n = 2;
    row.gamma = 0.5;
    row.precision = metrics::precision(law);
    row.coeff_variance = rs.max_variance;
    CHECK(row.precision == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(row.coeff_variance == doctest::Approx(1.0).epsilon(1e-12));
    const std::string csv = records::to_csv({row});
    CHECK(csv.find("sweep,2,0.5,0,0.25,") != std::string::npos);
    CHECK(csv.find(",1,") != std::string::npos);
}
