#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mechlab::records {

// One experiment result row. The CSV column order is part of the output
// contract; the JSON mirror uses the same field names.
struct ResultRow {
    std::string experiment;
    std::size_t n = 0;
    double gamma = 0.0;
    std::uint64_t seed = 0;
    double precision = 0.0;
    double welfare_ratio = 0.0;
    double revenue_ratio = 0.0;
    double coeff_variance = 0.0;
    double max_abs_coeff = 0.0;
    double truth_residual_max = 0.0;
};

inline constexpr const char* kCsvHeader =
    "experiment,n,gamma,seed,precision,welfare_ratio,revenue_ratio,"
    "coeff_variance,max_abs_coeff,truth_residual_max";

// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double v);

std::string to_csv(const std::vector<ResultRow>& rows);
std::string to_json(const std::vector<ResultRow>& rows);

// Strict parsers used by the round-trip tests and by tooling.
std::vector<ResultRow> rows_from_csv(const std::string& text);
std::vector<ResultRow> rows_from_json(const std::string& text);

} // namespace mechlab::records
