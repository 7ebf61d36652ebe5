#include "mechlab/records.hpp"

#include "mechlab/errors.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <sstream>
#include <system_error>

namespace mechlab::records {

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    if (res.ec != std::errc{}) throw NumericalError("records: failed to format double");
    return std::string(buf, res.ptr);
}

namespace {

double parse_double(const std::string& s) {
    double out = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw ConfigError("records: bad numeric field '" + s + "'");
    return out;
}

std::uint64_t parse_u64(const std::string& s) {
    std::uint64_t out = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw ConfigError("records: bad integer field '" + s + "'");
    return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    fields.push_back(cur);
    return fields;
}

// JSON has no literal for non-finite doubles (the library would emit null),
// so those go through as strings and come back via parse_double.
nlohmann::ordered_json json_double(double v) {
    if (std::isfinite(v)) return v;
    return format_double(v);
}

double double_from_json(const nlohmann::json& j) {
    if (j.is_string()) return parse_double(j.get<std::string>());
    return j.get<double>();
}

nlohmann::ordered_json row_to_json(const ResultRow& r) {
    nlohmann::ordered_json j;
    j["experiment"] = r.experiment;
    j["n"] = r.n;
    j["gamma"] = json_double(r.gamma);
    j["seed"] = r.seed;
    j["precision"] = json_double(r.precision);
    j["welfare_ratio"] = json_double(r.welfare_ratio);
    j["revenue_ratio"] = json_double(r.revenue_ratio);
    j["coeff_variance"] = json_double(r.coeff_variance);
    j["max_abs_coeff"] = json_double(r.max_abs_coeff);
    j["truth_residual_max"] = json_double(r.truth_residual_max);
    return j;
}

} // namespace

std::string to_csv(const std::vector<ResultRow>& rows) {
    std::ostringstream out;
    out << kCsvHeader << '\n';
    for (const auto& r : rows) {
        out << r.experiment << ',' << r.n << ',' << format_double(r.gamma) << ',' << r.seed << ','
            << format_double(r.precision) << ',' << format_double(r.welfare_ratio) << ','
            << format_double(r.revenue_ratio) << ',' << format_double(r.coeff_variance) << ','
            << format_double(r.max_abs_coeff) << ',' << format_double(r.truth_residual_max)
            << '\n';
    }
    return out.str();
}

std::string to_json(const std::vector<ResultRow>& rows) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : rows) arr.push_back(row_to_json(r));
    return arr.dump(2) + "\n";
}

std::vector<ResultRow> rows_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("records: empty CSV");
    if (line == std::string(kCsvHeader) + "\r") line.pop_back();
    if (line != kCsvHeader) throw ConfigError("records: unexpected CSV header '" + line + "'");
    std::vector<ResultRow> rows;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto f = split_csv_line(line);
        if (f.size() != 10)
            throw ConfigError("records: expected 10 fields, got " + std::to_string(f.size()));
        ResultRow r;
        r.experiment = f[0];
        r.n = static_cast<std::size_t>(parse_u64(f[1]));
        r.gamma = parse_double(f[2]);
        r.seed = parse_u64(f[3]);
        r.precision = parse_double(f[4]);
        r.welfare_ratio = parse_double(f[5]);
        r.revenue_ratio = parse_double(f[6]);
        r.coeff_variance = parse_double(f[7]);
        r.max_abs_coeff = parse_double(f[8]);
        r.truth_residual_max = parse_double(f[9]);
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<ResultRow> rows_from_json(const std::string& text) {
    nlohmann::json arr;
    try {
        arr = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("records: bad JSON: ") + e.what());
    }
    if (!arr.is_array()) throw ConfigError("records: JSON root must be an array");
    std::vector<ResultRow> rows;
    for (const auto& j : arr) {
        ResultRow r;
        r.experiment = j.at("experiment").get<std::string>();
        r.n = j.at("n").get<std::size_t>();
        r.gamma = double_from_json(j.at("gamma"));
        r.seed = j.at("seed").get<std::uint64_t>();
        r.precision = double_from_json(j.at("precision"));
        r.welfare_ratio = double_from_json(j.at("welfare_ratio"));
        r.revenue_ratio = double_from_json(j.at("revenue_ratio"));
        r.coeff_variance = double_from_json(j.at("coeff_variance"));
        r.max_abs_coeff = double_from_json(j.at("max_abs_coeff"));
        r.truth_residual_max = double_from_json(j.at("truth_residual_max"));
        rows.push_back(std::move(r));
    }
    return rows;
}

} // namespace mechlab::records
