#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace mechlab::cli {

// Flags shared by the subcommands; optional fields override config values.
struct CommonOptions {
    std::string config;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> samples;
    std::optional<double> gamma;
    std::string gammas;    // "start:stop:step"
    std::string case_name; // scenario selector
    std::optional<std::size_t> agents;
};

// "0.1:0.9:0.1" -> {0.1, ..., 0.9}; every value must land in (0, 1).
std::vector<double> parse_gamma_range(const std::string& spec);

// Accepts a literal path, `<name>.json`, or `configs/<name>.json`.
std::string resolve_config(const std::string& name);

// Dispatches on the "experiment" field of the config document.
int cmd_run(const CommonOptions& opt);
int cmd_sweep(const CommonOptions& opt);
int cmd_scenario_ppc(const CommonOptions& opt);

// Runs the body and maps failures onto the documented exit codes:
// 1 invalid config, 2 numerical failure, 3 property violation.
int guarded(const std::function<int()>& body);

} // namespace mechlab::cli
