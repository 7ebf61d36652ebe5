#include "mechlab/experiments.hpp"

#include "mechlab/errors.hpp"
#include "mechlab/generators.hpp"
#include "mechlab/instance.hpp"
#include "mechlab/metrics.hpp"
#include "mechlab/oracle.hpp"
#include "mechlab/payments.hpp"
#include "mechlab/ppc.hpp"
#include "mechlab/records.hpp"
#include "mechlab/reduction_midr.hpp"
#include "mechlab/reduction_sp.hpp"
#include "mechlab/resampling.hpp"
#include "mechlab/rng.hpp"
#include "mechlab/types.hpp"
#include "mechlab/verify.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace mechlab::cli {

namespace {

constexpr double kDefaultGamma = 0.3;

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cli: cannot open '" + path.string() + "' for writing");
    out << content;
}

void emit_records(const std::vector<records::ResultRow>& rows, const fs::path& out_dir,
                  const std::string& stem) {
    const std::string csv = records::to_csv(rows);
    write_file(out_dir / (stem + ".csv"), csv);
    write_file(out_dir / (stem + ".json"), records::to_json(rows));
    std::cout << csv;
    std::cout << "wrote " << (out_dir / (stem + ".csv")).string() << "\n";
    std::cout << "wrote " << (out_dir / (stem + ".json")).string() << "\n";
}

void emit_report(const ordered_json& report, const fs::path& out_dir, const std::string& stem) {
    const std::string text = report.dump(2) + "\n";
    write_file(out_dir / (stem + ".json"), text);
    std::cout << text;
    std::cout << "wrote " << (out_dir / (stem + ".json")).string() << "\n";
}

json load_config(const CommonOptions& opt) {
    if (opt.config.empty()) throw ConfigError("cli: --config is required for this command");
    const std::string path = resolve_config(opt.config);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cli: cannot read config '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("cli: bad JSON in '" + path + "': " + e.what());
    }
}

std::uint64_t effective_seed(const json& cfg, const CommonOptions& opt) {
    if (opt.seed) return *opt.seed;
    if (cfg.contains("seed")) return cfg.at("seed").get<std::uint64_t>();
    return 0;
}

double effective_gamma(const json& cfg, const CommonOptions& opt) {
    double g = kDefaultGamma;
    if (cfg.contains("gamma")) g = cfg.at("gamma").get<double>();
    if (opt.gamma) g = *opt.gamma;
    if (!(g > 0.0 && g < 1.0)) throw ConfigError("cli: gamma must lie strictly in (0, 1)");
    return g;
}

std::size_t effective_count(const json& cfg, const CommonOptions& opt, const char* key,
                            std::size_t fallback) {
    std::size_t c = fallback;
    if (cfg.contains(key)) c = cfg.at(key).get<std::size_t>();
    if (opt.samples) c = *opt.samples;
    if (c == 0 || c > 100'000'000) throw ConfigError("cli: unreasonable sample count");
    return c;
}

MidrInstance instance_from_json(const json& spec) {
    const std::string type = spec.value("type", std::string("single-item"));
    if (type == "single-item") {
        return gen::single_item_instance(spec.value("high", 10.0), spec.value("low", 7.0));
    }
    if (type == "random") {
        CounterRng rng(spec.value("seed", std::uint64_t{1}));
        CounterRng child = rng.derive(0x115);
        return gen::random_midr_instance(spec.at("agents").get<std::size_t>(),
                                         spec.at("outcomes").get<std::size_t>(),
                                         spec.at("ranges").get<std::size_t>(), child);
    }
    if (type == "inline") {
        std::vector<std::string> labels = spec.at("labels").get<std::vector<std::string>>();
        auto rows = spec.at("values").get<std::vector<std::vector<double>>>();
        auto range = spec.at("range").get<std::vector<std::vector<double>>>();
        return MidrInstance(std::move(labels), ValuationMatrix(rows), std::move(range));
    }
    throw ConfigError("cli: unknown instance type '" + type + "'");
}

ValuationMatrix bids_from_json(const json& cfg, const MidrInstance& inst) {
    if (cfg.contains("bids")) {
        auto rows = cfg.at("bids").get<std::vector<std::vector<double>>>();
        ValuationMatrix bids(rows);
        if (bids.agents() != inst.agents() || bids.outcomes() != inst.outcomes())
            throw ConfigError("cli: bids shape does not match the instance");
        return bids;
    }
    ValuationMatrix bids = inst.valuations();
    if (cfg.contains("misreport")) {
        const json& m = cfg.at("misreport");
        bids = bids.with_scaled_row(m.at("agent").get<std::size_t>(),
                                    m.at("factor").get<double>());
    }
    return bids;
}

TableAllocation table_from_json(const json& spec) {
    const std::size_t agents = spec.at("agents").get<std::size_t>();
    auto rows = spec.at("rows").get<std::vector<std::vector<double>>>();
    return TableAllocation(agents, std::move(rows));
}

// Threshold rule expressed on the exactly-verifiable grid family: one step
// per agent at its threshold (none when the threshold is zero).
GridStepAllocation posted_grid(const std::vector<double>& thresholds, double weight) {
    const std::size_t n = thresholds.size();
    std::vector<std::vector<double>> axes(n);
    std::vector<std::size_t> dims(n, 1);
    std::size_t total = 1;
    for (std::size_t a = 0; a < n; ++a) {
        if (thresholds[a] > 0.0) axes[a] = {thresholds[a]};
        dims[a] = axes[a].size() + 1;
        total *= dims[a];
    }
    std::vector<std::vector<double>> tables(n, std::vector<double>(total, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t stride = 1;
        for (std::size_t a = i + 1; a < n; ++a) stride *= dims[a];
        for (std::size_t f = 0; f < total; ++f) {
            const std::size_t own = (f / stride) % dims[i];
            tables[i][f] = (axes[i].empty() || own == 1) ? weight : 0.0;
        }
    }
    return GridStepAllocation(std::move(axes), std::move(tables), weight);
}

GridStepAllocation allocation_from_json(const json& spec) {
    const std::string type = spec.value("type", std::string("grid-step"));
    if (type == "grid-step") {
        CounterRng rng(spec.value("seed", std::uint64_t{1}));
        CounterRng child = rng.derive(0xA110C);
        return gen::random_grid_step(spec.at("agents").get<std::size_t>(),
                                     spec.value("max_thresholds", std::size_t{3}), child);
    }
    if (type == "posted-threshold") {
        return posted_grid(spec.at("thresholds").get<std::vector<double>>(),
                           spec.value("weight", 1.0));
    }
    throw ConfigError("cli: unknown allocation type '" + type + "'");
}

BidVector sp_bids_from_json(const json& cfg, std::size_t agents, std::uint64_t seed) {
    if (cfg.contains("bids")) {
        BidVector bids(cfg.at("bids").get<std::vector<double>>());
        if (bids.size() != agents) throw ConfigError("cli: bids size does not match the rule");
        if (!bids.all_nonnegative()) throw ConfigError("cli: bids must be nonnegative");
        return bids;
    }
    CounterRng rng(seed);
    CounterRng child = rng.derive(0xB1D5);
    return gen::random_bids(agents, 1.2, child);
}

records::ResultRow midr_row(const std::string& experiment, const MidrOracle& oracle,
                            const ProductGammaDistribution& law, std::uint64_t seed) {
    metrics::MetricsRecord m = metrics::midr_metrics(oracle, law);
    records::ResultRow row;
    row.experiment = experiment;
    row.n = oracle.agent_count();
    row.gamma = law.gamma();
    row.seed = seed;
    row.precision = m.precision;
    row.welfare_ratio = m.welfare_ratio;
    row.revenue_ratio = m.revenue_ratio;
    row.coeff_variance = m.coeff_variance;
    row.max_abs_coeff = m.max_abs_coeff;
    row.truth_residual_max = verify::midr_truthfulness_max_residual(oracle, law);
    return row;
}

int run_midr_experiment(const json& cfg, const CommonOptions& opt) {
    const double gamma = effective_gamma(cfg, opt);
    const std::uint64_t seed = effective_seed(cfg, opt);
    const std::size_t replicates = effective_count(cfg, opt, "replicates", 100);

    MidrInstance inst = instance_from_json(cfg.value("instance", json{{"type", "single-item"}}));
    ValuationMatrix bids = bids_from_json(cfg, inst);
    InstanceOracle oracle(inst, bids);
    ProductGammaDistribution law(gamma, inst.agents());

    CounterRng root(seed);
    for (std::size_t r = 0; r < replicates; ++r) {
        CounterRng rng = root.derive(r);
        ReductionRun run = run_optmidr(oracle, gamma, rng);
        enforce_single_call(run);
    }

    emit_records({midr_row("run-midr", oracle, law, seed)}, opt.out_dir, "run_midr");
    return 0;
}

int verify_experiment(const json& cfg, const CommonOptions& opt) {
    const double gamma = effective_gamma(cfg, opt);
    const std::uint64_t seed = effective_seed(cfg, opt);
    const double tolerance = cfg.value("tolerance", 1e-9);

    std::vector<records::ResultRow> rows;
    double residual = 0.0;
    bool ir_ok = true;
    if (cfg.contains("table")) {
        TableAllocation table = table_from_json(cfg.at("table"));
        ProductGammaDistribution law(gamma, table.agent_count());
        rows.push_back(midr_row("verify", table, law, seed));
        residual = rows.back().truth_residual_max;
        ir_ok = verify::ir_npt_expectation(table, law).ir_ok;
    } else {
        MidrInstance inst =
            instance_from_json(cfg.value("instance", json{{"type", "single-item"}}));
        ValuationMatrix bids = bids_from_json(cfg, inst);
        InstanceOracle oracle(inst, bids);
        ProductGammaDistribution law(gamma, inst.agents());
        rows.push_back(midr_row("verify", oracle, law, seed));
        residual = rows.back().truth_residual_max;
        ir_ok = verify::ir_npt_expectation(oracle, law).ir_ok;
    }
    emit_records(rows, opt.out_dir, "verify");
    if (residual > tolerance)
        throw PropertyViolation("verify: truthfulness residual " +
                                records::format_double(residual) + " above tolerance " +
                                records::format_double(tolerance));
    if (!ir_ok) throw PropertyViolation("verify: expected utility below zero");
    return 0;
}

int run_bks_experiment(const json& cfg, const CommonOptions& opt) {
    const double gamma = effective_gamma(cfg, opt);
    const std::uint64_t seed = effective_seed(cfg, opt);
    const std::size_t replicates = effective_count(cfg, opt, "replicates", 200);

    GridStepAllocation rule =
        allocation_from_json(cfg.value("allocation", json{{"type", "grid-step"},
                                                          {"agents", 3}}));
    const std::size_t n = rule.agent_count();
    BidVector bids = sp_bids_from_json(cfg, n, seed);

    std::vector<double> truth_levels = rule.levels(bids);
    double truth_welfare = 0.0;
    double pivot_revenue = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        truth_welfare += bids[i] * truth_levels[i];
        pivot_revenue += payments::archer_tardos_payment(rule, bids, i);
    }

    CounterRng root(seed);
    std::vector<SpReductionRun> runs;
    runs.reserve(replicates);
    double welfare_sum = 0.0;
    double revenue_sum = 0.0;
    for (std::size_t r = 0; r < replicates; ++r) {
        CounterRng rng = root.derive(r);
        runs.push_back(run_bks(rule, bids, gamma, rng));
        const SpReductionRun& run = runs.back();
        for (std::size_t i = 0; i < n; ++i) {
            welfare_sum += bids[i] * run.levels[i];
            revenue_sum += run.payments[i];
        }
    }

    std::vector<double> residuals = verify::bks_payment_identity_residuals(rule, bids, gamma);
    double residual = 0.0;
    for (double r : residuals) residual = std::max(residual, r);

    records::ResultRow row;
    row.experiment = "run-bks";
    row.n = n;
    row.gamma = gamma;
    row.seed = seed;
    row.precision = std::pow(1.0 - gamma, static_cast<double>(n));
    const double denom = static_cast<double>(replicates);
    row.welfare_ratio = truth_welfare > 0.0 ? welfare_sum / (denom * truth_welfare) : 1.0;
    row.revenue_ratio = pivot_revenue > 0.0 ? revenue_sum / (denom * pivot_revenue) : 1.0;
    row.coeff_variance = (1.0 - gamma) / gamma;
    row.max_abs_coeff = std::max(1.0, (1.0 - gamma) / gamma);
    row.truth_residual_max = residual;
    emit_records({row}, opt.out_dir, "run_bks");

    verify::ExPostReport expost = verify::ir_expost(runs, bids);
    if (!expost.ir_ok)
        throw PropertyViolation("run-bks: realized utility " +
                                records::format_double(expost.min_realized_utility) +
                                " below zero");
    return 0;
}

int sweep_experiment(const json& cfg, const CommonOptions& opt) {
    std::string gammas_spec = cfg.value("gammas", std::string{});
    if (!opt.gammas.empty()) gammas_spec = opt.gammas;
    std::vector<double> gammas;
    if (!gammas_spec.empty()) {
        gammas = parse_gamma_range(gammas_spec);
    } else if (opt.gamma || cfg.contains("gamma")) {
        gammas = {effective_gamma(cfg, opt)};
    } else {
        throw ConfigError("cli: sweep needs --gamma or --gammas");
    }

    std::size_t n = cfg.value("agents", std::size_t{2});
    if (opt.agents) n = *opt.agents;
    if (n < 2 || n > 12) throw ConfigError("cli: sweep agent count must lie in [2, 12]");
    const std::uint64_t seed = effective_seed(cfg, opt);

    TableAllocation welfare_wit = metrics::welfare_tight_witness(n);
    TableAllocation revenue_wit = metrics::revenue_tight_witness(n);

    std::vector<records::ResultRow> rows;
    rows.reserve(gammas.size());
    for (double g : gammas) {
        ProductGammaDistribution law(g, n);
        metrics::RiskStats risk = metrics::risk_stats(law);
        records::ResultRow row;
        row.experiment = "sweep";
        row.n = n;
        row.gamma = g;
        row.seed = seed;
        row.precision = law.precision();
        row.welfare_ratio = metrics::welfare_ratio(welfare_wit, law);
        row.revenue_ratio = metrics::revenue_ratio(revenue_wit, law);
        row.coeff_variance = risk.max_variance;
        row.max_abs_coeff = risk.max_abs_coeff;
        row.truth_residual_max =
            std::max(verify::midr_truthfulness_max_residual(welfare_wit, law),
                     verify::midr_truthfulness_max_residual(revenue_wit, law));
        rows.push_back(row);
    }
    emit_records(rows, opt.out_dir, "sweep");
    return 0;
}

ppc::PpcSeparableInstance skewed_separable(double skew) {
    return ppc::PpcSeparableInstance({0.1, 0.09}, {0.1 * skew, 0.09}, {1.0, 1.0}, {1.0, 1.0},
                                     {1.1, 1.0});
}

ppc::PpcMultiInstance demo_multi_instance() {
    return ppc::PpcMultiInstance(2, 2, {0.10, 0.06, 0.08, 0.07}, {2.0, 2.5, 1.5, 1.2});
}

int scenario_skewed(const json& cfg, const CommonOptions& opt, const std::string& case_name) {
    const double skew = cfg.value("skew", 1.1);
    ppc::SkewExampleReport rep = ppc::skewed_estimate_example(skew);
    ppc::PpcSeparableInstance inst = skewed_separable(skew);
    ppc::NaiveVcgResult naive = ppc::naive_vcg(inst, BidVector(inst.values_per_click));

    ordered_json out;
    out["case"] = case_name;
    out["skew"] = skew;
    out["u_truth"] = rep.u_truth;
    out["u_lie"] = rep.u_lie;
    out["profitable"] = rep.lying_profitable;
    out["welfare_order_holds"] = rep.welfare_order_holds;
    out["naive"] = {{"slot_of_ad", naive.slot_of_ad},
                    {"per_click_price", naive.per_click_price},
                    {"expected_utility", naive.expected_utility}};
    emit_report(out, opt.out_dir, "scenario_ppc_skewed_estimate");
    return 0;
}

int scenario_separable_repair(const json& cfg, const CommonOptions& opt) {
    const double gamma = effective_gamma(cfg, opt);
    const std::uint64_t seed = effective_seed(cfg, opt);
    const std::size_t samples = effective_count(cfg, opt, "samples", 20'000);
    const double skew = cfg.value("skew", 1.1);

    ppc::PpcSeparableInstance inst = skewed_separable(skew);
    ppc::PpcSpAllocation rule(inst);
    const double v0 = inst.values_per_click[0];

    std::vector<double> grid;
    for (double f : {0.0, 0.25, 0.5, 0.75, 1.0, 1.25}) grid.push_back(f * v0);
    const std::size_t truth_index = 4;

    verify::UtilityFn utility = [&](double report, CounterRng& rng) {
        BidVector bids({report, inst.values_per_click[1]});
        SpReductionRun run = run_bks(rule, bids, gamma, rng);
        return v0 * run.levels[0] - run.payments[0];
    };
    verify::McCurve curve = verify::mc_truthfulness(utility, grid, truth_index, samples, seed);

    ppc::SkewExampleReport naive = ppc::skewed_estimate_example(skew);

    ordered_json out;
    out["case"] = "separable-repair";
    out["gamma"] = gamma;
    out["skew"] = skew;
    out["samples"] = samples;
    out["seed"] = seed;
    out["report_grid"] = grid;
    ordered_json means = ordered_json::array();
    ordered_json diffs = ordered_json::array();
    ordered_json errs = ordered_json::array();
    for (const verify::McPoint& p : curve.points) {
        means.push_back(p.mean);
        diffs.push_back(p.mean_minus_truth);
        errs.push_back(p.diff_std_err);
    }
    out["mean_utility"] = means;
    out["mean_minus_truth"] = diffs;
    out["diff_std_err"] = errs;
    const bool truthful = curve.truthful_within(4.0);
    out["truthful_within_4sigma"] = truthful;
    out["naive_u_truth"] = naive.u_truth;
    out["naive_u_lie"] = naive.u_lie;
    out["naive_profitable"] = naive.lying_profitable;
    emit_report(out, opt.out_dir, "scenario_ppc_separable_repair");

    if (!truthful)
        throw PropertyViolation("scenario-ppc: repaired separable auction failed the 4-sigma "
                                "truthfulness check");
    return 0;
}

int scenario_outcome_dependent(const json& cfg, const CommonOptions& opt) {
    const double gamma = effective_gamma(cfg, opt);

    ppc::PpcMultiInstance inst = demo_multi_instance();
    ValuationMatrix bids(inst.ads_count, inst.slots_count, inst.value);
    ppc::PpcMidrOracle oracle(inst, bids);
    ProductGammaDistribution law(gamma, inst.ads_count);

    const double residual = verify::midr_truthfulness_max_residual(oracle, law);
    const double welfare = metrics::welfare_ratio(oracle, law);
    const bool residual_ok = residual <= 1e-9;
    const bool welfare_ok = welfare >= (1.0 - gamma) - 1e-12;

    CounterRng rng(effective_seed(cfg, opt));
    OracleResult full = oracle.evaluate(SubsetMask::full(inst.ads_count), rng);

    ordered_json out;
    out["case"] = "outcome-dependent-repair";
    out["gamma"] = gamma;
    out["ads"] = inst.ads_count;
    out["slots"] = inst.slots_count;
    out["truth_residual_max"] = residual;
    out["welfare_ratio"] = welfare;
    out["welfare_floor"] = 1.0 - gamma;
    out["residual_ok"] = residual_ok;
    out["welfare_ok"] = welfare_ok;
    out["full_assignment"] = oracle.assignments()[*full.outcome_index];
    emit_report(out, opt.out_dir, "scenario_ppc_outcome_dependent_repair");

    if (!residual_ok)
        throw PropertyViolation("scenario-ppc: outcome-dependent repair residual above 1e-9");
    if (!welfare_ok)
        throw PropertyViolation("scenario-ppc: welfare ratio below the 1-gamma floor");
    return 0;
}

int scenario_click_realization(const json& cfg, const CommonOptions& opt) {
    const double gamma = effective_gamma(cfg, opt);
    const std::uint64_t seed = effective_seed(cfg, opt);
    const std::size_t impressions = effective_count(cfg, opt, "samples", 100'000);

    ppc::PpcMultiInstance inst = demo_multi_instance();
    ValuationMatrix bids(inst.ads_count, inst.slots_count, inst.value);
    ppc::PpcMidrOracle oracle(inst, bids);
    ProductGammaDistribution law(gamma, inst.ads_count);
    const std::size_t n = inst.ads_count;

    CounterRng root(seed);
    double diff_sum = 0.0;
    double diff_sq = 0.0;
    double expected_sum = 0.0;
    double measured_sum = 0.0;
    for (std::size_t r = 0; r < impressions; ++r) {
        CounterRng rng = root.derive(r);
        ReductionRun run = run_optmidr(oracle, gamma, rng);
        const std::vector<int>& assignment = oracle.assignments()[*run.outcome_index];

        std::vector<double> click_prob(n, 0.0);
        std::vector<double> value_per_click(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            if (assignment[i] >= 0) {
                const auto slot = static_cast<std::size_t>(assignment[i]);
                click_prob[i] = inst.click_rate(i, slot);
                value_per_click[i] = inst.value_per_click(i, slot);
            }
        }
        ppc::ClickRealization clicks = ppc::realize_clicks(click_prob, value_per_click, rng);

        double expected_total = 0.0;
        double measured_total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double c = law.coefficient(i, run.mask);
            expected_total += run.payments[i];
            measured_total +=
                c * payments::member_welfare_excluding(clicks.measured_value, run.mask, i);
        }
        expected_sum += expected_total;
        measured_sum += measured_total;
        const double d = measured_total - expected_total;
        diff_sum += d;
        diff_sq += d * d;
    }

    const double count = static_cast<double>(impressions);
    const double mean_diff = diff_sum / count;
    const double var = std::max(0.0, diff_sq / count - mean_diff * mean_diff);
    const double std_err = std::sqrt(var / count);
    const bool within = std::abs(mean_diff) <= 3.0 * std_err + 1e-12;

    ordered_json out;
    out["case"] = "click-realization";
    out["gamma"] = gamma;
    out["impressions"] = impressions;
    out["seed"] = seed;
    out["mean_expected_payment"] = expected_sum / count;
    out["mean_measured_payment"] = measured_sum / count;
    out["mean_paired_diff"] = mean_diff;
    out["diff_std_err"] = std_err;
    out["within_3sigma"] = within;
    emit_report(out, opt.out_dir, "scenario_ppc_click_realization");

    if (!within)
        throw PropertyViolation("scenario-ppc: click-measured payments drifted from "
                                "expectation-based payments by more than 3 sigma");
    return 0;
}

int dispatch_scenario(const json& cfg, const CommonOptions& opt) {
    std::string name = cfg.value("case", std::string("skewed-estimate"));
    if (!opt.case_name.empty()) name = opt.case_name;
    if (name == "skewed-estimate" || name == "appendix-a") return scenario_skewed(cfg, opt, name);
    if (name == "separable-repair") return scenario_separable_repair(cfg, opt);
    if (name == "outcome-dependent-repair") return scenario_outcome_dependent(cfg, opt);
    if (name == "click-realization") return scenario_click_realization(cfg, opt);
    throw ConfigError("cli: unknown scenario case '" + name + "'");
}

int dispatch_experiment(const std::string& experiment, const json& cfg,
                        const CommonOptions& opt) {
    if (experiment == "run-midr") return run_midr_experiment(cfg, opt);
    if (experiment == "run-bks") return run_bks_experiment(cfg, opt);
    if (experiment == "verify") return verify_experiment(cfg, opt);
    if (experiment == "sweep") return sweep_experiment(cfg, opt);
    if (experiment == "scenario-ppc") return dispatch_scenario(cfg, opt);
    throw ConfigError("cli: unknown experiment '" + experiment + "'");
}

} // namespace

std::vector<double> parse_gamma_range(const std::string& spec) {
    const auto first = spec.find(':');
    const auto second = spec.find(':', first == std::string::npos ? first : first + 1);
    if (first == std::string::npos || second == std::string::npos)
        throw ConfigError("cli: gamma range must look like start:stop:step");
    double start = 0.0, stop = 0.0, step = 0.0;
    try {
        start = std::stod(spec.substr(0, first));
        stop = std::stod(spec.substr(first + 1, second - first - 1));
        step = std::stod(spec.substr(second + 1));
    } catch (const std::exception&) {
        throw ConfigError("cli: bad number in gamma range '" + spec + "'");
    }
    if (!(step > 1e-12)) throw ConfigError("cli: gamma range step must be positive");
    if (start > stop + 1e-12) throw ConfigError("cli: gamma range start exceeds stop");
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    if (count > 10'000) throw ConfigError("cli: gamma range has too many points");
    std::vector<double> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        const double g = start + static_cast<double>(k) * step;
        if (!(g > 0.0 && g < 1.0))
            throw ConfigError("cli: gamma range value outside (0, 1)");
        out.push_back(g);
    }
    return out;
}

std::string resolve_config(const std::string& name) {
    if (fs::exists(name)) return name;
    const std::string with_ext = name + ".json";
    if (fs::exists(with_ext)) return with_ext;
    const std::string in_dir = "configs/" + with_ext;
    if (fs::exists(in_dir)) return in_dir;
    throw ConfigError("cli: config '" + name + "' not found (tried '" + name + "', '" +
                      with_ext + "', '" + in_dir + "')");
}

int cmd_run(const CommonOptions& opt) {
    json cfg = load_config(opt);
    if (!cfg.contains("experiment"))
        throw ConfigError("cli: config is missing the 'experiment' field");
    return dispatch_experiment(cfg.at("experiment").get<std::string>(), cfg, opt);
}

int cmd_sweep(const CommonOptions& opt) {
    json cfg = opt.config.empty() ? json::object() : load_config(opt);
    return sweep_experiment(cfg, opt);
}

int cmd_scenario_ppc(const CommonOptions& opt) {
    json cfg = opt.config.empty() ? json::object() : load_config(opt);
    return dispatch_scenario(cfg, opt);
}

int guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const PropertyViolation& e) {
        std::cerr << "property violation: " << e.what() << "\n";
        return 3;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "invalid config: " << e.what() << "\n";
        return 1;
    } catch (const json::exception& e) {
        std::cerr << "invalid config: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid config: " << e.what() << "\n";
        return 1;
    }
}

} // namespace mechlab::cli
