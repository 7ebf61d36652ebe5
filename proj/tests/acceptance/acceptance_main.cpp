// Acceptance gate for the single-call mechanism suite. Each criterion prints
// exactly one [PASS]/[FAIL] line with the measured quantity and its budget;
// the process exits nonzero if any criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "mechlab/allocation.hpp"
#include "mechlab/generators.hpp"
#include "mechlab/instance.hpp"
#include "mechlab/metrics.hpp"
#include "mechlab/oracle.hpp"
#include "mechlab/payments.hpp"
#include "mechlab/ppc.hpp"
#include "mechlab/reduction_midr.hpp"
#include "mechlab/reduction_sp.hpp"
#include "mechlab/resampling.hpp"
#include "mechlab/rng.hpp"
#include "mechlab/single_call.hpp"
#include "mechlab/verify.hpp"

using namespace mechlab;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

int g_failures = 0;

void run_criterion(int id, const char* title, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
        out = body();
    } catch (const std::exception& e) {
        out.pass = false;
        out.detail = std::string("exception: ") + e.what();
    }
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
    std::printf("[%s] %02d %s: %s (%lld ms)\n", out.pass ? "PASS" : "FAIL", id, title,
                out.detail.c_str(), static_cast<long long>(ms));
    std::fflush(stdout);
    if (!out.pass) ++g_failures;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

double elapsed_s(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Binomial sanity band: |observed/trials - p| within k sigma.
bool rate_within(std::size_t observed, std::size_t trials, double p, double k_sigma) {
    const double n = static_cast<double>(trials);
    const double sigma = std::sqrt(std::max(p * (1.0 - p) / n, 1e-300));
    return std::fabs(static_cast<double>(observed) / n - p) <= k_sigma * sigma;
}

// --- 01: exact truthfulness of the resample-once reduction -----------------

Outcome exact_truthfulness() {
    const auto t0 = std::chrono::steady_clock::now();
    CounterRng rng(101);
    std::size_t count = 0;
    double worst = 0.0;
    for (double gamma : {0.1, 0.3, 0.5}) {
        for (int trial = 0; trial < 34; ++trial) {
            const std::size_t n = 2 + static_cast<std::size_t>(trial % 5); // 2..6
            const std::size_t outcomes = 2 + rng.next_u64() % 7;           // 2..8
            const std::size_t ranges = 2 + rng.next_u64() % 7;             // 2..8
            MidrInstance inst = gen::random_midr_instance(n, outcomes, ranges, rng);
            InstanceOracle oracle(inst, inst.valuations());
            ProductGammaDistribution law(gamma, n);
            worst = std::max(worst, verify::midr_truthfulness_max_residual(oracle, law));
            ++count;
        }
    }
    const double secs = elapsed_s(t0);
    return {count >= 100 && worst <= 1e-9 && secs < 30.0,
            "max residual " + fmt(worst) + " over " + std::to_string(count) +
                " random problems, budget 1e-9 / 30 s"};
}

// --- 02: precision, analytic and empirical, both reductions ----------------

Outcome precision_both_reductions() {
    const double gamma = 0.35;
    const std::size_t n = 4;
    ProductGammaDistribution law(gamma, n);
    const double analytic = std::pow(1.0 - gamma, static_cast<double>(n));
    if (std::fabs(law.precision() - analytic) > 1e-12)
        return {false, "closed form off: " + fmt(law.precision()) + " vs " + fmt(analytic)};

    constexpr std::size_t kRuns = 100000;
    CounterRng gen_rng(202);
    MidrInstance inst = gen::random_midr_instance(n, 5, 6, gen_rng);
    InstanceOracle oracle(inst, inst.valuations());
    CounterRng midr_root(203);
    std::size_t midr_full = 0;
    for (std::size_t r = 0; r < kRuns; ++r) {
        CounterRng run_rng = midr_root.derive(r);
        if (run_optmidr(oracle, gamma, run_rng).mask.is_full()) ++midr_full;
    }

    GridStepAllocation rule = gen::random_grid_step(n, 3, gen_rng);
    BidVector bids = gen::random_bids(n, 1.2, gen_rng);
    CounterRng sp_root(204);
    std::size_t sp_intact = 0;
    for (std::size_t r = 0; r < kRuns; ++r) {
        CounterRng run_rng = sp_root.derive(r);
        SpReductionRun run = run_bks(rule, bids, gamma, run_rng);
        bool touched = false;
        for (std::uint8_t f : run.resampled) touched = touched || (f != 0);
        if (!touched) ++sp_intact;
    }

    const bool midr_ok = rate_within(midr_full, kRuns, analytic, 3.0);
    const bool sp_ok = rate_within(sp_intact, kRuns, analytic, 3.0);
    return {midr_ok && sp_ok,
            "analytic " + fmt(analytic) + ", observed " +
                fmt(static_cast<double>(midr_full) / kRuns) + " (resample-once) / " +
                fmt(static_cast<double>(sp_intact) / kRuns) + " (per-agent), 3-sigma, N=1e5"};
}

// --- 03: welfare lower bound and its tight witness --------------------------

Outcome welfare_guarantee() {
    double worst_gap = 0.0;
    for (int g = 1; g <= 9; ++g) {
        const double gamma = g / 10.0;
        TableAllocation wit = metrics::welfare_tight_witness(3);
        const double ratio = metrics::welfare_ratio(wit, ProductGammaDistribution(gamma, 3));
        worst_gap = std::max(worst_gap, std::fabs(ratio - (1.0 - gamma)));
    }
    if (worst_gap > 1e-9) return {false, "witness misses 1-gamma by " + fmt(worst_gap)};

    CounterRng rng(303);
    double worst_margin = 1.0;
    std::size_t checked = 0;
    for (double gamma : {0.2, 0.6}) {
        for (int trial = 0; trial < 20; ++trial) {
            const std::size_t n = 2 + static_cast<std::size_t>(trial % 3);
            MidrInstance inst = gen::random_midr_instance(n, 4, 5, rng);
            InstanceOracle oracle(inst, inst.valuations());
            const double ratio =
                metrics::welfare_ratio(oracle, ProductGammaDistribution(gamma, n));
            worst_margin = std::min(worst_margin, ratio - (1.0 - gamma));
            ++checked;
        }
    }
    return {worst_margin >= -1e-9,
            "witness gap " + fmt(worst_gap) + ", min margin over " + std::to_string(checked) +
                " random problems " + fmt(worst_margin)};
}

// --- 04: revenue lower bound and its tight witness ---------------------------

Outcome revenue_guarantee() {
    TableAllocation wit = metrics::revenue_tight_witness(3);
    const double tight = metrics::revenue_ratio(wit, ProductGammaDistribution(0.2, 3));
    if (std::fabs(tight - 0.512) > 1e-9)
        return {false, "witness ratio " + fmt(tight) + " != 0.512"};

    CounterRng rng(404);
    double worst_margin = 1.0;
    std::size_t checked = 0;
    for (double gamma : {0.2, 0.5}) {
        for (int trial = 0; trial < 15; ++trial) {
            const std::size_t n = 2 + static_cast<std::size_t>(trial % 2);
            MidrInstance inst = gen::random_midr_instance(n, 4, 5, rng);
            InstanceOracle oracle(inst, inst.valuations());
            TableAllocation table = gen::tabulate(oracle);
            const double floor = std::pow(1.0 - gamma, static_cast<double>(n));
            const double ratio =
                metrics::revenue_ratio(table, ProductGammaDistribution(gamma, n));
            worst_margin = std::min(worst_margin, ratio - floor);
            ++checked;
        }
    }
    return {worst_margin >= -1e-9,
            "witness 0.512 exact, min margin over " + std::to_string(checked) +
                " tabulated problems " + fmt(worst_margin)};
}

// --- 05: coefficient risk closed forms and zero mean -------------------------

Outcome risk_closed_forms() {
    double worst = 0.0;
    for (int g = 1; g <= 9; ++g) {
        const double gamma = g / 10.0;
        metrics::RiskStats risk = metrics::risk_stats(ProductGammaDistribution(gamma, 5));
        const double var = (1.0 - gamma) / gamma;
        const double amp = std::max(1.0, (1.0 - gamma) / gamma);
        worst = std::max({worst, std::fabs(risk.max_variance - var),
                          std::fabs(risk.max_abs_coeff - amp), risk.mean_abs_deviation});
    }
    if (worst > 1e-12) return {false, "closed-form deviation " + fmt(worst)};

    double worst_mean = 0.0;
    for (std::size_t n = 2; n <= 10; ++n)
        worst_mean = std::max(
            worst_mean, metrics::risk_stats(ProductGammaDistribution(0.37, n)).mean_abs_deviation);
    CounterRng rng(505);
    for (std::size_t n = 2; n <= 6; ++n) {
        for (int trial = 0; trial < 5; ++trial) {
            std::vector<double> masses(subset_count(n));
            double total = 0.0;
            for (double& m : masses) {
                m = 0.01 + rng.next_double();
                total += m;
            }
            for (double& m : masses) m /= total;
            SubsetDistribution law(n, masses);
            worst_mean = std::max(worst_mean, metrics::risk_stats(law).mean_abs_deviation);
        }
    }
    return {worst_mean <= 1e-12, "closed forms exact to " + fmt(worst) +
                                     ", max |E[coefficient]| " + fmt(worst_mean) +
                                     " across product and random laws"};
}

// --- 06: per-agent resampling payment identity on grid rules ----------------

Outcome grid_payment_identity() {
    const auto t0 = std::chrono::steady_clock::now();
    CounterRng rng(606);
    std::size_t rules = 0;
    double worst = 0.0;
    for (double gamma : {0.2, 0.5, 0.8}) {
        for (int trial = 0; trial < 9; ++trial) {
            const std::size_t n = 1 + static_cast<std::size_t>(trial % 3);
            GridStepAllocation rule = gen::random_grid_step(n, 4, rng);
            BidVector bids = gen::random_bids(n, 1.2, rng);
            for (double r : verify::bks_payment_identity_residuals(rule, bids, gamma))
                worst = std::max(worst, r);
            ++rules;
        }
    }
    const double secs = elapsed_s(t0);
    return {rules >= 25 && worst <= 1e-6 && secs < 60.0,
            "max residual " + fmt(worst) + " over " + std::to_string(rules) +
                " grid rules, budget 1e-6 / 60 s"};
}

// --- 07: ex-post participation safety at scale -------------------------------

Outcome expost_safety_at_scale() {
    constexpr std::size_t kBatches = 100;
    constexpr std::size_t kBatchSize = 10000;
    CounterRng gen_rng(707);
    GridStepAllocation rule = gen::random_grid_step(3, 4, gen_rng);
    CounterRng root(708);
    double global_min = 0.0;
    bool all_ok = true;
    std::size_t total = 0;
    std::vector<SpReductionRun> batch;
    batch.reserve(kBatchSize);
    for (std::size_t b = 0; b < kBatches; ++b) {
        BidVector bids = gen::random_bids(3, 1.2, gen_rng);
        batch.clear();
        for (std::size_t k = 0; k < kBatchSize; ++k) {
            CounterRng run_rng = root.derive(b * kBatchSize + k);
            batch.push_back(run_bks(rule, bids, 0.5, run_rng));
        }
        verify::ExPostReport rep = verify::ir_expost(batch, bids);
        all_ok = all_ok && rep.ir_ok;
        global_min = std::min(global_min, rep.min_realized_utility);
        total += batch.size();
    }
    return {all_ok && total == kBatches * kBatchSize,
            "min realized utility " + fmt(global_min) + " over " + std::to_string(total) +
                " runs (floor -1e-12)"};
}

// --- 08: statistical truthfulness with common random numbers ----------------

Outcome mc_truthfulness_both() {
    // Per-agent resampling over a top-k-by-score rule.
    TopKByScore rule(2, {1.0, 1.0, 1.0, 1.0});
    const double v0 = 0.9;
    std::vector<double> sp_grid;
    for (int j = 0; j <= 20; ++j) sp_grid.push_back(v0 * j / 10.0);
    verify::McCurve sp_curve = verify::mc_truthfulness(
        [&](double report, CounterRng& rng) {
            SpReductionRun run = run_bks(rule, BidVector({report, 0.7, 0.5, 0.3}), 0.5, rng);
            return v0 * run.levels[0] - run.payments[0];
        },
        sp_grid, 10, 200000, 808);

    // Resample-once reduction over a random multi-outcome problem, scaling
    // agent 0's reported row by j/10.
    CounterRng gen_rng(809);
    MidrInstance inst = gen::random_midr_instance(3, 4, 5, gen_rng);
    const ValuationMatrix& truth = inst.valuations();
    std::vector<ValuationMatrix> reports;
    std::vector<InstanceOracle> oracles;
    reports.reserve(21);
    oracles.reserve(21);
    std::vector<double> midr_grid;
    for (int j = 0; j <= 20; ++j) {
        reports.push_back(truth.with_scaled_row(0, j / 10.0));
        midr_grid.push_back(j / 10.0);
    }
    for (int j = 0; j <= 20; ++j) oracles.emplace_back(inst, reports[j]);
    ProductGammaDistribution law(0.5, 3);
    verify::McCurve midr_curve = verify::mc_truthfulness(
        [&](double factor, CounterRng& rng) {
            const auto j = static_cast<std::size_t>(std::lround(factor * 10.0));
            ReductionRun run = run_generic_midr(oracles[j], law, rng);
            return truth.at(0, *run.outcome_index) - run.payments[0];
        },
        midr_grid, 10, 200000, 810);

    double worst_z = 0.0;
    for (const auto* curve : {&sp_curve, &midr_curve})
        for (const verify::McPoint& p : curve->points)
            if (p.diff_std_err > 0.0)
                worst_z = std::max(worst_z, p.mean_minus_truth / p.diff_std_err);
    return {sp_curve.truthful_within(4.0) && midr_curve.truthful_within(4.0),
            "no misreport beats truth beyond " + fmt(worst_z) +
                " sigma (cap 4), 21-point grids, N=2e5, paired draws"};
}

// --- 09: pay-per-click breakage and repair -----------------------------------

Outcome ppc_scenarios() {
    ppc::SkewExampleReport rep = ppc::skewed_estimate_example(1.1);
    const bool pins = std::fabs(rep.u_truth - 0.09181818181818182) <= 1e-9 &&
                      std::fabs(rep.u_lie - 0.099) <= 1e-12 && rep.lying_profitable &&
                      rep.welfare_order_holds;
    if (!pins)
        return {false, "skewed example drifted: u_truth " + fmt(rep.u_truth) + ", u_lie " +
                           fmt(rep.u_lie)};

    ppc::PpcSeparableInstance inst({0.1, 0.09}, {0.11, 0.09}, {1.0, 1.0}, {1.0, 1.0},
                                   {1.1, 1.0});
    ppc::PpcSpAllocation alloc(inst);
    const double v0 = 1.1;
    std::vector<double> grid;
    for (double f : {0.0, 0.25, 0.5, 0.75, 1.0, 1.25}) grid.push_back(f * v0);
    verify::McCurve curve = verify::mc_truthfulness(
        [&](double report, CounterRng& rng) {
            SpReductionRun run = run_bks(alloc, BidVector({report, 1.0}), 0.5, rng);
            return v0 * run.levels[0] - run.payments[0];
        },
        grid, 4, 20000, 909);
    return {curve.truthful_within(4.0),
            "naive per-click pricing exploitable (gain " + fmt(rep.u_lie - rep.u_truth) +
                "), per-agent repair passes the paired misreport scan"};
}

// --- 10: the geometric law is the right one ----------------------------------

Outcome optimality_sweeps() {
    const auto t0 = std::chrono::steady_clock::now();
    metrics::SweepReport a = metrics::optimality_sweep(2, 0.3, 0.49, 1e-3);
    metrics::SweepReport b = metrics::optimality_sweep(2, 0.5, 0.25, 1e-3);
    const double secs = elapsed_s(t0);
    const bool ok = a.product_law_optimal_abs && a.product_law_optimal_variance &&
                    b.product_law_optimal_abs && b.product_law_optimal_variance &&
                    a.candidates > 0 && b.candidates > 0 && secs < 120.0;
    return {ok, "over " + std::to_string(a.candidates + b.candidates) +
                    " laws none beats the geometric worst case (best " +
                    fmt(b.best_max_abs_coeff) + " vs " + fmt(b.pibar_max_abs_coeff) +
                    ") or its variance at a matched worst case, budget 120 s"};
}

// --- 11: one rule evaluation per run, with a counting negative control -------

Outcome single_call_discipline() {
    CounterRng gen_rng(1111);
    MidrInstance inst = gen::random_midr_instance(3, 4, 4, gen_rng);
    InstanceOracle oracle(inst, inst.valuations());
    CountedMidrOracle counted(oracle);
    ProductGammaDistribution law(0.4, 3);
    CounterRng midr_root(1112);
    bool per_run = true;
    for (std::size_t r = 0; r < 500; ++r) {
        CounterRng run_rng = midr_root.derive(r);
        ReductionRun run = run_generic_midr(counted, law, run_rng);
        per_run = per_run && run.oracle_calls == 1 && enforce_single_call(run.oracle_calls);
    }
    const bool midr_total = counted.calls() == 500;

    GridStepAllocation rule = gen::random_grid_step(3, 4, gen_rng);
    CountedAllocation counted_rule(rule);
    BidVector bids = gen::random_bids(3, 1.2, gen_rng);
    CounterRng sp_root(1113);
    for (std::size_t r = 0; r < 500; ++r) {
        CounterRng run_rng = sp_root.derive(r);
        SpReductionRun run = run_bks(counted_rule, bids, 0.5, run_rng);
        per_run = per_run && run.oracle_calls == 1 && enforce_single_call(run.oracle_calls);
    }
    const bool sp_total = counted_rule.calls() == 500;

    counted.reset();
    CounterRng probe_rng(1114);
    ReferencePaymentProbe probe = clarke_pivot_reference(counted, probe_rng);
    const bool control = probe.oracle_calls == inst.agents() + 1 &&
                         !enforce_single_call(probe.oracle_calls) &&
                         counted.calls() == inst.agents() + 1;
    return {per_run && midr_total && sp_total && control,
            "1000 reduction runs made exactly one call each; pivot reference needed " +
                std::to_string(probe.oracle_calls) + " and fails the single-call gate"};
}

} // namespace

int main() {
    std::printf("acceptance: single-call mechanism suite\n");
    run_criterion(1, "exact truthfulness on random problems", exact_truthfulness);
    run_criterion(2, "precision closed form and empirical rate", precision_both_reductions);
    run_criterion(3, "welfare floor 1-gamma with tight witness", welfare_guarantee);
    run_criterion(4, "revenue floor (1-gamma)^n with tight witness", revenue_guarantee);
    run_criterion(5, "coefficient risk closed forms, zero mean", risk_closed_forms);
    run_criterion(6, "payment identity on step-function rules", grid_payment_identity);
    run_criterion(7, "ex-post participation safety, 1e6 runs", expost_safety_at_scale);
    run_criterion(8, "paired misreport scans, both reductions", mc_truthfulness_both);
    run_criterion(9, "pay-per-click breakage and repair", ppc_scenarios);
    run_criterion(10, "geometric resampling law optimality", optimality_sweeps);
    run_criterion(11, "single rule evaluation per run", single_call_discipline);
    if (g_failures == 0) {
        std::printf("acceptance: 11/11 criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criteria FAILED\n", g_failures);
    return 1;
}
