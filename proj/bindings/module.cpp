// Python surface for the single-call mechanism library. Bids and valuation
// rows cross the boundary as plain lists; randomized entry points take a seed
// instead of an RNG object so results are reproducible from Python.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "mechlab/allocation.hpp"
#include "mechlab/errors.hpp"
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
#include "mechlab/verify.hpp"

namespace py = pybind11;
using namespace mechlab;

namespace {

ValuationMatrix bids_or_truth(const MidrInstance& inst,
                              const std::optional<std::vector<std::vector<double>>>& bids) {
    if (!bids) return inst.valuations();
    return ValuationMatrix(*bids);
}

SubsetMask mask_from_members(std::size_t agents, const std::vector<std::size_t>& members) {
    SubsetMask mask = SubsetMask::empty(agents);
    for (std::size_t i : members) mask = mask.with(i);
    return mask;
}

std::size_t grid_index(const std::vector<double>& grid, double report) {
    auto it = std::find(grid.begin(), grid.end(), report);
    return static_cast<std::size_t>(it - grid.begin());
}

} // namespace

PYBIND11_MODULE(_mechlab, m) {
    m.doc() = "Single-call truthful mechanisms: resample-once reductions, exact and "
              "Monte Carlo truthfulness verifiers, expectation-vs-risk metrics, and "
              "pay-per-click scenarios.";

    py::register_exception<ConfigError>(m, "ConfigError");
    py::register_exception<NumericalError>(m, "NumericalError");
    py::register_exception<PropertyViolation>(m, "PropertyViolation");

    // --- problem data ------------------------------------------------------

    py::class_<ValuationMatrix>(m, "ValuationMatrix")
        .def(py::init<const std::vector<std::vector<double>>&>(), py::arg("rows"))
        .def_property_readonly("agents", &ValuationMatrix::agents)
        .def_property_readonly("outcomes", &ValuationMatrix::outcomes)
        .def("at", &ValuationMatrix::at, py::arg("agent"), py::arg("outcome"))
        .def("with_scaled_row", &ValuationMatrix::with_scaled_row, py::arg("agent"),
             py::arg("factor"))
        .def("flat", &ValuationMatrix::flat);

    py::class_<MidrInstance>(m, "MidrInstance")
        .def(py::init([](std::vector<std::string> labels,
                         const std::vector<std::vector<double>>& valuations,
                         std::vector<std::vector<double>> range) {
                 return MidrInstance(std::move(labels), ValuationMatrix(valuations),
                                     std::move(range));
             }),
             py::arg("outcome_labels"), py::arg("valuations"), py::arg("range"))
        .def_property_readonly("agents", &MidrInstance::agents)
        .def_property_readonly("outcomes", &MidrInstance::outcomes)
        .def_property_readonly("range_size", &MidrInstance::range_size)
        .def_property_readonly("outcome_labels", &MidrInstance::outcome_labels)
        .def_property_readonly("valuations", &MidrInstance::valuations)
        .def("distribution", &MidrInstance::distribution, py::arg("index"));

    m.def("single_item_instance", &gen::single_item_instance, py::arg("high") = 10.0,
          py::arg("low") = 7.0);
    m.def(
        "random_midr_instance",
        [](std::size_t agents, std::size_t outcomes, std::size_t range_size,
           std::uint64_t seed) {
            CounterRng rng(seed);
            return gen::random_midr_instance(agents, outcomes, range_size, rng);
        },
        py::arg("agents"), py::arg("outcomes"), py::arg("range_size"), py::arg("seed"));

    // --- resampling laws ----------------------------------------------------

    py::class_<ResamplingLaw>(m, "ResamplingLaw")
        .def_property_readonly("agent_count", &ResamplingLaw::agent_count)
        .def("precision", &ResamplingLaw::precision)
        .def(
            "mass",
            [](const ResamplingLaw& law, const std::vector<std::size_t>& kept) {
                return law.mass(mask_from_members(law.agent_count(), kept));
            },
            py::arg("kept"));

    py::class_<ProductGammaDistribution, ResamplingLaw>(m, "ProductGammaDistribution")
        .def(py::init<double, std::size_t>(), py::arg("gamma"), py::arg("agents"))
        .def_property_readonly("gamma", &ProductGammaDistribution::gamma);

    py::class_<SubsetDistribution, ResamplingLaw>(m, "SubsetDistribution")
        .def(py::init<std::size_t, std::vector<double>>(), py::arg("agents"),
             py::arg("masses"))
        .def_property_readonly("masses", &SubsetDistribution::masses);

    // --- multi-outcome rules and the resample-once reduction ----------------

    py::class_<MidrOracle>(m, "MidrOracle")
        .def_property_readonly("agent_count", &MidrOracle::agent_count);

    py::class_<TableAllocation, MidrOracle>(m, "TableAllocation")
        .def(py::init<std::size_t, std::vector<std::vector<double>>>(), py::arg("agents"),
             py::arg("values_by_mask"))
        .def("row", &TableAllocation::row, py::arg("mask_bits"));

    m.def(
        "tabulate",
        [](const MidrInstance& inst,
           const std::optional<std::vector<std::vector<double>>>& bids) {
            ValuationMatrix b = bids_or_truth(inst, bids);
            InstanceOracle oracle(inst, b);
            return gen::tabulate(oracle);
        },
        py::arg("instance"), py::arg("bids") = py::none());

    py::class_<ReductionRun>(m, "ReductionRun")
        .def_readonly("seed", &ReductionRun::seed)
        .def_property_readonly("kept",
                               [](const ReductionRun& r) { return r.mask.members(); })
        .def_readonly("range_index", &ReductionRun::range_index)
        .def_readonly("outcome_index", &ReductionRun::outcome_index)
        .def_readonly("agent_values", &ReductionRun::agent_values)
        .def_readonly("payments", &ReductionRun::payments)
        .def_readonly("oracle_calls", &ReductionRun::oracle_calls);

    m.def(
        "run_optmidr",
        [](const MidrInstance& inst, double gamma, std::uint64_t seed,
           const std::optional<std::vector<std::vector<double>>>& bids) {
            ValuationMatrix b = bids_or_truth(inst, bids);
            CounterRng rng(seed);
            return run_optmidr(inst, b, gamma, rng);
        },
        py::arg("instance"), py::arg("gamma"), py::arg("seed"),
        py::arg("bids") = py::none());
    m.def(
        "run_midr",
        [](const MidrOracle& oracle, const ResamplingLaw& law, std::uint64_t seed) {
            CounterRng rng(seed);
            return run_generic_midr(oracle, law, rng);
        },
        py::arg("oracle"), py::arg("law"), py::arg("seed"));

    m.def(
        "clarke_pivot",
        [](const MidrInstance& inst,
           const std::optional<std::vector<std::vector<double>>>& bids, std::size_t agent) {
            return payments::clarke_pivot(inst, bids_or_truth(inst, bids), agent);
        },
        py::arg("instance"), py::arg("bids"), py::arg("agent"));

    // --- single-parameter rules and the per-agent reduction -----------------

    py::class_<SingleParamAllocation>(m, "SingleParamAllocation")
        .def_property_readonly("agent_count", &SingleParamAllocation::agent_count)
        .def_property_readonly("a_max", &SingleParamAllocation::a_max)
        .def(
            "levels",
            [](const SingleParamAllocation& rule, const std::vector<double>& bids) {
                return rule.levels(BidVector(bids));
            },
            py::arg("bids"));

    py::class_<PostedThreshold, SingleParamAllocation>(m, "PostedThreshold")
        .def(py::init<std::vector<double>, double>(), py::arg("thresholds"),
             py::arg("weight") = 1.0);

    py::class_<TopKByScore, SingleParamAllocation>(m, "TopKByScore")
        .def(py::init<std::size_t, std::vector<double>, double>(), py::arg("k"),
             py::arg("score_weights"), py::arg("weight") = 1.0);

    py::class_<GridStepAllocation, SingleParamAllocation>(m, "GridStepAllocation")
        .def(py::init<std::vector<std::vector<double>>, std::vector<std::vector<double>>,
                      double>(),
             py::arg("axis_thresholds"), py::arg("agent_tables"), py::arg("max_level") = 1.0);

    m.def(
        "random_grid_step",
        [](std::size_t agents, std::size_t max_thresholds, std::uint64_t seed) {
            CounterRng rng(seed);
            return gen::random_grid_step(agents, max_thresholds, rng);
        },
        py::arg("agents"), py::arg("max_thresholds"), py::arg("seed"));
    m.def(
        "random_bids",
        [](std::size_t agents, double ceiling, std::uint64_t seed) {
            CounterRng rng(seed);
            return gen::random_bids(agents, ceiling, rng).values();
        },
        py::arg("agents"), py::arg("ceiling"), py::arg("seed"));

    py::class_<SpReductionRun>(m, "SpReductionRun")
        .def_readonly("seed", &SpReductionRun::seed)
        .def_readonly("resampled", &SpReductionRun::resampled)
        .def_readonly("resampled_bids", &SpReductionRun::resampled_bids)
        .def_readonly("levels", &SpReductionRun::levels)
        .def_readonly("payments", &SpReductionRun::payments)
        .def_readonly("oracle_calls", &SpReductionRun::oracle_calls);

    m.def(
        "run_bks",
        [](const SingleParamAllocation& rule, const std::vector<double>& bids, double gamma,
           std::uint64_t seed) {
            CounterRng rng(seed);
            return run_bks(rule, BidVector(bids), gamma, rng);
        },
        py::arg("rule"), py::arg("bids"), py::arg("gamma"), py::arg("seed"));

    m.def(
        "archer_tardos_payment",
        [](const SingleParamAllocation& rule, const std::vector<double>& bids,
           std::size_t agent, double quad_tol) {
            return payments::archer_tardos_payment(rule, BidVector(bids), agent, quad_tol);
        },
        py::arg("rule"), py::arg("bids"), py::arg("agent"), py::arg("quad_tol") = 1e-8);

    // --- verifiers -----------------------------------------------------------

    m.def("midr_truthfulness_max_residual",
          [](const MidrOracle& oracle, const ResamplingLaw& law) {
              return verify::midr_truthfulness_max_residual(oracle, law);
          },
          py::arg("oracle"), py::arg("law"));
    m.def(
        "midr_truthfulness_max_residual",
        [](const MidrInstance& inst, double gamma,
           const std::optional<std::vector<std::vector<double>>>& bids) {
            ValuationMatrix b = bids_or_truth(inst, bids);
            InstanceOracle oracle(inst, b);
            return verify::midr_truthfulness_max_residual(
                oracle, ProductGammaDistribution(gamma, inst.agents()));
        },
        py::arg("instance"), py::arg("gamma"), py::arg("bids") = py::none());

    m.def(
        "bks_payment_identity_residuals",
        [](const GridStepAllocation& rule, const std::vector<double>& bids, double gamma,
           double quad_tol) {
            return verify::bks_payment_identity_residuals(rule, BidVector(bids), gamma,
                                                          quad_tol);
        },
        py::arg("rule"), py::arg("bids"), py::arg("gamma"), py::arg("quad_tol") = 1e-8);
    m.def(
        "bks_expected_level",
        [](const GridStepAllocation& rule, const std::vector<double>& bids, std::size_t agent,
           double own_bid, double gamma) {
            return verify::bks_expected_level(rule, BidVector(bids), agent, own_bid, gamma);
        },
        py::arg("rule"), py::arg("bids"), py::arg("agent"), py::arg("own_bid"),
        py::arg("gamma"));

    py::class_<verify::IrNptReport>(m, "IrNptReport")
        .def_readonly("ir_ok", &verify::IrNptReport::ir_ok)
        .def_readonly("npt_ok", &verify::IrNptReport::npt_ok)
        .def_readonly("min_expected_utility", &verify::IrNptReport::min_expected_utility)
        .def_readonly("min_expected_payment", &verify::IrNptReport::min_expected_payment);
    m.def("ir_npt_expectation",
          [](const MidrOracle& oracle, const ResamplingLaw& law, double tol) {
              return verify::ir_npt_expectation(oracle, law, tol);
          },
          py::arg("oracle"), py::arg("law"), py::arg("tol") = 1e-12);
    m.def(
        "ir_npt_expectation",
        [](const MidrInstance& inst, double gamma, double tol,
           const std::optional<std::vector<std::vector<double>>>& bids) {
            ValuationMatrix b = bids_or_truth(inst, bids);
            InstanceOracle oracle(inst, b);
            return verify::ir_npt_expectation(
                oracle, ProductGammaDistribution(gamma, inst.agents()), tol);
        },
        py::arg("instance"), py::arg("gamma"), py::arg("tol") = 1e-12,
        py::arg("bids") = py::none());

    py::class_<verify::ExPostReport>(m, "ExPostReport")
        .def_readonly("ir_ok", &verify::ExPostReport::ir_ok)
        .def_readonly("min_realized_utility", &verify::ExPostReport::min_realized_utility);
    m.def(
        "ir_expost",
        [](const std::vector<SpReductionRun>& runs, const std::vector<double>& true_values,
           double tol) { return verify::ir_expost(runs, BidVector(true_values), tol); },
        py::arg("runs"), py::arg("true_values"), py::arg("tol") = 1e-12);

    py::class_<verify::McPoint>(m, "McPoint")
        .def_readonly("report", &verify::McPoint::report)
        .def_readonly("mean", &verify::McPoint::mean)
        .def_readonly("std_err", &verify::McPoint::std_err)
        .def_readonly("mean_minus_truth", &verify::McPoint::mean_minus_truth)
        .def_readonly("diff_std_err", &verify::McPoint::diff_std_err);
    py::class_<verify::McCurve>(m, "McCurve")
        .def_readonly("points", &verify::McCurve::points)
        .def_readonly("truth_index", &verify::McCurve::truth_index)
        .def_readonly("samples", &verify::McCurve::samples)
        .def_readonly("seed", &verify::McCurve::seed)
        .def("truthful_within", &verify::McCurve::truthful_within, py::arg("k_sigma"))
        .def("argmax_mean", &verify::McCurve::argmax_mean);

    // Monte Carlo misreport scan for a single-parameter rule: the chosen
    // agent's report runs over `reports`, utility is true_value * level minus
    // the charged payment. Common random numbers across the grid.
    m.def(
        "mc_bks_curve",
        [](const SingleParamAllocation& rule, const std::vector<double>& bids, double gamma,
           const std::vector<double>& reports, std::size_t truth_index, std::size_t samples,
           std::uint64_t seed, std::size_t agent, std::optional<double> true_value) {
            if (agent >= bids.size())
                throw std::invalid_argument("mc_bks_curve: agent out of range");
            const double value = true_value ? *true_value : bids[agent];
            py::gil_scoped_release release;
            return verify::mc_truthfulness(
                [&](double report, CounterRng& rng) {
                    std::vector<double> b = bids;
                    b[agent] = report;
                    SpReductionRun run = run_bks(rule, BidVector(b), gamma, rng);
                    return value * run.levels[agent] - run.payments[agent];
                },
                reports, truth_index, samples, seed);
        },
        py::arg("rule"), py::arg("bids"), py::arg("gamma"), py::arg("reports"),
        py::arg("truth_index"), py::arg("samples"), py::arg("seed"), py::arg("agent") = 0,
        py::arg("true_value") = py::none());

    // Monte Carlo misreport scan for the resample-once reduction: one agent
    // scales its reported valuation row by each factor (1.0 must sit at
    // truth_index), utility is its true value of the realized outcome minus
    // the charged payment.
    m.def(
        "mc_midr_scale_curve",
        [](const MidrInstance& inst, double gamma, const std::vector<double>& factors,
           std::size_t truth_index, std::size_t samples, std::uint64_t seed,
           std::size_t agent) {
            const ValuationMatrix& truth = inst.valuations();
            std::vector<ValuationMatrix> reports;
            std::vector<InstanceOracle> oracles;
            reports.reserve(factors.size());
            oracles.reserve(factors.size());
            for (double f : factors) reports.push_back(truth.with_scaled_row(agent, f));
            for (const ValuationMatrix& r : reports) oracles.emplace_back(inst, r);
            ProductGammaDistribution law(gamma, inst.agents());
            py::gil_scoped_release release;
            return verify::mc_truthfulness(
                [&](double factor, CounterRng& rng) {
                    ReductionRun run =
                        run_generic_midr(oracles[grid_index(factors, factor)], law, rng);
                    return truth.at(agent, *run.outcome_index) - run.payments[agent];
                },
                factors, truth_index, samples, seed);
        },
        py::arg("instance"), py::arg("gamma"), py::arg("factors"), py::arg("truth_index"),
        py::arg("samples"), py::arg("seed"), py::arg("agent") = 0);

    // --- metrics -------------------------------------------------------------

    py::class_<metrics::MetricsRecord>(m, "MetricsRecord")
        .def_readonly("gamma", &metrics::MetricsRecord::gamma)
        .def_readonly("precision", &metrics::MetricsRecord::precision)
        .def_readonly("welfare_ratio", &metrics::MetricsRecord::welfare_ratio)
        .def_readonly("revenue_ratio", &metrics::MetricsRecord::revenue_ratio)
        .def_readonly("coeff_variance", &metrics::MetricsRecord::coeff_variance)
        .def_readonly("max_abs_coeff", &metrics::MetricsRecord::max_abs_coeff)
        .def_readonly("worst_normalized_payment",
                      &metrics::MetricsRecord::worst_normalized_payment);
    py::class_<metrics::RiskStats>(m, "RiskStats")
        .def_readonly("mean_abs_deviation", &metrics::RiskStats::mean_abs_deviation)
        .def_readonly("max_variance", &metrics::RiskStats::max_variance)
        .def_readonly("max_abs_coeff", &metrics::RiskStats::max_abs_coeff);

    m.def("precision", &metrics::precision, py::arg("law"));
    m.def("welfare_ratio", &metrics::welfare_ratio, py::arg("oracle"), py::arg("law"));
    m.def("revenue_ratio", &metrics::revenue_ratio, py::arg("oracle"), py::arg("law"));
    m.def("risk_stats", &metrics::risk_stats, py::arg("law"));
    m.def("midr_metrics",
          [](const MidrOracle& oracle, const ProductGammaDistribution& law) {
              return metrics::midr_metrics(oracle, law);
          },
          py::arg("oracle"), py::arg("law"));
    m.def(
        "midr_metrics",
        [](const MidrInstance& inst, double gamma,
           const std::optional<std::vector<std::vector<double>>>& bids) {
            ValuationMatrix b = bids_or_truth(inst, bids);
            InstanceOracle oracle(inst, b);
            return metrics::midr_metrics(oracle,
                                         ProductGammaDistribution(gamma, inst.agents()));
        },
        py::arg("instance"), py::arg("gamma"), py::arg("bids") = py::none());
    m.def("welfare_tight_witness", &metrics::welfare_tight_witness, py::arg("agents"),
          py::arg("distinguished") = 0);
    m.def("revenue_tight_witness", &metrics::revenue_tight_witness, py::arg("agents"));

    py::class_<metrics::SweepReport>(m, "SweepReport")
        .def_readonly("agents", &metrics::SweepReport::agents)
        .def_readonly("gamma", &metrics::SweepReport::gamma)
        .def_readonly("precision_floor", &metrics::SweepReport::precision_floor)
        .def_readonly("resolution", &metrics::SweepReport::resolution)
        .def_readonly("candidates", &metrics::SweepReport::candidates)
        .def_readonly("pibar_max_abs_coeff", &metrics::SweepReport::pibar_max_abs_coeff)
        .def_readonly("pibar_max_variance", &metrics::SweepReport::pibar_max_variance)
        .def_readonly("best_max_abs_coeff", &metrics::SweepReport::best_max_abs_coeff)
        .def_readonly("best_max_variance", &metrics::SweepReport::best_max_variance)
        .def_readonly("best_variance_given_abs",
                      &metrics::SweepReport::best_variance_given_abs)
        .def_readonly("argmin_abs_coeff_masses",
                      &metrics::SweepReport::argmin_abs_coeff_masses)
        .def_readonly("argmin_variance_masses",
                      &metrics::SweepReport::argmin_variance_masses)
        .def_readonly("product_law_optimal_abs",
                      &metrics::SweepReport::product_law_optimal_abs)
        .def_readonly("product_law_optimal_variance",
                      &metrics::SweepReport::product_law_optimal_variance);
    m.def(
        "optimality_sweep",
        [](std::size_t agents, double gamma, double precision_floor, double resolution,
           std::uint64_t seed) {
            py::gil_scoped_release release;
            return metrics::optimality_sweep(agents, gamma, precision_floor, resolution, seed);
        },
        py::arg("agents"), py::arg("gamma"), py::arg("precision_floor"),
        py::arg("resolution"), py::arg("seed") = 0);

    // --- pay-per-click scenarios ----------------------------------------------

    py::class_<ppc::PpcSeparableInstance>(m, "PpcSeparableInstance")
        .def(py::init<std::vector<double>, std::vector<double>, std::vector<double>,
                      std::vector<double>, std::vector<double>>(),
             py::arg("slot_factors"), py::arg("est_slot_factors"), py::arg("ad_factors"),
             py::arg("est_ad_factors"), py::arg("values_per_click"))
        .def_readonly("slot_factors", &ppc::PpcSeparableInstance::slot_factors)
        .def_readonly("est_slot_factors", &ppc::PpcSeparableInstance::est_slot_factors)
        .def_readonly("ad_factors", &ppc::PpcSeparableInstance::ad_factors)
        .def_readonly("est_ad_factors", &ppc::PpcSeparableInstance::est_ad_factors)
        .def_readonly("values_per_click", &ppc::PpcSeparableInstance::values_per_click);

    py::class_<ppc::NaiveVcgResult>(m, "NaiveVcgResult")
        .def_readonly("slot_of_ad", &ppc::NaiveVcgResult::slot_of_ad)
        .def_readonly("per_click_price", &ppc::NaiveVcgResult::per_click_price)
        .def_readonly("expected_utility", &ppc::NaiveVcgResult::expected_utility);
    m.def(
        "naive_vcg",
        [](const ppc::PpcSeparableInstance& inst, const std::vector<double>& bids) {
            return ppc::naive_vcg(inst, BidVector(bids));
        },
        py::arg("instance"), py::arg("bids"));
    m.def("naive_vcg_utility", &ppc::naive_vcg_utility, py::arg("instance"), py::arg("ad"),
          py::arg("report"));

    py::class_<ppc::SkewExampleReport>(m, "SkewExampleReport")
        .def_readonly("u_truth", &ppc::SkewExampleReport::u_truth)
        .def_readonly("u_lie", &ppc::SkewExampleReport::u_lie)
        .def_readonly("lying_profitable", &ppc::SkewExampleReport::lying_profitable)
        .def_readonly("welfare_order_holds", &ppc::SkewExampleReport::welfare_order_holds);
    m.def("skewed_estimate_example", &ppc::skewed_estimate_example,
          py::arg("estimate_skew") = 1.1);

    // keep_alive ties the underlying instance to the allocation, which stores
    // a pointer to it
    py::class_<ppc::PpcSpAllocation, SingleParamAllocation>(m, "PpcSpAllocation")
        .def(py::init<const ppc::PpcSeparableInstance&>(), py::arg("instance"),
             py::keep_alive<1, 2>());
}
