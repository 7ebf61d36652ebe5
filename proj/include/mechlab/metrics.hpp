#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mechlab/oracle.hpp"
#include "mechlab/resampling.hpp"

namespace mechlab::metrics {

// Expectation-vs-risk summary of a reduction on one problem.
struct MetricsRecord {
    double gamma = 0.0;
    double precision = 0.0;          // probability nothing gets resampled
    double welfare_ratio = 0.0;      // expected realized welfare / optimal welfare
    double revenue_ratio = 0.0;      // expected reduction revenue / pivot revenue
    double coeff_variance = 0.0;     // worst per-agent variance of the coefficient
    double max_abs_coeff = 0.0;      // worst-case |coefficient|
    double worst_normalized_payment = 0.0; // (n-1) * max|c|: payment per unit of bid scale
};

// Probability that the resampled profile equals the submitted one.
double precision(const ResamplingLaw& law);

// Expected total realized welfare (all agents, true reported values) under
// the reduction, divided by the welfare of the unreduced rule. Exact 2^n
// enumeration. An all-zero instance reports 1 by convention.
double welfare_ratio(const MidrOracle& oracle, const ResamplingLaw& law);

// Expected sum of charged payments divided by the pivot revenue of the
// unreduced rule. The caller should ensure the pivot revenue is positive;
// zero revenue reports 1 by convention (both sides zero for such instances).
double revenue_ratio(const MidrOracle& oracle, const ResamplingLaw& law);

struct RiskStats {
    double mean_abs_deviation = 0.0; // largest |E[c_i]| across agents; 0 for valid laws
    double max_variance = 0.0;
    double max_abs_coeff = 0.0;
};

// Exact enumeration of the coefficient moments under the law.
RiskStats risk_stats(const ResamplingLaw& law);

MetricsRecord midr_metrics(const MidrOracle& oracle, const ProductGammaDistribution& law);

// Table on which the welfare guarantee is tight: one distinguished agent has
// value 1 exactly when kept, everyone else always 0. The ratio then equals
// the probability that agent is kept (1-gamma under the product law).
TableAllocation welfare_tight_witness(std::size_t agents, std::size_t distinguished = 0);

// Table on which the revenue guarantee is tight: value 1/n each when nobody
// is dropped, 1/(n-1) for kept agents when at least one other is dropped.
// Pivot revenue is exactly 1; the reduction collects precision * 1.
TableAllocation revenue_tight_witness(std::size_t agents);

// Exhaustive (n=2) or randomized local-search (n=3) scan over full-support
// subset distributions with precision >= precision_floor, looking for one
// that beats the product law. Two distinct facts come out of it:
//   - worst-case |coefficient|: the product law is the unique minimizer at
//     its precision floor, so best_max_abs_coeff never lands below
//     pibar_max_abs_coeff.
//   - variance: taken alone it is NOT minimized by the product law -- a law
//     can buy lower variance by accepting a larger worst case, and
//     best_max_variance reports that frontier value (typically below the
//     product law's). What does hold is the paired statement: any law that
//     matches the product law's worst case at the floor IS the product law,
//     so best_variance_given_abs cannot beat pibar_max_variance. The
//     product_law_optimal_variance flag asserts that paired statement.
struct SweepReport {
    std::size_t agents = 0;
    double gamma = 0.0;
    double precision_floor = 0.0;
    double resolution = 0.0;
    std::size_t candidates = 0;
    double pibar_max_abs_coeff = 0.0;
    double pibar_max_variance = 0.0;
    double best_max_abs_coeff = 0.0;        // unconstrained minimum of max |c|
    double best_max_variance = 0.0;         // unconstrained minimum of max variance
    double best_variance_given_abs = 0.0;   // min variance with max |c| <= product law's
    std::vector<double> argmin_abs_coeff_masses;
    std::vector<double> argmin_variance_masses;
    bool product_law_optimal_abs = false;
    bool product_law_optimal_variance = false;
};

// agents must be 2 or 3; resolution <= 1e-2 (n=2 grid pitch; n=3 uses it as
// the local-search step floor); precision_floor < 1. The optimality flags
// express claims anchored at the product law's own precision, so pass
// precision_floor = (1-gamma)^agents; a looser floor admits product laws with
// larger gamma, which legitimately have lower variance at the same worst case.
SweepReport optimality_sweep(std::size_t agents, double gamma, double precision_floor,
                             double resolution, std::uint64_t seed = 0);

} // namespace mechlab::metrics
