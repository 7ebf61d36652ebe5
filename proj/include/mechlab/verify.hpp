#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "mechlab/allocation.hpp"
#include "mechlab/oracle.hpp"
#include "mechlab/reduction_sp.hpp"
#include "mechlab/resampling.hpp"

namespace mechlab::verify {

// Exact truthfulness check for the subset-resampling reduction: per agent,
// the expected charged payment (assembled from the law's coefficients, the
// same code path the runs use) must equal the pivot payment of the composed
// rule (assembled from the law's masses). Returns |difference| per agent.
std::vector<double> midr_truthfulness_residuals(const MidrOracle& oracle,
                                                const ResamplingLaw& law);
double midr_truthfulness_max_residual(const MidrOracle& oracle, const ResamplingLaw& law);

// Exact expected-payment identity for the single-parameter reduction on a
// grid-step rule: E[lambda_i] computed by enumerating the product resampling
// measure cell by cell must equal
//   b_i * E[A_i(b-hat)] - integral over [0, b_i] of E[A_i | i bids u] du,
// the unique normalized truthful payment. The left side uses the run-side
// coefficients; the right side integrates with adaptive quadrature.
std::vector<double> bks_payment_identity_residuals(const GridStepAllocation& rule,
                                                   const BidVector& bids, double gamma,
                                                   double quad_tol = 1e-8);

// E over the resampling measure of agent i's allocation at the profile where
// i bids `own_bid` and the others bid as given. Exact cell enumeration.
double bks_expected_level(const GridStepAllocation& rule, const BidVector& bids,
                          std::size_t agent, double own_bid, double gamma);

// One point of a Monte Carlo utility curve over a misreport grid.
struct McPoint {
    double report = 0.0;
    double mean = 0.0;
    double std_err = 0.0;
    double mean_minus_truth = 0.0; // paired difference vs the truthful report
    double diff_std_err = 0.0;     // stderr of that paired difference
};

struct McCurve {
    std::vector<McPoint> points;
    std::size_t truth_index = 0;
    std::size_t samples = 0;
    std::uint64_t seed = 0;

    // No misreport beats truth by more than k sigma-hat of the paired difference.
    bool truthful_within(double k_sigma) const;
    std::size_t argmax_mean() const;
};

using UtilityFn = std::function<double(double report, CounterRng& rng)>;

// Estimate expected utility at every report on the grid with common random
// numbers: replica r uses the same derived stream at every grid point, so the
// paired differences cancel shared noise. Deterministic for a fixed seed and
// independent of thread count. Requires samples >= 10^4 (below that the
// sigma-hat acceptance band is meaningless).
McCurve mc_truthfulness(const UtilityFn& utility, const std::vector<double>& report_grid,
                        std::size_t truth_index, std::size_t samples, std::uint64_t seed);

struct IrNptReport {
    bool ir_ok = true;
    bool npt_ok = true;
    double min_expected_utility = 0.0;
    double min_expected_payment = 0.0;
};

// Expectation-mode check for the subset reduction (exact enumeration):
// truthful expected utility and expected payment are both >= -tol per agent.
IrNptReport ir_npt_expectation(const MidrOracle& oracle, const ResamplingLaw& law,
                               double tol = 1e-12);

struct ExPostReport {
    bool ir_ok = true;
    double min_realized_utility = 0.0;
};

// Ex-post check over realized single-parameter runs: with true values equal
// to the submitted bids, realized utility b_i * A_i(b-hat) - lambda_i must be
// >= -tol on every run (0 on kept branches, a rebate on resampled ones).
ExPostReport ir_expost(const std::vector<SpReductionRun>& runs, const BidVector& true_values,
                       double tol = 1e-12);

} // namespace mechlab::verify
