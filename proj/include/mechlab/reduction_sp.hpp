#pragma once

#include <cstdint>
#include <vector>

#include "mechlab/allocation.hpp"
#include "mechlab/rng.hpp"
#include "mechlab/single_call.hpp"
#include "mechlab/types.hpp"

namespace mechlab {

// Resampled bid profile for the single-parameter reduction. Each coordinate is
// kept at b_i with probability 1-gamma; otherwise it is redrawn downward as
// b_i * x^(1/(1-gamma)) with x uniform on [0,1], which puts the conditional
// CDF at (t/b_i)^(1-gamma). Two uniforms are consumed per agent regardless of
// the branch so common-random-number comparisons stay aligned.
struct BksResample {
    BidVector bids;                    // the resampled profile
    std::vector<std::uint8_t> resampled; // 1 where the coordinate was redrawn
};

BksResample bks_resample(const BidVector& bids, double gamma, CounterRng& rng);

// Payment multiplier per coordinate: 1 on the kept branch, 1 - 1/gamma (a
// rebate) on the resampled branch. A zero bid gets coefficient 0.
double bks_coefficient(bool resampled, double gamma);

struct SpReductionRun {
    std::uint64_t seed = 0;
    std::vector<std::uint8_t> resampled;
    std::vector<double> resampled_bids;
    std::vector<double> levels;   // A(b-hat), the one rule evaluation
    std::vector<double> payments; // lambda_i = b_i * c_i * A_i(b-hat)
    std::size_t oracle_calls = 0;
};

// One run of the single-parameter single-call mechanism. Requires bids >= 0
// and gamma in (0,1). Evaluates the rule exactly once, on the resampled
// profile. On the kept branch an agent's payment equals its realized
// surplus (utility 0 under truthful bidding); on the resampled branch the
// agent is paid (1/gamma - 1) * b_i * A_i(b-hat), so realized utility is
// nonnegative whatever the others do.
SpReductionRun run_bks(const SingleParamAllocation& rule, const BidVector& bids,
                       double gamma, CounterRng& rng);

inline bool enforce_single_call(const SpReductionRun& run) {
    return enforce_single_call(run.oracle_calls);
}

} // namespace mechlab
