#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mechlab/oracle.hpp"
#include "mechlab/resampling.hpp"
#include "mechlab/rng.hpp"

namespace mechlab {

// Record of one single-call run: which subset was kept, what the one oracle
// evaluation realized, and the payments charged. Replaying the seed
// reproduces the run bit for bit; the kept-subset mask together with the
// original bids determines the resampled bid profile.
struct ReductionRun {
    std::uint64_t seed = 0;
    SubsetMask mask = SubsetMask::empty(1);
    std::optional<std::size_t> range_index;
    std::optional<std::size_t> outcome_index;
    std::vector<double> agent_values; // every agent's reported value of the outcome
    std::vector<double> payments;
    std::size_t oracle_calls = 0;
};

// Sample a subset M from the law, evaluate the rule exactly once on the
// resampled profile, and charge each agent
//   coefficient(i, M) * sum of kept agents' (j != i) realized values.
// Hard-errors if the oracle was consulted more or less than once.
ReductionRun run_generic_midr(const MidrOracle& oracle, const ResamplingLaw& law,
                              CounterRng& rng);

// The product-form instantiation: each agent dropped independently with
// probability gamma. gamma outside (0,1) is an argument error.
ReductionRun run_optmidr(const MidrOracle& oracle, double gamma, CounterRng& rng);
ReductionRun run_optmidr(const MidrInstance& inst, const ValuationMatrix& bids,
                         double gamma, CounterRng& rng);

inline bool enforce_single_call(const ReductionRun& run) {
    return enforce_single_call(run.oracle_calls);
}

} // namespace mechlab
