#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mechlab/rng.hpp"
#include "mechlab/subset.hpp"
#include "mechlab/types.hpp"

namespace mechlab {

// An allocation problem whose rule picks, from a fixed range of outcome
// distributions, one maximizing the bidders' expected welfare. Ties break to
// the lowest range index (fixed so runs are reproducible).
class MidrInstance {
public:
    MidrInstance(std::vector<std::string> outcome_labels,
                 ValuationMatrix valuations,
                 std::vector<std::vector<double>> range);

    std::size_t agents() const { return valuations_.agents(); }
    std::size_t outcomes() const { return valuations_.outcomes(); }
    std::size_t range_size() const { return range_.size(); }

    const std::vector<std::string>& outcome_labels() const { return labels_; }
    const ValuationMatrix& valuations() const { return valuations_; }
    const std::vector<double>& distribution(std::size_t d) const { return range_[d]; }

private:
    std::vector<std::string> labels_;
    ValuationMatrix valuations_;
    std::vector<std::vector<double>> range_;
};

// Index of the welfare-maximizing distribution for the agents in `mask`,
// welfare measured with the given reported bids. Lowest index wins ties.
std::size_t midr_argmax(const MidrInstance& inst, const ValuationMatrix& bids,
                        const SubsetMask& mask);

struct MidrChoice {
    std::size_t range_index;
    std::size_t outcome_index;
};

// Run the rule once: pick the argmax distribution for `mask` and sample a
// concrete outcome from it (one uniform draw, inverse CDF).
MidrChoice midr_allocate(const MidrInstance& inst, const ValuationMatrix& bids,
                         const SubsetMask& mask, CounterRng& rng);

// Expected value per agent (under `bids`) of the distribution the rule picks
// for `mask`. This is the exact counterpart of a sampled evaluation.
std::vector<double> midr_expected_values(const MidrInstance& inst, const ValuationMatrix& bids,
                                         const SubsetMask& mask);

} // namespace mechlab
