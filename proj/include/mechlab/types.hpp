#pragma once

#include <cstddef>
#include <vector>

#include "mechlab/subset.hpp"

namespace mechlab {

// One scalar bid per agent. Entries must be finite; single-parameter
// reductions additionally require them nonnegative (checked at their entry).
class BidVector {
public:
    explicit BidVector(std::vector<double> values);

    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    const std::vector<double>& values() const { return values_; }

    bool all_nonnegative() const;

private:
    std::vector<double> values_;
};

// Zero out the bids of agents outside M.
BidVector zero_mask_bids(const BidVector& bids, const SubsetMask& mask);

// Row-major n_agents x n_outcomes matrix of nonnegative finite values.
// Used both for true valuations and for reported bids over outcomes.
class ValuationMatrix {
public:
    ValuationMatrix(std::size_t agents, std::size_t outcomes, std::vector<double> flat);
    explicit ValuationMatrix(const std::vector<std::vector<double>>& rows);

    std::size_t agents() const { return agents_; }
    std::size_t outcomes() const { return outcomes_; }
    double at(std::size_t agent, std::size_t outcome) const {
        return flat_[agent * outcomes_ + outcome];
    }

    // Copy with one agent's row rescaled; used for misreport grids.
    ValuationMatrix with_scaled_row(std::size_t agent, double factor) const;
    // Copy with rows outside M zeroed.
    ValuationMatrix masked(const SubsetMask& mask) const;

    const std::vector<double>& flat() const { return flat_; }

private:
    std::size_t agents_;
    std::size_t outcomes_;
    std::vector<double> flat_;
};

} // namespace mechlab
