#pragma once

#include <cstddef>
#include <vector>

#include "mechlab/allocation.hpp"
#include "mechlab/oracle.hpp"
#include "mechlab/rng.hpp"
#include "mechlab/types.hpp"

namespace mechlab::ppc {

// Position auction with separable click rates: ad i in slot j is clicked with
// probability slot_factor[j] * ad_factor[i]. The auctioneer ranks with its
// *estimated* factors; payments in the broken mechanism also use estimates.
// Slot factors must be sorted descending and the estimated slot order must
// agree with the true one, otherwise ranking by estimate is not monotone.
struct PpcSeparableInstance {
    std::vector<double> slot_factors;     // true, descending, in (0, 1]
    std::vector<double> est_slot_factors; // estimates, descending
    std::vector<double> ad_factors;       // true per-ad factors, in (0, 1]
    std::vector<double> est_ad_factors;   // estimates, positive
    std::vector<double> values_per_click; // true value per click, >= 0

    PpcSeparableInstance(std::vector<double> slot_factors,
                         std::vector<double> est_slot_factors,
                         std::vector<double> ad_factors,
                         std::vector<double> est_ad_factors,
                         std::vector<double> values_per_click);

    std::size_t ads() const { return ad_factors.size(); }
    std::size_t slots() const { return slot_factors.size(); }
};

// Rank ads by estimated score (est_ad_factor * bid, ties to the lower index)
// into slots by estimated slot factor, then charge each winner the classical
// externality price computed *per expected click with estimated rates*. This
// is the textbook construction that silently loses truthfulness the moment
// the estimates are off.
struct NaiveVcgResult {
    std::vector<int> slot_of_ad; // -1 when unassigned
    std::vector<double> per_click_price;
    std::vector<double> expected_utility; // with true rates and true values
};
NaiveVcgResult naive_vcg(const PpcSeparableInstance& inst, const BidVector& bids);

// Expected utility of one ad under the naive mechanism when it bids `report`
// and everyone else bids truthfully. Exact (no sampling); the non-truthfulness
// witness is u(bid below value) > u(truthful bid).
double naive_vcg_utility(const PpcSeparableInstance& inst, std::size_t ad, double report);

// The skewed two-ad example: slot rates (0.1, 0.09), estimated (0.11, 0.09),
// values (1.1, 1.0). Truthful utility of ad 0 is about 0.0918; bidding 0
// yields 0.099, so the naive mechanism is manipulable. With exact estimates
// (skew 1.0) truth is optimal.
struct SkewExampleReport {
    double u_truth = 0.0;
    double u_lie = 0.0;
    bool lying_profitable = false;
    bool welfare_order_holds = false; // estimated ranking still welfare-optimal
};
SkewExampleReport skewed_estimate_example(double estimate_skew = 1.1);

// The separable auction viewed as a monotone single-parameter rule: the level
// of ad i is its *true* click rate in the slot it wins under estimated
// ranking. Wrapping this in the single-parameter single-call reduction
// repairs truthfulness without extra click data.
class PpcSpAllocation final : public SingleParamAllocation {
public:
    explicit PpcSpAllocation(const PpcSeparableInstance& inst);

    std::size_t agent_count() const override;
    std::vector<double> levels(const BidVector& bids) const override;

private:
    const PpcSeparableInstance* inst_;
};

// Outcome-dependent click rates and values: ctr(i,j) and the advertiser's
// value(i,j) both depend on the slot. Multi-parameter, so the repair goes
// through the distributional-range reduction instead.
struct PpcMultiInstance {
    std::size_t ads_count = 0;
    std::size_t slots_count = 0;
    std::vector<double> ctr;   // ads x slots, row-major, in [0, 1]
    std::vector<double> value; // ads x slots, true value per click, >= 0

    PpcMultiInstance(std::size_t ads, std::size_t slots, std::vector<double> ctr,
                     std::vector<double> value);

    double click_rate(std::size_t ad, std::size_t slot) const {
        return ctr[ad * slots_count + slot];
    }
    double value_per_click(std::size_t ad, std::size_t slot) const {
        return value[ad * slots_count + slot];
    }
};

// All injective assignments of min(ads, slots) ads to slots, in a fixed
// deterministic order (ties in welfare break to the earliest).
std::vector<std::vector<int>> enumerate_assignments(std::size_t ads, std::size_t slots);

// Welfare-maximizing assignment for the kept ads, welfare measured with true
// click rates and *reported* per-(ad,slot) values.
std::vector<int> best_assignment(const PpcMultiInstance& inst, const ValuationMatrix& bids,
                                 const SubsetMask& mask);

// The multi-parameter auction as a subset oracle: each agent's value of an
// assignment is ctr * reported value in its slot. Deterministic point-mass
// outcomes; outcome_index identifies the assignment.
class PpcMidrOracle final : public MidrOracle {
public:
    PpcMidrOracle(const PpcMultiInstance& inst, const ValuationMatrix& bids);

    std::size_t agent_count() const override { return inst_->ads_count; }
    OracleResult evaluate(const SubsetMask& mask, CounterRng& rng) const override;
    std::vector<double> expected_values(const SubsetMask& mask) const override;

    const std::vector<std::vector<int>>& assignments() const { return assignments_; }

private:
    const PpcMultiInstance* inst_;
    const ValuationMatrix* bids_;
    std::vector<std::vector<int>> assignments_;
};

// One impression: independent click per assigned ad with its true rate, and
// the per-ad measured value (value per click when clicked, else 0) whose
// expectation is exactly ctr * value.
struct ClickRealization {
    std::vector<std::uint8_t> clicked;
    std::vector<double> measured_value;
};
ClickRealization realize_clicks(const std::vector<double>& click_prob,
                                const std::vector<double>& value_per_click, CounterRng& rng);

} // namespace mechlab::ppc
