#pragma once

#include <cstddef>
#include <vector>

#include "mechlab/allocation.hpp"
#include "mechlab/instance.hpp"
#include "mechlab/oracle.hpp"
#include "mechlab/resampling.hpp"

namespace mechlab::payments {

// Classical pivot payment for the distributional-range rule: what the others
// could have gotten at best, minus what they get under the chosen distribution.
// Nonnegative, and zero for agents whose presence does not move the choice.
double clarke_pivot(const MidrInstance& inst, const ValuationMatrix& bids, std::size_t agent);

// Truthful payment for a monotone single-parameter rule, normalized so a bid
// of zero pays zero: b_i * A_i(b) - integral of A_i(u, b_{-i}) over [0, b_i].
// Uses the family's closed-form integral when available, otherwise adaptive
// quadrature at the given tolerance.
double archer_tardos_payment(const SingleParamAllocation& rule, const BidVector& bids,
                             std::size_t agent, double quad_tol = 1e-8);

// Sum over members of `mask` except `agent` of the given per-agent values.
// This is the welfare quantity single-call payments are built from: agents
// dropped by the resampling are measured at their resampled (zero) bids.
double member_welfare_excluding(const std::vector<double>& values, const SubsetMask& mask,
                                std::size_t agent);

// Expected payment the single-call reduction charges agent i, written as the
// pivot payment of the composed rule: expected welfare of the others when i is
// dropped from every sampled subset, minus their expected welfare when i
// participates. Exact 2^n enumeration.
double clarke_pivot_of_reduction(const MidrOracle& oracle, const ResamplingLaw& law,
                                 std::size_t agent);

} // namespace mechlab::payments
