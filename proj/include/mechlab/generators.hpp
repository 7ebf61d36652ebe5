#pragma once

#include <cstddef>

#include "mechlab/allocation.hpp"
#include "mechlab/instance.hpp"
#include "mechlab/oracle.hpp"
#include "mechlab/rng.hpp"
#include "mechlab/types.hpp"

namespace mechlab::gen {

// Random distributional-range instance: valuations uniform on [0, 10], range
// distributions drawn Dirichlet-style with occasional point masses so argmax
// choices and sampled outcomes exercise both branches.
MidrInstance random_midr_instance(std::size_t agents, std::size_t outcomes,
                                  std::size_t range_size, CounterRng& rng);

// The classic two-outcome, two-agent example: agent 0 values outcome 0 at
// `high`, agent 1 values outcome 1 at `low`, range is the two point masses.
MidrInstance single_item_instance(double high = 10.0, double low = 7.0);

// Tabulate an oracle's exact per-subset values; the result behaves exactly
// like the rule it came from, so it is consistent with some range-maximizing
// rule by construction.
TableAllocation tabulate(const MidrOracle& oracle);

// Random monotone grid-step rule: up to max_thresholds per axis in (0.1, 1.1),
// per-agent tables made monotone along the own axis by a running maximum.
GridStepAllocation random_grid_step(std::size_t agents, std::size_t max_thresholds,
                                    CounterRng& rng);

BidVector random_bids(std::size_t agents, double ceiling, CounterRng& rng);

} // namespace mechlab::gen
