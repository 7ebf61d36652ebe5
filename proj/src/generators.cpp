#include "mechlab/generators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mechlab::gen {

MidrInstance random_midr_instance(std::size_t agents, std::size_t outcomes,
                                  std::size_t range_size, CounterRng& rng) {
    std::vector<std::string> labels(outcomes);
    for (std::size_t o = 0; o < outcomes; ++o) labels[o] = "o" + std::to_string(o);

    std::vector<double> flat(agents * outcomes);
    for (double& v : flat) v = 10.0 * rng.next_double();

    std::vector<std::vector<double>> range(range_size);
    for (auto& dist : range) {
        dist.assign(outcomes, 0.0);
        if (rng.next_double() < 0.3) {
            dist[rng.next_u64() % outcomes] = 1.0; // point mass
            continue;
        }
        double total = 0.0;
        for (double& p : dist) {
            p = -std::log(1.0 - rng.next_double());
            total += p;
        }
        double running = 0.0;
        for (std::size_t o = 0; o + 1 < outcomes; ++o) {
            dist[o] /= total;
            running += dist[o];
        }
        dist[outcomes - 1] = std::max(0.0, 1.0 - running); // exact normalization
    }
    return MidrInstance(std::move(labels), ValuationMatrix(agents, outcomes, std::move(flat)),
                        std::move(range));
}

MidrInstance single_item_instance(double high, double low) {
    ValuationMatrix values(2, 2, {high, 0.0, 0.0, low});
    return MidrInstance({"give0", "give1"}, values, {{1.0, 0.0}, {0.0, 1.0}});
}

TableAllocation tabulate(const MidrOracle& oracle) {
    const std::size_t n = oracle.agent_count();
    std::vector<std::vector<double>> table(subset_count(n));
    for (std::uint32_t bits = 0; bits < subset_count(n); ++bits)
        table[bits] = oracle.expected_values(SubsetMask(bits, n));
    return TableAllocation(n, std::move(table));
}

GridStepAllocation random_grid_step(std::size_t agents, std::size_t max_thresholds,
                                    CounterRng& rng) {
    std::vector<std::vector<double>> axes(agents);
    std::vector<std::size_t> dims(agents);
    std::size_t cells = 1;
    for (std::size_t a = 0; a < agents; ++a) {
        std::size_t count = 1 + rng.next_u64() % max_thresholds;
        std::vector<double> th(count);
        for (double& t : th) t = 0.1 + rng.next_double();
        std::sort(th.begin(), th.end());
        th.erase(std::unique(th.begin(), th.end()), th.end());
        axes[a] = th;
        dims[a] = th.size() + 1;
        cells *= dims[a];
    }

    std::vector<std::vector<double>> tables(agents);
    for (std::size_t i = 0; i < agents; ++i) {
        std::vector<double> t(cells);
        for (double& v : t) v = rng.next_double();
        // Running maximum along agent i's own axis makes the table monotone.
        std::size_t stride = 1;
        for (std::size_t a = agents; a-- > i + 1;) stride *= dims[a];
        for (std::size_t flat = 0; flat < cells; ++flat) {
            std::size_t own = (flat / stride) % dims[i];
            if (own > 0) t[flat] = std::max(t[flat], t[flat - stride]);
        }
        tables[i] = std::move(t);
    }
    return GridStepAllocation(std::move(axes), std::move(tables));
}

BidVector random_bids(std::size_t agents, double ceiling, CounterRng& rng) {
    std::vector<double> b(agents);
    for (double& v : b) v = ceiling * rng.next_double();
    return BidVector(std::move(b));
}

} // namespace mechlab::gen
