#include "mechlab/instance.hpp"

#include <cmath>
#include <string>

#include "mechlab/errors.hpp"

namespace mechlab {

namespace {
constexpr double kProbTol = 1e-12;
}

MidrInstance::MidrInstance(std::vector<std::string> outcome_labels,
                           ValuationMatrix valuations,
                           std::vector<std::vector<double>> range)
    : labels_(std::move(outcome_labels)),
      valuations_(std::move(valuations)),
      range_(std::move(range)) {
    if (labels_.size() != valuations_.outcomes())
        throw ConfigError("MidrInstance: label count does not match outcome count");
    if (valuations_.agents() > kMaxEnumerableAgents)
        throw ConfigError("MidrInstance: too many agents for exact subset enumeration");
    if (range_.empty())
        throw ConfigError("MidrInstance: range must contain at least one distribution");
    for (std::size_t d = 0; d < range_.size(); ++d) {
        const auto& dist = range_[d];
        if (dist.size() != valuations_.outcomes())
            throw ConfigError("MidrInstance: distribution " + std::to_string(d) +
                              " has wrong outcome count");
        double sum = 0.0;
        for (double p : dist) {
            if (!std::isfinite(p) || p < 0.0)
                throw ConfigError("MidrInstance: distribution " + std::to_string(d) +
                                  " has a negative or non-finite probability");
            sum += p;
        }
        if (std::abs(sum - 1.0) > kProbTol)
            throw ConfigError("MidrInstance: distribution " + std::to_string(d) +
                              " does not sum to 1");
    }
}

std::size_t midr_argmax(const MidrInstance& inst, const ValuationMatrix& bids,
                        const SubsetMask& mask) {
    if (bids.agents() != inst.agents() || bids.outcomes() != inst.outcomes())
        throw std::invalid_argument("midr_argmax: bid matrix shape mismatch");
    if (mask.agent_count() != inst.agents())
        throw std::invalid_argument("midr_argmax: mask size mismatch");

    // Column sums over the kept agents; each candidate is then one dot product.
    std::vector<double> col(inst.outcomes(), 0.0);
    for (std::size_t i = 0; i < inst.agents(); ++i) {
        if (!mask.contains(i)) continue;
        for (std::size_t o = 0; o < inst.outcomes(); ++o)
            col[o] += bids.at(i, o);
    }

    std::size_t best = 0;
    double best_welfare = -1.0;
    for (std::size_t d = 0; d < inst.range_size(); ++d) {
        const auto& dist = inst.distribution(d);
        double w = 0.0;
        for (std::size_t o = 0; o < inst.outcomes(); ++o)
            w += dist[o] * col[o];
        if (d == 0 || w > best_welfare) {
            best = d;
            best_welfare = w;
        }
    }
    return best;
}

MidrChoice midr_allocate(const MidrInstance& inst, const ValuationMatrix& bids,
                         const SubsetMask& mask, CounterRng& rng) {
    std::size_t d = midr_argmax(inst, bids, mask);
    const auto& dist = inst.distribution(d);

    double u = rng.next_double();
    double cum = 0.0;
    std::size_t last_positive = 0;
    bool seen_positive = false;
    for (std::size_t o = 0; o < dist.size(); ++o) {
        if (dist[o] <= 0.0) continue;
        last_positive = o;
        seen_positive = true;
        cum += dist[o];
        if (u < cum) return {d, o};
    }
    if (!seen_positive)
        throw NumericalError("midr_allocate: chosen distribution has no positive mass");
    return {d, last_positive};
}

std::vector<double> midr_expected_values(const MidrInstance& inst, const ValuationMatrix& bids,
                                         const SubsetMask& mask) {
    std::size_t d = midr_argmax(inst, bids, mask);
    const auto& dist = inst.distribution(d);
    std::vector<double> out(inst.agents(), 0.0);
    for (std::size_t i = 0; i < inst.agents(); ++i) {
        double v = 0.0;
        for (std::size_t o = 0; o < inst.outcomes(); ++o)
            v += dist[o] * bids.at(i, o);
        out[i] = v;
    }
    return out;
}

} // namespace mechlab
