#include "mechlab/payments.hpp"

#include <stdexcept>
#include <string>

#include "mechlab/errors.hpp"
#include "mechlab/quadrature.hpp"

namespace mechlab::payments {

double clarke_pivot(const MidrInstance& inst, const ValuationMatrix& bids, std::size_t agent) {
    if (agent >= inst.agents())
        throw std::invalid_argument("clarke_pivot: agent out of range");

    // Others' expected welfare under a distribution d.
    auto others_welfare = [&](std::size_t d) {
        const auto& dist = inst.distribution(d);
        double w = 0.0;
        for (std::size_t o = 0; o < inst.outcomes(); ++o) {
            if (dist[o] == 0.0) continue;
            double col = 0.0;
            for (std::size_t j = 0; j < inst.agents(); ++j)
                if (j != agent) col += bids.at(j, o);
            w += dist[o] * col;
        }
        return w;
    };

    double best_without = 0.0;
    for (std::size_t d = 0; d < inst.range_size(); ++d) {
        double w = others_welfare(d);
        if (d == 0 || w > best_without) best_without = w;
    }
    std::size_t chosen = midr_argmax(inst, bids, SubsetMask::full(inst.agents()));
    return best_without - others_welfare(chosen);
}

double archer_tardos_payment(const SingleParamAllocation& rule, const BidVector& bids,
                             std::size_t agent, double quad_tol) {
    if (agent >= rule.agent_count())
        throw std::invalid_argument("archer_tardos_payment: agent out of range");
    if (!bids.all_nonnegative())
        throw std::invalid_argument("archer_tardos_payment: bids must be >= 0");

    double b_i = bids[agent];
    double surface = b_i * rule.level(agent, bids);

    double area;
    if (auto exact = rule.own_bid_integral(agent, bids, b_i)) {
        area = *exact;
    } else {
        std::vector<double> work = bids.values();
        auto integrand = [&](double u) {
            work[agent] = u;
            return rule.level(agent, BidVector(work));
        };
        QuadratureResult q = integrate_adaptive(integrand, 0.0, b_i, quad_tol);
        if (!q.converged)
            throw NumericalError("archer_tardos_payment: quadrature error " +
                                 std::to_string(q.error_estimate) + " above tolerance");
        area = q.value;
    }
    return surface - area;
}

double member_welfare_excluding(const std::vector<double>& values, const SubsetMask& mask,
                                std::size_t agent) {
    double s = 0.0;
    for (std::size_t j = 0; j < values.size(); ++j)
        if (j != agent && mask.contains(j)) s += values[j];
    return s;
}

double clarke_pivot_of_reduction(const MidrOracle& oracle, const ResamplingLaw& law,
                                 std::size_t agent) {
    const std::size_t n = oracle.agent_count();
    if (agent >= n)
        throw std::invalid_argument("clarke_pivot_of_reduction: agent out of range");
    if (law.agent_count() != n)
        throw std::invalid_argument("clarke_pivot_of_reduction: law agent count mismatch");
    if (n > kMaxEnumerableAgents)
        throw std::invalid_argument("clarke_pivot_of_reduction: too many agents");

    double dropped = 0.0, present = 0.0;
    for (std::uint32_t bits = 0; bits < subset_count(n); ++bits) {
        SubsetMask mask(bits, n);
        std::vector<double> values = oracle.expected_values(mask);
        double others = member_welfare_excluding(values, mask, agent);
        if (mask.contains(agent))
            present += law.mass(mask) * others;
        else
            dropped += law.mass(mask.with(agent)) * others;
    }
    return dropped - present;
}

} // namespace mechlab::payments
