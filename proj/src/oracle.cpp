#include "mechlab/oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "mechlab/errors.hpp"

namespace mechlab {

InstanceOracle::InstanceOracle(const MidrInstance& inst, const ValuationMatrix& bids)
    : inst_(&inst), bids_(&bids) {
    if (bids.agents() != inst.agents() || bids.outcomes() != inst.outcomes())
        throw std::invalid_argument("InstanceOracle: bid matrix shape mismatch");
}

OracleResult InstanceOracle::evaluate(const SubsetMask& mask, CounterRng& rng) const {
    MidrChoice choice = midr_allocate(*inst_, *bids_, mask, rng);
    std::vector<double> values(inst_->agents());
    for (std::size_t i = 0; i < inst_->agents(); ++i)
        values[i] = bids_->at(i, choice.outcome_index);
    return {std::move(values), choice.range_index, choice.outcome_index};
}

std::vector<double> InstanceOracle::expected_values(const SubsetMask& mask) const {
    return midr_expected_values(*inst_, *bids_, mask);
}

TableAllocation::TableAllocation(std::size_t agents,
                                 std::vector<std::vector<double>> values_by_mask)
    : agents_(agents), values_(std::move(values_by_mask)) {
    if (agents_ == 0 || agents_ > kMaxEnumerableAgents)
        throw ConfigError("TableAllocation: agent count out of range");
    if (values_.size() != subset_count(agents_))
        throw ConfigError("TableAllocation: need one row per subset");
    for (std::size_t m = 0; m < values_.size(); ++m) {
        if (values_[m].size() != agents_)
            throw ConfigError("TableAllocation: row " + std::to_string(m) +
                              " has wrong agent count");
        for (double v : values_[m])
            if (!std::isfinite(v) || v < 0.0)
                throw ConfigError("TableAllocation: values must be finite and >= 0");
    }
}

OracleResult TableAllocation::evaluate(const SubsetMask& mask, CounterRng&) const {
    return {values_[mask.bits()], std::nullopt, std::nullopt};
}

std::vector<double> TableAllocation::expected_values(const SubsetMask& mask) const {
    return values_[mask.bits()];
}

ReferencePaymentProbe clarke_pivot_reference(const MidrOracle& oracle, CounterRng& rng) {
    const std::size_t n = oracle.agent_count();
    CountedMidrOracle counted(oracle);
    SubsetMask full = SubsetMask::full(n);

    OracleResult at_full = counted.evaluate(full, rng);
    std::vector<double> payments(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        OracleResult dropped = counted.evaluate(full.without(i), rng);
        double with_i = 0.0, without_i = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            with_i += at_full.agent_values[j];
            without_i += dropped.agent_values[j];
        }
        payments[i] = without_i - with_i;
    }
    return {std::move(payments), counted.calls()};
}

} // namespace mechlab
