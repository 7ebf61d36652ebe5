#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "mechlab/instance.hpp"
#include "mechlab/rng.hpp"
#include "mechlab/single_call.hpp"
#include "mechlab/subset.hpp"
#include "mechlab/types.hpp"

namespace mechlab {

// What one oracle evaluation reports back: each agent's (reported-bid) value
// of the realized outcome, plus outcome identifiers when the oracle has them.
struct OracleResult {
    std::vector<double> agent_values;
    std::optional<std::size_t> range_index;
    std::optional<std::size_t> outcome_index;
};

// An allocation rule the reductions may invoke at most once per run. evaluate()
// realizes an outcome for the kept agents; expected_values() is the exact
// distribution-level counterpart used by verifiers and metrics.
class MidrOracle {
public:
    virtual ~MidrOracle() = default;
    virtual std::size_t agent_count() const = 0;
    virtual OracleResult evaluate(const SubsetMask& mask, CounterRng& rng) const = 0;
    virtual std::vector<double> expected_values(const SubsetMask& mask) const = 0;
};

// MidrInstance plus a fixed reported bid matrix.
class InstanceOracle final : public MidrOracle {
public:
    InstanceOracle(const MidrInstance& inst, const ValuationMatrix& bids);

    std::size_t agent_count() const override { return inst_->agents(); }
    OracleResult evaluate(const SubsetMask& mask, CounterRng& rng) const override;
    std::vector<double> expected_values(const SubsetMask& mask) const override;

private:
    const MidrInstance* inst_;
    const ValuationMatrix* bids_;
};

// Direct per-subset specification of every agent's realized value w_i(M).
// Deterministic: evaluate and expected_values agree.
class TableAllocation final : public MidrOracle {
public:
    TableAllocation(std::size_t agents, std::vector<std::vector<double>> values_by_mask);

    std::size_t agent_count() const override { return agents_; }
    OracleResult evaluate(const SubsetMask& mask, CounterRng& rng) const override;
    std::vector<double> expected_values(const SubsetMask& mask) const override;

    const std::vector<double>& row(std::uint32_t mask_bits) const { return values_[mask_bits]; }

private:
    std::size_t agents_;
    std::vector<std::vector<double>> values_; // indexed by mask bits
};

// Decorator that counts realized evaluations. Reductions must leave it at 1.
class CountedMidrOracle final : public MidrOracle {
public:
    explicit CountedMidrOracle(const MidrOracle& inner) : inner_(&inner) {}

    std::size_t agent_count() const override { return inner_->agent_count(); }
    OracleResult evaluate(const SubsetMask& mask, CounterRng& rng) const override {
        ++calls_;
        return inner_->evaluate(mask, rng);
    }
    std::vector<double> expected_values(const SubsetMask& mask) const override {
        return inner_->expected_values(mask);
    }

    std::size_t calls() const { return calls_; }
    void reset() { calls_ = 0; }

private:
    const MidrOracle* inner_;
    mutable std::size_t calls_ = 0;
};

// Payments computed the classical way: evaluate the rule with each agent
// removed in turn. Exists as a negative control for the single-call property;
// uses 1 + n oracle evaluations.
struct ReferencePaymentProbe {
    std::vector<double> payments;
    std::size_t oracle_calls;
};
ReferencePaymentProbe clarke_pivot_reference(const MidrOracle& oracle, CounterRng& rng);

inline bool enforce_single_call(const ReferencePaymentProbe& probe) {
    return enforce_single_call(probe.oracle_calls);
}

} // namespace mechlab
