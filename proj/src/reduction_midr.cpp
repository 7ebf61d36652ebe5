#include "mechlab/reduction_midr.hpp"

#include <stdexcept>
#include <string>

#include "mechlab/payments.hpp"

namespace mechlab {

ReductionRun run_generic_midr(const MidrOracle& oracle, const ResamplingLaw& law,
                              CounterRng& rng) {
    const std::size_t n = oracle.agent_count();
    if (law.agent_count() != n)
        throw std::invalid_argument("run_generic_midr: law agent count mismatch");

    ReductionRun run;
    run.seed = rng.seed();
    run.mask = law.sample(rng);

    CountedMidrOracle counted(oracle);
    OracleResult result = counted.evaluate(run.mask, rng);

    run.range_index = result.range_index;
    run.outcome_index = result.outcome_index;
    run.payments.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double others = payments::member_welfare_excluding(result.agent_values, run.mask, i);
        run.payments[i] = law.coefficient(i, run.mask) * others;
    }
    run.agent_values = std::move(result.agent_values);
    run.oracle_calls = counted.calls();

    if (!enforce_single_call(run.oracle_calls))
        throw std::logic_error("run_generic_midr: oracle consulted " +
                               std::to_string(run.oracle_calls) + " times, expected 1");
    return run;
}

ReductionRun run_optmidr(const MidrOracle& oracle, double gamma, CounterRng& rng) {
    ProductGammaDistribution law(gamma, oracle.agent_count());
    return run_generic_midr(oracle, law, rng);
}

ReductionRun run_optmidr(const MidrInstance& inst, const ValuationMatrix& bids,
                         double gamma, CounterRng& rng) {
    InstanceOracle oracle(inst, bids);
    return run_optmidr(static_cast<const MidrOracle&>(oracle), gamma, rng);
}

} // namespace mechlab
