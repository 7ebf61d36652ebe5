#include "mechlab/reduction_sp.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mechlab {

namespace {

void check_gamma(double gamma) {
    if (!(gamma > 0.0) || !(gamma < 1.0))
        throw std::invalid_argument("bks: gamma must be in (0,1)");
}

} // namespace

BksResample bks_resample(const BidVector& bids, double gamma, CounterRng& rng) {
    check_gamma(gamma);
    if (!bids.all_nonnegative())
        throw std::invalid_argument("bks_resample: bids must be >= 0");

    const std::size_t n = bids.size();
    std::vector<double> out(n);
    std::vector<std::uint8_t> flags(n, 0);
    const double exponent = 1.0 / (1.0 - gamma);
    for (std::size_t i = 0; i < n; ++i) {
        double u_keep = rng.next_double();
        double u_draw = rng.next_double(); // always consumed, see header
        if (u_keep < 1.0 - gamma) {
            out[i] = bids[i];
        } else {
            flags[i] = 1;
            out[i] = bids[i] * std::pow(u_draw, exponent);
        }
    }
    return {BidVector(std::move(out)), std::move(flags)};
}

double bks_coefficient(bool resampled, double gamma) {
    check_gamma(gamma);
    return resampled ? 1.0 - 1.0 / gamma : 1.0;
}

SpReductionRun run_bks(const SingleParamAllocation& rule, const BidVector& bids,
                       double gamma, CounterRng& rng) {
    if (bids.size() != rule.agent_count())
        throw std::invalid_argument("run_bks: bid count does not match rule");

    SpReductionRun run;
    run.seed = rng.seed();

    BksResample rs = bks_resample(bids, gamma, rng);
    run.resampled = rs.resampled;
    run.resampled_bids = rs.bids.values();

    CountedAllocation counted(rule);
    run.levels = counted.levels(rs.bids);
    run.oracle_calls = counted.calls();

    const std::size_t n = bids.size();
    run.payments.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double c = (bids[i] == 0.0) ? 0.0 : bks_coefficient(run.resampled[i] != 0, gamma);
        run.payments[i] = bids[i] * c * run.levels[i];
    }

    if (!enforce_single_call(run))
        throw std::logic_error("run_bks: rule consulted " + std::to_string(run.oracle_calls) +
                               " times, expected 1");
    return run;
}

} // namespace mechlab
