#include "mechlab/ppc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "mechlab/errors.hpp"

namespace mechlab::ppc {

namespace {

void check_rates(const std::vector<double>& v, const char* what, bool strict_positive) {
    for (double x : v) {
        if (!std::isfinite(x) || x < 0.0 || x > 1.0 || (strict_positive && x == 0.0))
            throw ConfigError(std::string("ppc: ") + what + " must lie in " +
                              (strict_positive ? "(0, 1]" : "[0, 1]"));
    }
}

// Rank agents by score descending, ties to the lower index.
std::vector<std::size_t> rank_by_score(const std::vector<double>& scores) {
    std::vector<std::size_t> order(scores.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    return order;
}

} // namespace

PpcSeparableInstance::PpcSeparableInstance(std::vector<double> slot_f,
                                           std::vector<double> est_slot_f,
                                           std::vector<double> ad_f,
                                           std::vector<double> est_ad_f,
                                           std::vector<double> values)
    : slot_factors(std::move(slot_f)),
      est_slot_factors(std::move(est_slot_f)),
      ad_factors(std::move(ad_f)),
      est_ad_factors(std::move(est_ad_f)),
      values_per_click(std::move(values)) {
    if (slot_factors.empty() || ad_factors.empty())
        throw ConfigError("ppc: need at least one slot and one ad");
    if (est_slot_factors.size() != slot_factors.size())
        throw ConfigError("ppc: estimated slot factor count mismatch");
    if (est_ad_factors.size() != ad_factors.size() ||
        values_per_click.size() != ad_factors.size())
        throw ConfigError("ppc: per-ad vector size mismatch");
    check_rates(slot_factors, "slot factors", true);
    check_rates(ad_factors, "ad factors", true);
    for (double x : est_slot_factors)
        if (!std::isfinite(x) || x <= 0.0)
            throw ConfigError("ppc: estimated slot factors must be positive");
    for (double x : est_ad_factors)
        if (!std::isfinite(x) || x <= 0.0)
            throw ConfigError("ppc: estimated ad factors must be positive");
    for (double v : values_per_click)
        if (!std::isfinite(v) || v < 0.0)
            throw ConfigError("ppc: values per click must be >= 0");
    for (std::size_t j = 1; j < slot_factors.size(); ++j) {
        if (slot_factors[j] > slot_factors[j - 1])
            throw ConfigError("ppc: slot factors must be sorted descending");
        if (est_slot_factors[j] > est_slot_factors[j - 1])
            throw ConfigError("ppc: estimated slot order disagrees with the true order");
    }
}

NaiveVcgResult naive_vcg(const PpcSeparableInstance& inst, const BidVector& bids) {
    if (bids.size() != inst.ads())
        throw std::invalid_argument("naive_vcg: bid count mismatch");
    if (!bids.all_nonnegative())
        throw std::invalid_argument("naive_vcg: bids must be >= 0");

    const std::size_t n = inst.ads();
    const std::size_t m = inst.slots();
    const std::size_t assigned = std::min(n, m);

    std::vector<double> scores(n);
    for (std::size_t i = 0; i < n; ++i) scores[i] = inst.est_ad_factors[i] * bids[i];
    std::vector<std::size_t> order = rank_by_score(scores);

    NaiveVcgResult res;
    res.slot_of_ad.assign(n, -1);
    res.per_click_price.assign(n, 0.0);
    res.expected_utility.assign(n, 0.0);
    for (std::size_t r = 0; r < assigned; ++r) res.slot_of_ad[order[r]] = static_cast<int>(r);

    // Externality price with estimated rates: moving everyone below j up one
    // slot. Charged per expected click, i.e. divided by the winner's estimated
    // click volume.
    for (std::size_t r = 0; r < assigned; ++r) {
        std::size_t i = order[r];
        double harm = 0.0;
        for (std::size_t q = r + 1; q < n; ++q) {
            double gained = (q - 1 < m) ? inst.est_slot_factors[q - 1] : 0.0;
            double had = (q < m) ? inst.est_slot_factors[q] : 0.0;
            harm += (gained - had) * inst.est_ad_factors[order[q]] * bids[order[q]];
        }
        double volume = inst.est_slot_factors[r] * inst.est_ad_factors[i];
        res.per_click_price[i] = (volume > 0.0) ? harm / volume : 0.0;
        double true_rate = inst.slot_factors[r] * inst.ad_factors[i];
        res.expected_utility[i] =
            true_rate * (inst.values_per_click[i] - res.per_click_price[i]);
    }
    return res;
}

double naive_vcg_utility(const PpcSeparableInstance& inst, std::size_t ad, double report) {
    if (ad >= inst.ads())
        throw std::invalid_argument("naive_vcg_utility: ad out of range");
    std::vector<double> b = inst.values_per_click; // others truthful
    b[ad] = report;
    return naive_vcg(inst, BidVector(b)).expected_utility[ad];
}

SkewExampleReport skewed_estimate_example(double estimate_skew) {
    std::vector<double> slot_rates{0.1, 0.09};
    std::vector<double> est_rates{0.1 * estimate_skew, 0.09};
    PpcSeparableInstance inst(slot_rates, est_rates, {1.0, 1.0}, {1.0, 1.0}, {1.1, 1.0});

    SkewExampleReport rep;
    rep.u_truth = naive_vcg_utility(inst, 0, inst.values_per_click[0]);
    rep.u_lie = naive_vcg_utility(inst, 0, 0.0);
    rep.lying_profitable = rep.u_lie > rep.u_truth;

    // Estimated ranking puts ad 0 on top; with these numbers that is still the
    // welfare-maximizing order (0.1*1.1 + 0.09*1.0 >= 0.1*1.0 + 0.09*1.1).
    double welfare_as_ranked = slot_rates[0] * 1.1 + slot_rates[1] * 1.0;
    double welfare_swapped = slot_rates[0] * 1.0 + slot_rates[1] * 1.1;
    rep.welfare_order_holds = welfare_as_ranked >= welfare_swapped;
    return rep;
}

PpcSpAllocation::PpcSpAllocation(const PpcSeparableInstance& inst) : inst_(&inst) {}

std::size_t PpcSpAllocation::agent_count() const { return inst_->ads(); }

std::vector<double> PpcSpAllocation::levels(const BidVector& bids) const {
    if (bids.size() != inst_->ads())
        throw std::invalid_argument("PpcSpAllocation: bid count mismatch");
    if (!bids.all_nonnegative())
        throw std::invalid_argument("PpcSpAllocation: bids must be >= 0");

    const std::size_t n = inst_->ads();
    const std::size_t assigned = std::min(n, inst_->slots());
    std::vector<double> scores(n);
    for (std::size_t i = 0; i < n; ++i) scores[i] = inst_->est_ad_factors[i] * bids[i];
    std::vector<std::size_t> order = rank_by_score(scores);

    std::vector<double> out(n, 0.0);
    for (std::size_t r = 0; r < assigned; ++r) {
        std::size_t i = order[r];
        out[i] = inst_->slot_factors[r] * inst_->ad_factors[i]; // true click rate
    }
    return out;
}

PpcMultiInstance::PpcMultiInstance(std::size_t ads, std::size_t slots,
                                   std::vector<double> ctr_in, std::vector<double> value_in)
    : ads_count(ads), slots_count(slots), ctr(std::move(ctr_in)), value(std::move(value_in)) {
    if (ads == 0 || slots == 0)
        throw ConfigError("PpcMultiInstance: need at least one ad and one slot");
    if (ads > 6 || slots > 6)
        throw ConfigError("PpcMultiInstance: assignment enumeration capped at 6x6");
    if (ctr.size() != ads * slots || value.size() != ads * slots)
        throw ConfigError("PpcMultiInstance: matrix size mismatch");
    check_rates(ctr, "click rates", false);
    for (double v : value)
        if (!std::isfinite(v) || v < 0.0)
            throw ConfigError("PpcMultiInstance: values must be >= 0");
}

namespace {

void extend_assignment(std::size_t ad, std::size_t ads, std::size_t need,
                       std::uint32_t used_slots, std::size_t slots,
                       std::vector<int>& current, std::vector<std::vector<int>>& out) {
    if (ad == ads) {
        if (need == 0) out.push_back(current);
        return;
    }
    // Assign a slot (ascending) or skip this ad if enough ads remain.
    if (need > 0) {
        for (std::size_t j = 0; j < slots; ++j) {
            if (used_slots & (1u << j)) continue;
            current[ad] = static_cast<int>(j);
            extend_assignment(ad + 1, ads, need - 1, used_slots | (1u << j), slots, current,
                              out);
        }
    }
    if (ads - ad - 1 >= need) {
        current[ad] = -1;
        extend_assignment(ad + 1, ads, need, used_slots, slots, current, out);
    }
}

} // namespace

std::vector<std::vector<int>> enumerate_assignments(std::size_t ads, std::size_t slots) {
    std::vector<std::vector<int>> out;
    std::vector<int> current(ads, -1);
    extend_assignment(0, ads, std::min(ads, slots), 0, slots, current, out);
    return out;
}

std::vector<int> best_assignment(const PpcMultiInstance& inst, const ValuationMatrix& bids,
                                 const SubsetMask& mask) {
    PpcMidrOracle oracle(inst, bids);
    CounterRng unused(0); // outcomes are deterministic point masses
    OracleResult res = oracle.evaluate(mask, unused);
    return oracle.assignments()[*res.outcome_index];
}

PpcMidrOracle::PpcMidrOracle(const PpcMultiInstance& inst, const ValuationMatrix& bids)
    : inst_(&inst), bids_(&bids),
      assignments_(enumerate_assignments(inst.ads_count, inst.slots_count)) {
    if (bids.agents() != inst.ads_count || bids.outcomes() != inst.slots_count)
        throw std::invalid_argument("PpcMidrOracle: bid matrix must be ads x slots");
}

OracleResult PpcMidrOracle::evaluate(const SubsetMask& mask, CounterRng&) const {
    if (mask.agent_count() != inst_->ads_count)
        throw std::invalid_argument("PpcMidrOracle: mask size mismatch");

    std::size_t best = 0;
    double best_welfare = -1.0;
    for (std::size_t a = 0; a < assignments_.size(); ++a) {
        double w = 0.0;
        for (std::size_t i = 0; i < inst_->ads_count; ++i) {
            int slot = assignments_[a][i];
            if (slot < 0 || !mask.contains(i)) continue;
            w += inst_->click_rate(i, slot) * bids_->at(i, slot);
        }
        if (a == 0 || w > best_welfare) {
            best = a;
            best_welfare = w;
        }
    }

    std::vector<double> values(inst_->ads_count, 0.0);
    for (std::size_t i = 0; i < inst_->ads_count; ++i) {
        int slot = assignments_[best][i];
        if (slot >= 0) values[i] = inst_->click_rate(i, slot) * bids_->at(i, slot);
    }
    return {std::move(values), best, best};
}

std::vector<double> PpcMidrOracle::expected_values(const SubsetMask& mask) const {
    CounterRng unused(0);
    return evaluate(mask, unused).agent_values;
}

ClickRealization realize_clicks(const std::vector<double>& click_prob,
                                const std::vector<double>& value_per_click, CounterRng& rng) {
    if (click_prob.size() != value_per_click.size())
        throw std::invalid_argument("realize_clicks: size mismatch");
    ClickRealization out;
    out.clicked.resize(click_prob.size(), 0);
    out.measured_value.resize(click_prob.size(), 0.0);
    for (std::size_t i = 0; i < click_prob.size(); ++i) {
        if (!(click_prob[i] >= 0.0) || !(click_prob[i] <= 1.0))
            throw std::invalid_argument("realize_clicks: click probability outside [0,1]");
        if (rng.next_double() < click_prob[i]) {
            out.clicked[i] = 1;
            out.measured_value[i] = value_per_click[i];
        }
    }
    return out;
}

} // namespace mechlab::ppc
