#include "mechlab/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "mechlab/errors.hpp"

namespace mechlab {

namespace {

void check_agent_match(const SingleParamAllocation& rule, const BidVector& bids) {
    if (bids.size() != rule.agent_count())
        throw std::invalid_argument("allocation: bid count does not match agent count");
}

} // namespace

PostedThreshold::PostedThreshold(std::vector<double> thresholds, double weight)
    : thresholds_(std::move(thresholds)), weight_(weight) {
    if (thresholds_.empty())
        throw ConfigError("PostedThreshold: need at least one agent");
    for (double t : thresholds_)
        if (!std::isfinite(t) || t < 0.0)
            throw ConfigError("PostedThreshold: thresholds must be finite and >= 0");
    if (!(weight_ > 0.0) || !std::isfinite(weight_))
        throw ConfigError("PostedThreshold: weight must be positive");
}

std::vector<double> PostedThreshold::levels(const BidVector& bids) const {
    check_agent_match(*this, bids);
    std::vector<double> out(bids.size(), 0.0);
    for (std::size_t i = 0; i < bids.size(); ++i)
        if (bids[i] >= thresholds_[i]) out[i] = weight_;
    return out;
}

std::optional<double> PostedThreshold::own_bid_integral(std::size_t agent,
                                                        const BidVector& bids,
                                                        double upper) const {
    check_agent_match(*this, bids);
    if (agent >= thresholds_.size())
        throw std::invalid_argument("PostedThreshold: agent out of range");
    return weight_ * std::max(0.0, upper - thresholds_[agent]);
}

TopKByScore::TopKByScore(std::size_t k, std::vector<double> score_weights, double weight)
    : k_(k), score_weights_(std::move(score_weights)), weight_(weight) {
    if (score_weights_.empty())
        throw ConfigError("TopKByScore: need at least one agent");
    if (k_ == 0 || k_ > score_weights_.size())
        throw ConfigError("TopKByScore: k out of range");
    for (double w : score_weights_)
        if (!std::isfinite(w) || w <= 0.0)
            throw ConfigError("TopKByScore: score weights must be positive");
    if (!(weight_ > 0.0) || !std::isfinite(weight_))
        throw ConfigError("TopKByScore: weight must be positive");
}

std::vector<double> TopKByScore::levels(const BidVector& bids) const {
    check_agent_match(*this, bids);
    const std::size_t n = bids.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return score_weights_[a] * bids[a] > score_weights_[b] * bids[b];
    });
    std::vector<double> out(n, 0.0);
    for (std::size_t r = 0; r < k_; ++r) out[order[r]] = weight_;
    return out;
}

GridStepAllocation::GridStepAllocation(std::vector<std::vector<double>> axis_thresholds,
                                       std::vector<std::vector<double>> agent_tables,
                                       double max_level)
    : axis_thresholds_(std::move(axis_thresholds)),
      agent_tables_(std::move(agent_tables)),
      max_level_(max_level) {
    const std::size_t n = axis_thresholds_.size();
    if (n == 0)
        throw ConfigError("GridStepAllocation: need at least one agent");
    if (agent_tables_.size() != n)
        throw ConfigError("GridStepAllocation: need one table per agent");
    if (!(max_level_ > 0.0) || !std::isfinite(max_level_))
        throw ConfigError("GridStepAllocation: max level must be positive");

    dims_.resize(n);
    std::size_t cells = 1;
    for (std::size_t a = 0; a < n; ++a) {
        const auto& th = axis_thresholds_[a];
        for (std::size_t j = 0; j < th.size(); ++j) {
            if (!std::isfinite(th[j]) || th[j] <= 0.0)
                throw ConfigError("GridStepAllocation: thresholds must be positive");
            if (j > 0 && th[j] <= th[j - 1])
                throw ConfigError("GridStepAllocation: thresholds must be strictly increasing");
        }
        dims_[a] = th.size() + 1;
        cells *= dims_[a];
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (agent_tables_[i].size() != cells)
            throw ConfigError("GridStepAllocation: table for agent " + std::to_string(i) +
                              " has wrong cell count");
        for (double v : agent_tables_[i])
            if (!std::isfinite(v) || v < 0.0 || v > max_level_)
                throw ConfigError("GridStepAllocation: table values must be in [0, max level]");
    }

    // Monotone along the agent's own axis, for every fixed profile of others.
    std::vector<std::size_t> cell(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        std::fill(cell.begin(), cell.end(), 0);
        for (std::size_t flat = 0; flat < cells; ++flat) {
            if (cell[i] + 1 < dims_[i]) {
                std::vector<std::size_t> up = cell;
                ++up[i];
                if (table_value(i, up) < table_value(i, cell))
                    throw ConfigError("GridStepAllocation: table for agent " +
                                      std::to_string(i) + " is not monotone in its own bid");
            }
            // advance mixed-radix counter
            for (std::size_t a = n; a-- > 0;) {
                if (++cell[a] < dims_[a]) break;
                cell[a] = 0;
            }
        }
    }
}

std::size_t GridStepAllocation::cell_index(std::size_t axis, double x) const {
    const auto& th = axis_thresholds_[axis];
    return static_cast<std::size_t>(std::upper_bound(th.begin(), th.end(), x) - th.begin());
}

std::size_t GridStepAllocation::flat_index(const std::vector<std::size_t>& cell) const {
    std::size_t idx = 0;
    for (std::size_t a = 0; a < dims_.size(); ++a)
        idx = idx * dims_[a] + cell[a];
    return idx;
}

double GridStepAllocation::table_value(std::size_t agent,
                                       const std::vector<std::size_t>& cell) const {
    return agent_tables_[agent][flat_index(cell)];
}

std::vector<double> GridStepAllocation::levels(const BidVector& bids) const {
    check_agent_match(*this, bids);
    const std::size_t n = agent_count();
    std::vector<std::size_t> cell(n);
    for (std::size_t a = 0; a < n; ++a) cell[a] = cell_index(a, bids[a]);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = table_value(i, cell);
    return out;
}

std::optional<double> GridStepAllocation::own_bid_integral(std::size_t agent,
                                                           const BidVector& bids,
                                                           double upper) const {
    check_agent_match(*this, bids);
    if (upper <= 0.0) return 0.0;
    const std::size_t n = agent_count();
    std::vector<std::size_t> cell(n);
    for (std::size_t a = 0; a < n; ++a) cell[a] = cell_index(a, bids[a]);

    // Walk the agent's own axis segments [s_k, s_{k+1}) intersected with [0, upper].
    const auto& th = axis_thresholds_[agent];
    double total = 0.0;
    double lo = 0.0;
    for (std::size_t seg = 0; seg <= th.size(); ++seg) {
        double hi = (seg < th.size()) ? th[seg] : upper;
        hi = std::min(hi, upper);
        if (hi > lo) {
            cell[agent] = seg;
            total += (hi - lo) * table_value(agent, cell);
            lo = hi;
        }
        if (lo >= upper) break;
    }
    return total;
}

double monotonicity_probe(const SingleParamAllocation& rule, double bid_ceiling,
                          std::size_t probes, CounterRng& rng) {
    const std::size_t n = rule.agent_count();
    double worst = 0.0;
    for (std::size_t p = 0; p < probes; ++p) {
        std::vector<double> b(n);
        for (std::size_t i = 0; i < n; ++i) b[i] = rng.next_double() * bid_ceiling;
        std::size_t i = static_cast<std::size_t>(rng.next_u64() % n);
        double lo_bid = b[i];
        double hi_bid = lo_bid + rng.next_double() * (bid_ceiling - lo_bid);
        BidVector low(b);
        b[i] = hi_bid;
        BidVector high(b);
        double delta = rule.level(i, high) - rule.level(i, low);
        worst = std::min(worst, delta);
    }
    return worst;
}

} // namespace mechlab
