#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "mechlab/rng.hpp"
#include "mechlab/types.hpp"

namespace mechlab {

// A single-parameter allocation rule: each agent reports one scalar bid and
// receives an allocation level in [0, a_max], monotone nondecreasing in the
// agent's own bid. levels() is the (possibly joint) rule evaluation.
class SingleParamAllocation {
public:
    virtual ~SingleParamAllocation() = default;

    virtual std::size_t agent_count() const = 0;
    virtual double a_max() const { return 1.0; }
    virtual std::vector<double> levels(const BidVector& bids) const = 0;

    double level(std::size_t agent, const BidVector& bids) const {
        return levels(bids)[agent];
    }

    // Exact integral of u -> A_i(u, b_{-i}) over [0, upper] when the family
    // supports it in closed form; nullopt means the caller should integrate
    // numerically.
    virtual std::optional<double> own_bid_integral(std::size_t /*agent*/,
                                                   const BidVector& /*bids*/,
                                                   double /*upper*/) const {
        return std::nullopt;
    }
};

// Counts rule evaluations; the single-call reduction must leave it at 1.
class CountedAllocation final : public SingleParamAllocation {
public:
    explicit CountedAllocation(const SingleParamAllocation& inner) : inner_(&inner) {}

    std::size_t agent_count() const override { return inner_->agent_count(); }
    double a_max() const override { return inner_->a_max(); }
    std::vector<double> levels(const BidVector& bids) const override {
        ++calls_;
        return inner_->levels(bids);
    }
    std::optional<double> own_bid_integral(std::size_t agent, const BidVector& bids,
                                           double upper) const override {
        return inner_->own_bid_integral(agent, bids, upper);
    }

    std::size_t calls() const { return calls_; }

private:
    const SingleParamAllocation* inner_;
    mutable std::size_t calls_ = 0;
};

// A_i(b) = weight if b_i >= threshold_i else 0. Threshold 0 means always win.
class PostedThreshold final : public SingleParamAllocation {
public:
    PostedThreshold(std::vector<double> thresholds, double weight = 1.0);

    std::size_t agent_count() const override { return thresholds_.size(); }
    double a_max() const override { return weight_; }
    std::vector<double> levels(const BidVector& bids) const override;
    std::optional<double> own_bid_integral(std::size_t agent, const BidVector& bids,
                                           double upper) const override;

    const std::vector<double>& thresholds() const { return thresholds_; }

private:
    std::vector<double> thresholds_;
    double weight_;
};

// A_i(b) = weight if score_i * b_i is among the k largest scores (ties break
// to the lower agent index), else 0.
class TopKByScore final : public SingleParamAllocation {
public:
    TopKByScore(std::size_t k, std::vector<double> score_weights, double weight = 1.0);

    std::size_t agent_count() const override { return score_weights_.size(); }
    double a_max() const override { return weight_; }
    std::vector<double> levels(const BidVector& bids) const override;

private:
    std::size_t k_;
    std::vector<double> score_weights_;
    double weight_;
};

// Piecewise-constant rule on a rectangular grid. Axis a has strictly
// increasing positive thresholds t_1 < ... < t_m; cell index of x is
// #{t <= x} (right-continuous steps). Each agent has its own table over grid
// cells, required to be nondecreasing along the agent's own axis. Supports
// exact own-bid integrals, which makes it the family exact verifiers use.
class GridStepAllocation final : public SingleParamAllocation {
public:
    GridStepAllocation(std::vector<std::vector<double>> axis_thresholds,
                       std::vector<std::vector<double>> agent_tables,
                       double max_level = 1.0);

    std::size_t agent_count() const override { return axis_thresholds_.size(); }
    double a_max() const override { return max_level_; }
    std::vector<double> levels(const BidVector& bids) const override;
    std::optional<double> own_bid_integral(std::size_t agent, const BidVector& bids,
                                           double upper) const override;

    const std::vector<double>& axis(std::size_t a) const { return axis_thresholds_[a]; }
    std::size_t cell_index(std::size_t axis, double x) const;
    double table_value(std::size_t agent, const std::vector<std::size_t>& cell) const;

private:
    std::size_t flat_index(const std::vector<std::size_t>& cell) const;

    std::vector<std::vector<double>> axis_thresholds_;
    std::vector<std::vector<double>> agent_tables_; // flat, row-major over axes
    std::vector<std::size_t> dims_;
    double max_level_;
};

// 10^4-style random probe helper: returns the worst (most negative) observed
// change of A_i when agent i's bid is raised; >= 0 means no violation seen.
double monotonicity_probe(const SingleParamAllocation& rule, double bid_ceiling,
                          std::size_t probes, CounterRng& rng);

} // namespace mechlab
