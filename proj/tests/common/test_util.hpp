#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "mechlab/allocation.hpp"
#include "mechlab/instance.hpp"
#include "mechlab/resampling.hpp"
#include "mechlab/rng.hpp"
#include "mechlab/types.hpp"

namespace testutil {

// Forwards the product law's masses but always hands the reduction the same
// subset, so individual payment branches can be pinned deterministically.
class FixedMaskLaw final : public mechlab::ResamplingLaw {
public:
    FixedMaskLaw(double gamma, mechlab::SubsetMask fixed)
        : base_(gamma, fixed.agent_count()), fixed_(fixed) {}

    std::size_t agent_count() const override { return base_.agent_count(); }
    double mass(const mechlab::SubsetMask& mask) const override { return base_.mass(mask); }
    mechlab::SubsetMask sample(mechlab::CounterRng&) const override { return fixed_; }
    double coefficient(std::size_t agent, const mechlab::SubsetMask& mask) const override {
        return base_.coefficient(agent, mask);
    }

private:
    mechlab::ProductGammaDistribution base_;
    mechlab::SubsetMask fixed_;
};

// Negative control: the masses are honest but every coefficient carries the
// wrong sign, so the charged payments cannot match the pivot identity.
class SignFlippedLaw final : public mechlab::ResamplingLaw {
public:
    SignFlippedLaw(double gamma, std::size_t agents) : base_(gamma, agents) {}

    std::size_t agent_count() const override { return base_.agent_count(); }
    double mass(const mechlab::SubsetMask& mask) const override { return base_.mass(mask); }
    mechlab::SubsetMask sample(mechlab::CounterRng& rng) const override {
        return base_.sample(rng);
    }
    double coefficient(std::size_t agent, const mechlab::SubsetMask& mask) const override {
        return -base_.coefficient(agent, mask);
    }

private:
    mechlab::ProductGammaDistribution base_;
};

// Allocation with no closed-form integral: A_i(b) = min(b_i, cap). Exercises
// the quadrature fallback in payment computations.
class LinearAllocation final : public mechlab::SingleParamAllocation {
public:
    LinearAllocation(std::size_t agents, double cap = 1.0) : agents_(agents), cap_(cap) {}

    std::size_t agent_count() const override { return agents_; }
    double a_max() const override { return cap_; }
    std::vector<double> levels(const mechlab::BidVector& bids) const override {
        std::vector<double> out(agents_);
        for (std::size_t i = 0; i < agents_; ++i) out[i] = std::min(bids[i], cap_);
        return out;
    }

private:
    std::size_t agents_;
    double cap_;
};

// |observed/trials - p| within k standard deviations of a Bernoulli(p) mean.
inline bool binomial_within(std::size_t observed, std::size_t trials, double p, double k) {
    const double n = static_cast<double>(trials);
    const double sd = std::sqrt(std::max(p * (1.0 - p), 1e-12) / n);
    return std::abs(static_cast<double>(observed) / n - p) <= k * sd + 1e-12;
}

struct MeanStats {
    double mean = 0.0;
    double std_err = 0.0;
};

inline MeanStats mean_stats(const std::vector<double>& xs) {
    const double n = static_cast<double>(xs.size());
    double sum = 0.0;
    for (double x : xs) sum += x;
    const double mean = sum / n;
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / (n * std::max(n - 1.0, 1.0)))};
}

// Plain fixed-step midpoint integral of u -> A_i(u, b_-i); slow but an
// independent check on the closed-form own-bid integrals.
inline double riemann_own_bid_integral(const mechlab::SingleParamAllocation& rule,
                                       const mechlab::BidVector& bids, std::size_t agent,
                                       double upper, std::size_t steps) {
    double sum = 0.0;
    const double h = upper / static_cast<double>(steps);
    std::vector<double> work = bids.values();
    for (std::size_t s = 0; s < steps; ++s) {
        work[agent] = (static_cast<double>(s) + 0.5) * h;
        sum += rule.levels(mechlab::BidVector(work))[agent] * h;
    }
    return sum;
}

// Full-support random subset masses (uniform + offset, normalized).
inline std::vector<double> random_full_support_masses(std::size_t agents,
                                                      mechlab::CounterRng& rng) {
    const std::size_t count = mechlab::subset_count(agents);
    std::vector<double> masses(count);
    double total = 0.0;
    for (double& m : masses) {
        m = 0.05 + rng.next_double();
        total += m;
    }
    for (double& m : masses) m /= total;
    return masses;
}

} // namespace testutil
