#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mechlab/rng.hpp"
#include "mechlab/subset.hpp"

namespace mechlab {

// A full-support distribution over subsets of the n agents. Together with its
// associated coefficients it determines a single-call payment rule:
//   coefficient(i, M) = -1                    if i in M
//                     = pi(M + i) / pi(M)     if i not in M
// Full support is required precisely so the ratio is always defined.
class ResamplingLaw {
public:
    virtual ~ResamplingLaw() = default;

    virtual std::size_t agent_count() const = 0;
    virtual double mass(const SubsetMask& mask) const = 0;
    virtual SubsetMask sample(CounterRng& rng) const = 0;

    // Probability that no agent gets dropped, pi([n]).
    virtual double precision() const { return mass(SubsetMask::full(agent_count())); }

    virtual double coefficient(std::size_t agent, const SubsetMask& mask) const;
};

struct DistributionDiagnostics {
    bool ok = true;
    std::string message;
    std::optional<std::uint32_t> first_bad_mask;
};

// Checks size 2^n, all masses strictly positive and finite, total mass 1
// within 1e-12, and every associated coefficient finite.
DistributionDiagnostics validate_subset_masses(const std::vector<double>& masses,
                                               std::size_t agents);

// Explicit table of subset masses; n <= 16. Sampling is inverse-CDF in mask
// bit order, one uniform per draw.
class SubsetDistribution final : public ResamplingLaw {
public:
    SubsetDistribution(std::size_t agents, std::vector<double> masses);

    std::size_t agent_count() const override { return agents_; }
    double mass(const SubsetMask& mask) const override { return masses_[mask.bits()]; }
    SubsetMask sample(CounterRng& rng) const override;

    const std::vector<double>& masses() const { return masses_; }

private:
    std::size_t agents_;
    std::vector<double> masses_;
    std::vector<double> cumulative_;
};

// pi(M) = gamma^(n-|M|) * (1-gamma)^|M|: every agent kept independently with
// probability 1-gamma. Coefficients, masses and precision are closed-form and
// sampling is one Bernoulli per agent, so n is not limited to the enumerable
// range here.
class ProductGammaDistribution final : public ResamplingLaw {
public:
    ProductGammaDistribution(double gamma, std::size_t agents);

    std::size_t agent_count() const override { return agents_; }
    double mass(const SubsetMask& mask) const override;
    SubsetMask sample(CounterRng& rng) const override;
    double precision() const override;
    double coefficient(std::size_t agent, const SubsetMask& mask) const override;

    double gamma() const { return gamma_; }

private:
    double gamma_;
    std::size_t agents_;
};

} // namespace mechlab
