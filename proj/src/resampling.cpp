#include "mechlab/resampling.hpp"

#include <cmath>
#include <stdexcept>

#include "mechlab/errors.hpp"

namespace mechlab {

double ResamplingLaw::coefficient(std::size_t agent, const SubsetMask& mask) const {
    if (agent >= agent_count())
        throw std::invalid_argument("coefficient: agent out of range");
    if (mask.contains(agent)) return -1.0;
    return mass(mask.with(agent)) / mass(mask);
}

DistributionDiagnostics validate_subset_masses(const std::vector<double>& masses,
                                               std::size_t agents) {
    DistributionDiagnostics diag;
    if (agents == 0 || agents > kMaxEnumerableAgents) {
        diag.ok = false;
        diag.message = "agent count out of range";
        return diag;
    }
    if (masses.size() != subset_count(agents)) {
        diag.ok = false;
        diag.message = "need one mass per subset (2^n entries)";
        return diag;
    }
    double total = 0.0;
    for (std::uint32_t m = 0; m < masses.size(); ++m) {
        if (!std::isfinite(masses[m]) || masses[m] <= 0.0) {
            diag.ok = false;
            diag.message = "mass of subset " + SubsetMask(m, agents).to_string() +
                           " must be strictly positive (full support is required "
                           "for the payment coefficients)";
            diag.first_bad_mask = m;
            return diag;
        }
        total += masses[m];
    }
    if (std::abs(total - 1.0) > 1e-12) {
        diag.ok = false;
        diag.message = "masses sum to " + std::to_string(total) + ", expected 1";
        return diag;
    }
    // With positivity established the ratio coefficients are finite; still
    // guard against overflow from extreme ratios.
    for (std::uint32_t m = 0; m < masses.size(); ++m) {
        SubsetMask mask(m, agents);
        for (std::size_t i = 0; i < agents; ++i) {
            if (mask.contains(i)) continue;
            double c = masses[mask.with(i).bits()] / masses[m];
            if (!std::isfinite(c)) {
                diag.ok = false;
                diag.message = "coefficient overflow at subset " + mask.to_string();
                diag.first_bad_mask = m;
                return diag;
            }
        }
    }
    return diag;
}

SubsetDistribution::SubsetDistribution(std::size_t agents, std::vector<double> masses)
    : agents_(agents), masses_(std::move(masses)) {
    DistributionDiagnostics diag = validate_subset_masses(masses_, agents_);
    if (!diag.ok) throw ConfigError("SubsetDistribution: " + diag.message);
    cumulative_.resize(masses_.size());
    double cum = 0.0;
    for (std::size_t m = 0; m < masses_.size(); ++m) {
        cum += masses_[m];
        cumulative_[m] = cum;
    }
    cumulative_.back() = 1.0;
}

SubsetMask SubsetDistribution::sample(CounterRng& rng) const {
    double u = rng.next_double();
    std::size_t lo = 0, hi = cumulative_.size() - 1;
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        if (u < cumulative_[mid])
            hi = mid;
        else
            lo = mid + 1;
    }
    return SubsetMask(static_cast<std::uint32_t>(lo), agents_);
}

ProductGammaDistribution::ProductGammaDistribution(double gamma, std::size_t agents)
    : gamma_(gamma), agents_(agents) {
    if (!(gamma > 0.0) || !(gamma < 1.0))
        throw std::invalid_argument("ProductGammaDistribution: gamma must be in (0,1)");
    if (agents == 0 || agents > kMaxEnumerableAgents)
        throw std::invalid_argument("ProductGammaDistribution: agent count out of range");
}

double ProductGammaDistribution::mass(const SubsetMask& mask) const {
    std::size_t kept = mask.size();
    return std::pow(gamma_, static_cast<double>(agents_ - kept)) *
           std::pow(1.0 - gamma_, static_cast<double>(kept));
}

SubsetMask ProductGammaDistribution::sample(CounterRng& rng) const {
    std::uint32_t bits = 0;
    for (std::size_t i = 0; i < agents_; ++i)
        if (rng.next_double() < 1.0 - gamma_) bits |= (1u << i);
    return SubsetMask(bits, agents_);
}

double ProductGammaDistribution::precision() const {
    return std::pow(1.0 - gamma_, static_cast<double>(agents_));
}

double ProductGammaDistribution::coefficient(std::size_t agent, const SubsetMask& mask) const {
    if (agent >= agents_)
        throw std::invalid_argument("coefficient: agent out of range");
    if (mask.contains(agent)) return -1.0;
    return (1.0 - gamma_) / gamma_;
}

} // namespace mechlab
