#include "mechlab/metrics.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mechlab/parallel.hpp"
#include "mechlab/payments.hpp"
#include "mechlab/rng.hpp"

namespace mechlab::metrics {

double precision(const ResamplingLaw& law) { return law.precision(); }

namespace {

void check_enumerable(const MidrOracle& oracle, const ResamplingLaw& law) {
    if (law.agent_count() != oracle.agent_count())
        throw std::invalid_argument("metrics: law agent count mismatch");
    if (oracle.agent_count() > kMaxEnumerableAgents)
        throw std::invalid_argument("metrics: too many agents for exact enumeration");
}

} // namespace

double welfare_ratio(const MidrOracle& oracle, const ResamplingLaw& law) {
    check_enumerable(oracle, law);
    const std::size_t n = oracle.agent_count();

    double expected = 0.0;
    for (std::uint32_t bits = 0; bits < subset_count(n); ++bits) {
        SubsetMask mask(bits, n);
        std::vector<double> values = oracle.expected_values(mask);
        double total = 0.0;
        for (double v : values) total += v; // realized welfare counts everyone
        expected += law.mass(mask) * total;
    }

    std::vector<double> full = oracle.expected_values(SubsetMask::full(n));
    double optimal = 0.0;
    for (double v : full) optimal += v;

    if (optimal == 0.0)
        return expected == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
    return expected / optimal;
}

double revenue_ratio(const MidrOracle& oracle, const ResamplingLaw& law) {
    check_enumerable(oracle, law);
    const std::size_t n = oracle.agent_count();

    std::vector<std::vector<double>> values(subset_count(n));
    for (std::uint32_t bits = 0; bits < subset_count(n); ++bits)
        values[bits] = oracle.expected_values(SubsetMask(bits, n));

    double collected = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::uint32_t bits = 0; bits < subset_count(n); ++bits) {
            SubsetMask mask(bits, n);
            collected += law.mass(mask) * law.coefficient(i, mask) *
                         payments::member_welfare_excluding(values[bits], mask, i);
        }

    SubsetMask full = SubsetMask::full(n);
    double pivot_revenue = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double without = payments::member_welfare_excluding(values[full.without(i).bits()],
                                                            full.without(i), i);
        double with = payments::member_welfare_excluding(values[full.bits()], full, i);
        pivot_revenue += without - with;
    }

    if (pivot_revenue == 0.0)
        return std::abs(collected) <= 1e-15
                   ? 1.0
                   : std::copysign(std::numeric_limits<double>::infinity(), collected);
    return collected / pivot_revenue;
}

RiskStats risk_stats(const ResamplingLaw& law) {
    const std::size_t n = law.agent_count();
    if (n > kMaxEnumerableAgents)
        throw std::invalid_argument("risk_stats: too many agents for exact enumeration");

    RiskStats stats;
    for (std::size_t i = 0; i < n; ++i) {
        double mean = 0.0, second = 0.0;
        for (std::uint32_t bits = 0; bits < subset_count(n); ++bits) {
            SubsetMask mask(bits, n);
            double c = law.coefficient(i, mask);
            double p = law.mass(mask);
            mean += p * c;
            second += p * c * c;
            stats.max_abs_coeff = std::max(stats.max_abs_coeff, std::abs(c));
        }
        stats.mean_abs_deviation = std::max(stats.mean_abs_deviation, std::abs(mean));
        stats.max_variance = std::max(stats.max_variance, second - mean * mean);
    }
    return stats;
}

MetricsRecord midr_metrics(const MidrOracle& oracle, const ProductGammaDistribution& law) {
    MetricsRecord rec;
    rec.gamma = law.gamma();
    rec.precision = law.precision();
    rec.welfare_ratio = welfare_ratio(oracle, law);
    rec.revenue_ratio = revenue_ratio(oracle, law);
    RiskStats rs = risk_stats(law);
    rec.coeff_variance = rs.max_variance;
    rec.max_abs_coeff = rs.max_abs_coeff;
    rec.worst_normalized_payment =
        static_cast<double>(law.agent_count() - 1) * rs.max_abs_coeff;
    return rec;
}

TableAllocation welfare_tight_witness(std::size_t agents, std::size_t distinguished) {
    if (distinguished >= agents)
        throw std::invalid_argument("welfare_tight_witness: agent out of range");
    std::vector<std::vector<double>> table(subset_count(agents),
                                           std::vector<double>(agents, 0.0));
    for (std::uint32_t bits = 0; bits < subset_count(agents); ++bits)
        if ((bits >> distinguished) & 1u) table[bits][distinguished] = 1.0;
    return TableAllocation(agents, std::move(table));
}

TableAllocation revenue_tight_witness(std::size_t agents) {
    if (agents < 2)
        throw std::invalid_argument("revenue_tight_witness: need at least two agents");
    std::vector<std::vector<double>> table(subset_count(agents),
                                           std::vector<double>(agents, 0.0));
    const std::uint32_t full = static_cast<std::uint32_t>(subset_count(agents) - 1);
    for (std::uint32_t bits = 0; bits < subset_count(agents); ++bits) {
        for (std::size_t i = 0; i < agents; ++i) {
            if (bits == full)
                table[bits][i] = 1.0 / static_cast<double>(agents);
            else if ((bits >> i) & 1u)
                table[bits][i] = 1.0 / static_cast<double>(agents - 1);
        }
    }
    return TableAllocation(agents, std::move(table));
}

namespace {

// Objectives for an explicit 8-mass distribution over subsets of 3 agents.
void objectives_n3(const std::array<double, 8>& m, double& max_abs, double& max_var) {
    max_abs = 1.0;
    max_var = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        const std::uint32_t bit = 1u << i;
        double mean = 0.0, second = 0.0;
        for (std::uint32_t mask = 0; mask < 8; ++mask) {
            double c;
            if (mask & bit) {
                c = -1.0;
            } else {
                c = m[mask | bit] / m[mask];
                if (c > max_abs) max_abs = c;
            }
            mean += m[mask] * c;
            second += m[mask] * c * c;
        }
        max_var = std::max(max_var, second - mean * mean);
    }
}

SweepReport sweep_n2(double gamma, double precision_floor, double resolution) {
    SweepReport rep;
    rep.agents = 2;
    rep.gamma = gamma;
    rep.precision_floor = precision_floor;
    rep.resolution = resolution;

    const std::size_t R = static_cast<std::size_t>(std::llround(1.0 / resolution));
    const double scale = 1.0 / static_cast<double>(R);
    const std::size_t l_min = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(precision_floor * static_cast<double>(R) - 1e-9)));
    if (l_min + 3 > R)
        throw std::invalid_argument("optimality_sweep: precision floor leaves no grid room");

    struct Best {
        double value = std::numeric_limits<double>::infinity();
        std::array<double, 4> masses{};
    };
    struct ChunkResult {
        Best abs, var, capped_var;
        std::size_t count = 0;
    };
    // Beating the variance only counts if the law also matches the product
    // law's worst-case coefficient; the slack absorbs grid-mass rounding.
    const double abs_cap = std::max(1.0, (1.0 - gamma) / gamma) + 1e-12;

    const std::size_t l_count = R - 2 - l_min; // l in [l_min, R-3]
    const std::size_t chunk = 8;
    const std::size_t chunks = (l_count + chunk - 1) / chunk;
    std::vector<ChunkResult> results(chunks);

    parallel_chunks(l_count, chunk, [&](std::size_t c, std::size_t lo, std::size_t hi) {
        ChunkResult& out = results[c];
        for (std::size_t off = lo; off < hi; ++off) {
            const std::size_t l = l_min + off;
            const double m3 = static_cast<double>(l) * scale;
            const std::size_t rem = R - l;
            for (std::size_t i = 1; i + 2 <= rem; ++i) {
                const double m0 = static_cast<double>(i) * scale;
                for (std::size_t j = 1; i + j + 1 <= rem; ++j) {
                    const double m1 = static_cast<double>(j) * scale;
                    const double m2 = static_cast<double>(rem - i - j) * scale;

                    const double r10 = m1 / m0;
                    const double r32 = m3 / m2;
                    const double r20 = m2 / m0;
                    const double r31 = m3 / m1;

                    double max_abs = 1.0;
                    if (r10 > max_abs) max_abs = r10;
                    if (r32 > max_abs) max_abs = r32;
                    if (r20 > max_abs) max_abs = r20;
                    if (r31 > max_abs) max_abs = r31;

                    const double mean1 = r10 * m0 + r32 * m2 - m1 - m3;
                    const double var1 = r10 * m1 + r32 * m3 + m1 + m3 - mean1 * mean1;
                    const double mean2 = r20 * m0 + r31 * m1 - m2 - m3;
                    const double var2 = r20 * m2 + r31 * m3 + m2 + m3 - mean2 * mean2;
                    const double max_var = var1 > var2 ? var1 : var2;

                    ++out.count;
                    if (max_abs < out.abs.value) {
                        out.abs.value = max_abs;
                        out.abs.masses = {m0, m1, m2, m3};
                    }
                    if (max_var < out.var.value) {
                        out.var.value = max_var;
                        out.var.masses = {m0, m1, m2, m3};
                    }
                    if (max_abs <= abs_cap && max_var < out.capped_var.value) {
                        out.capped_var.value = max_var;
                        out.capped_var.masses = {m0, m1, m2, m3};
                    }
                }
            }
        }
    });

    Best abs, var, capped_var;
    for (const ChunkResult& r : results) { // fixed merge order
        rep.candidates += r.count;
        if (r.abs.value < abs.value) abs = r.abs;
        if (r.var.value < var.value) var = r.var;
        if (r.capped_var.value < capped_var.value) capped_var = r.capped_var;
    }

    rep.best_max_abs_coeff = abs.value;
    rep.best_max_variance = var.value;
    rep.best_variance_given_abs = capped_var.value;
    rep.argmin_abs_coeff_masses.assign(abs.masses.begin(), abs.masses.end());
    rep.argmin_variance_masses.assign(var.masses.begin(), var.masses.end());
    return rep;
}

SweepReport sweep_n3(double gamma, double precision_floor, double resolution,
                     std::uint64_t seed) {
    SweepReport rep;
    rep.agents = 3;
    rep.gamma = gamma;
    rep.precision_floor = precision_floor;
    rep.resolution = resolution;

    auto feasible = [&](const std::array<double, 8>& m) {
        for (double v : m)
            if (v < 1e-9) return false;
        return m[7] >= precision_floor - 1e-12;
    };

    std::array<double, 8> pibar{};
    for (std::uint32_t mask = 0; mask < 8; ++mask) {
        int kept = std::popcount(mask);
        pibar[mask] = std::pow(gamma, 3 - kept) * std::pow(1.0 - gamma, kept);
    }

    // modes: 0 minimizes max |c|, 1 minimizes variance, 2 minimizes variance
    // among laws whose max |c| stays at the product law's worst case.
    const double abs_cap = std::max(1.0, (1.0 - gamma) / gamma) + 1e-12;
    auto local_search = [&](std::array<double, 8> m, int mode, CounterRng& rng) {
        double cur_abs, cur_var;
        objectives_n3(m, cur_abs, cur_var);
        double cur = mode == 0 ? cur_abs : cur_var;
        const std::array<double, 3> steps{1e-2, 1e-3, resolution};
        for (double step : steps) {
            for (std::size_t iter = 0; iter < 4000; ++iter) {
                std::size_t a = rng.next_u64() % 8;
                std::size_t b = rng.next_u64() % 8;
                if (a == b) continue;
                std::array<double, 8> cand = m;
                cand[a] -= step;
                cand[b] += step;
                if (!feasible(cand)) continue;
                double ca, cv;
                objectives_n3(cand, ca, cv);
                if (mode == 2 && ca > abs_cap) continue;
                double val = mode == 0 ? ca : cv;
                if (val < cur) {
                    cur = val;
                    m = cand;
                }
            }
        }
        return std::make_pair(cur, m);
    };

    double best_abs, best_var;
    objectives_n3(pibar, best_abs, best_var);
    std::array<double, 8> abs_masses = pibar, var_masses = pibar;
    rep.candidates = 1;

    CounterRng rng(seed, 0x5715);
    for (std::size_t restart = 0; restart < 32; ++restart) {
        std::array<double, 8> start{};
        double rest = 0.0;
        start[7] = precision_floor + (1.0 - precision_floor) * 0.9 * rng.next_double();
        for (std::uint32_t mask = 0; mask < 7; ++mask) {
            start[mask] = -std::log(1.0 - rng.next_double()) + 1e-6;
            rest += start[mask];
        }
        for (std::uint32_t mask = 0; mask < 7; ++mask)
            start[mask] *= (1.0 - start[7]) / rest;
        if (!feasible(start)) continue;

        for (int mode : {0, 1}) {
            auto [val, masses] = local_search(start, mode, rng);
            ++rep.candidates;
            if (mode == 0 && val < best_abs) {
                best_abs = val;
                abs_masses = masses;
            }
            if (mode == 1 && val < best_var) {
                best_var = val;
                var_masses = masses;
            }
        }
    }

    // The cap-respecting chain starts at the product law; random starts are
    // essentially never inside the cap, so this is the whole feasible seed set.
    const double capped_var = local_search(pibar, 2, rng).first;
    ++rep.candidates;

    rep.best_max_abs_coeff = best_abs;
    rep.best_max_variance = best_var;
    rep.best_variance_given_abs = capped_var;
    rep.argmin_abs_coeff_masses.assign(abs_masses.begin(), abs_masses.end());
    rep.argmin_variance_masses.assign(var_masses.begin(), var_masses.end());
    return rep;
}

} // namespace

SweepReport optimality_sweep(std::size_t agents, double gamma, double precision_floor,
                             double resolution, std::uint64_t seed) {
    if (agents != 2 && agents != 3)
        throw std::invalid_argument("optimality_sweep: agents must be 2 or 3");
    if (!(gamma > 0.0) || !(gamma < 1.0))
        throw std::invalid_argument("optimality_sweep: gamma must be in (0,1)");
    if (!(precision_floor > 0.0) || !(precision_floor < 1.0))
        throw std::invalid_argument("optimality_sweep: precision floor must be in (0,1)");
    if (!(resolution > 0.0) || resolution > 1e-2)
        throw std::invalid_argument("optimality_sweep: resolution must be in (0, 1e-2]");

    SweepReport rep = (agents == 2) ? sweep_n2(gamma, precision_floor, resolution)
                                    : sweep_n3(gamma, precision_floor, resolution, seed);

    ProductGammaDistribution law(gamma, agents);
    RiskStats rs = risk_stats(law);
    rep.pibar_max_abs_coeff = rs.max_abs_coeff;
    rep.pibar_max_variance = rs.max_variance;
    rep.product_law_optimal_abs = rep.best_max_abs_coeff >= rep.pibar_max_abs_coeff - 1e-9;
    rep.product_law_optimal_variance =
        rep.best_variance_given_abs >= rep.pibar_max_variance - 1e-9;
    return rep;
}

} // namespace mechlab::metrics
