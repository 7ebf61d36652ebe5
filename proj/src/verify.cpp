#include "mechlab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "mechlab/errors.hpp"
#include "mechlab/parallel.hpp"
#include "mechlab/payments.hpp"
#include "mechlab/quadrature.hpp"

namespace mechlab::verify {

std::vector<double> midr_truthfulness_residuals(const MidrOracle& oracle,
                                                const ResamplingLaw& law) {
    const std::size_t n = oracle.agent_count();
    if (law.agent_count() != n)
        throw std::invalid_argument("midr_truthfulness_residuals: law agent count mismatch");
    if (n > kMaxEnumerableAgents)
        throw std::invalid_argument("midr_truthfulness_residuals: too many agents");

    // Cache the exact per-subset values once; both sides read them.
    std::vector<std::vector<double>> values(subset_count(n));
    for (std::uint32_t bits = 0; bits < subset_count(n); ++bits)
        values[bits] = oracle.expected_values(SubsetMask(bits, n));

    std::vector<double> residuals(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        // Run-side: expected value of the charged payment.
        double charged = 0.0;
        // Pivot-side: others' welfare with i always dropped minus with i present.
        double dropped = 0.0, present = 0.0;
        for (std::uint32_t bits = 0; bits < subset_count(n); ++bits) {
            SubsetMask mask(bits, n);
            double others = payments::member_welfare_excluding(values[bits], mask, i);
            charged += law.mass(mask) * law.coefficient(i, mask) * others;
            if (mask.contains(i))
                present += law.mass(mask) * others;
            else
                dropped += law.mass(mask.with(i)) * others;
        }
        residuals[i] = std::abs(charged - (dropped - present));
    }
    return residuals;
}

double midr_truthfulness_max_residual(const MidrOracle& oracle, const ResamplingLaw& law) {
    double worst = 0.0;
    for (double r : midr_truthfulness_residuals(oracle, law)) worst = std::max(worst, r);
    return worst;
}

namespace {

struct Cell {
    double point; // where to evaluate the rule inside this cell
    double mass;
    bool atom; // kept branch (bid survives unchanged)
};

// Partition of agent j's resampled bid: the kept atom at `bid` with mass
// 1-gamma, plus the rule's constant segments below `bid` with their exact
// resample-branch masses (t/bid)^(1-gamma) differences.
std::vector<Cell> agent_cells(const GridStepAllocation& rule, std::size_t agent,
                              double bid, double gamma) {
    std::vector<Cell> cells;
    if (bid == 0.0) {
        cells.push_back({0.0, 1.0, true});
        return cells;
    }
    cells.push_back({bid, 1.0 - gamma, true});
    std::vector<double> bounds{0.0};
    for (double t : rule.axis(agent))
        if (t > 0.0 && t < bid) bounds.push_back(t);
    bounds.push_back(bid);
    double prev_cdf = 0.0;
    for (std::size_t k = 0; k + 1 < bounds.size(); ++k) {
        double hi = bounds[k + 1];
        double cdf = std::pow(hi / bid, 1.0 - gamma);
        double mass = gamma * (cdf - prev_cdf);
        prev_cdf = cdf;
        if (mass <= 0.0) continue;
        cells.push_back({0.5 * (bounds[k] + hi), mass, false});
    }
    return cells;
}

// Iterate the product of per-agent cell lists, calling
// visit(points, mass, own_cell_is_atom) for each combination.
template <typename Visit>
void for_each_product_cell(const std::vector<std::vector<Cell>>& cells, std::size_t own_agent,
                           Visit&& visit) {
    const std::size_t n = cells.size();
    std::vector<std::size_t> idx(n, 0);
    std::vector<double> points(n);
    for (;;) {
        double mass = 1.0;
        for (std::size_t a = 0; a < n; ++a) {
            const Cell& c = cells[a][idx[a]];
            points[a] = c.point;
            mass *= c.mass;
        }
        visit(points, mass, cells[own_agent][idx[own_agent]].atom);
        std::size_t a = n;
        while (a-- > 0) {
            if (++idx[a] < cells[a].size()) break;
            idx[a] = 0;
            if (a == 0) return;
        }
    }
}

std::vector<std::vector<Cell>> build_cells(const GridStepAllocation& rule,
                                           const BidVector& bids, std::size_t agent,
                                           double own_bid, double gamma) {
    std::vector<std::vector<Cell>> cells(rule.agent_count());
    for (std::size_t j = 0; j < rule.agent_count(); ++j)
        cells[j] = agent_cells(rule, j, j == agent ? own_bid : bids[j], gamma);
    return cells;
}

} // namespace

double bks_expected_level(const GridStepAllocation& rule, const BidVector& bids,
                          std::size_t agent, double own_bid, double gamma) {
    if (agent >= rule.agent_count())
        throw std::invalid_argument("bks_expected_level: agent out of range");
    auto cells = build_cells(rule, bids, agent, own_bid, gamma);
    double total = 0.0;
    for_each_product_cell(cells, agent, [&](const std::vector<double>& points, double mass, bool) {
        total += mass * rule.level(agent, BidVector(points));
    });
    return total;
}

std::vector<double> bks_payment_identity_residuals(const GridStepAllocation& rule,
                                                   const BidVector& bids, double gamma,
                                                   double quad_tol) {
    if (!(gamma > 0.0) || !(gamma < 1.0))
        throw std::invalid_argument("bks_payment_identity_residuals: gamma must be in (0,1)");
    if (bids.size() != rule.agent_count())
        throw std::invalid_argument("bks_payment_identity_residuals: bid count mismatch");
    if (!bids.all_nonnegative())
        throw std::invalid_argument("bks_payment_identity_residuals: bids must be >= 0");

    const std::size_t n = rule.agent_count();
    const double rebate = 1.0 - 1.0 / gamma;
    std::vector<double> residuals(n, 0.0);

    for (std::size_t i = 0; i < n; ++i) {
        double b_i = bids[i];

        // Expected charged payment, enumerated with the run-side coefficients.
        double charged = 0.0;
        if (b_i > 0.0) {
            auto cells = build_cells(rule, bids, i, b_i, gamma);
            for_each_product_cell(cells, i,
                                  [&](const std::vector<double>& points, double mass, bool atom) {
                                      double c = atom ? 1.0 : rebate;
                                      charged += mass * c * rule.level(i, BidVector(points));
                                  });
            charged *= b_i;
        }

        // Truthful-payment side: surface term minus the own-bid integral of the
        // expected allocation. Integrate per smooth segment (between agent i's
        // thresholds) so the quadrature never straddles a jump.
        double surface = b_i * bks_expected_level(rule, bids, i, b_i, gamma);
        double area = 0.0;
        std::vector<double> bounds{0.0};
        for (double t : rule.axis(i))
            if (t > 0.0 && t < b_i) bounds.push_back(t);
        bounds.push_back(b_i);
        for (std::size_t k = 0; k + 1 < bounds.size(); ++k) {
            if (bounds[k + 1] <= bounds[k]) continue;
            QuadratureResult q = integrate_adaptive(
                [&](double u) { return bks_expected_level(rule, bids, i, u, gamma); },
                bounds[k], bounds[k + 1], quad_tol);
            if (!q.converged)
                throw NumericalError(
                    "bks_payment_identity_residuals: quadrature error " +
                    std::to_string(q.error_estimate) + " above tolerance");
            area += q.value;
        }
        residuals[i] = std::abs(charged - (surface - area));
    }
    return residuals;
}

bool McCurve::truthful_within(double k_sigma) const {
    for (const McPoint& p : points)
        if (p.mean_minus_truth > k_sigma * p.diff_std_err + 1e-12) return false;
    return true;
}

std::size_t McCurve::argmax_mean() const {
    std::size_t best = 0;
    for (std::size_t g = 1; g < points.size(); ++g)
        if (points[g].mean > points[best].mean) best = g;
    return best;
}

McCurve mc_truthfulness(const UtilityFn& utility, const std::vector<double>& report_grid,
                        std::size_t truth_index, std::size_t samples, std::uint64_t seed) {
    if (report_grid.empty())
        throw std::invalid_argument("mc_truthfulness: empty report grid");
    if (truth_index >= report_grid.size())
        throw std::invalid_argument("mc_truthfulness: truth index out of range");
    if (samples < 10000)
        throw std::invalid_argument("mc_truthfulness: need at least 1e4 samples");

    const std::size_t G = report_grid.size();
    const std::size_t chunk = 4096; // fixed: results must not depend on thread count
    const std::size_t chunks = (samples + chunk - 1) / chunk;

    // Per chunk: sum, sum of squares, paired-diff sum, paired-diff squares.
    std::vector<std::vector<double>> acc(chunks, std::vector<double>(4 * G, 0.0));

    parallel_chunks(samples, chunk, [&](std::size_t c, std::size_t lo, std::size_t hi) {
        std::vector<double>& a = acc[c];
        for (std::size_t r = lo; r < hi; ++r) {
            CounterRng base = CounterRng(seed).derive(r);
            CounterRng truth_rng = base;
            double u_truth = utility(report_grid[truth_index], truth_rng);
            for (std::size_t g = 0; g < G; ++g) {
                double u;
                if (g == truth_index) {
                    u = u_truth;
                } else {
                    CounterRng rng = base; // same draws as the truthful replica
                    u = utility(report_grid[g], rng);
                }
                double d = u - u_truth;
                a[g] += u;
                a[G + g] += u * u;
                a[2 * G + g] += d;
                a[3 * G + g] += d * d;
            }
        }
    });

    std::vector<double> sum(G, 0.0), sum2(G, 0.0), dsum(G, 0.0), dsum2(G, 0.0);
    for (std::size_t c = 0; c < chunks; ++c) { // fixed merge order
        for (std::size_t g = 0; g < G; ++g) {
            sum[g] += acc[c][g];
            sum2[g] += acc[c][G + g];
            dsum[g] += acc[c][2 * G + g];
            dsum2[g] += acc[c][3 * G + g];
        }
    }

    const double N = static_cast<double>(samples);
    McCurve curve;
    curve.truth_index = truth_index;
    curve.samples = samples;
    curve.seed = seed;
    curve.points.resize(G);
    for (std::size_t g = 0; g < G; ++g) {
        McPoint& p = curve.points[g];
        p.report = report_grid[g];
        p.mean = sum[g] / N;
        double var = std::max(0.0, (sum2[g] - N * p.mean * p.mean) / (N - 1.0));
        p.std_err = std::sqrt(var / N);
        p.mean_minus_truth = dsum[g] / N;
        double dvar = std::max(0.0, (dsum2[g] - N * p.mean_minus_truth * p.mean_minus_truth) /
                                        (N - 1.0));
        p.diff_std_err = std::sqrt(dvar / N);
    }
    return curve;
}

IrNptReport ir_npt_expectation(const MidrOracle& oracle, const ResamplingLaw& law,
                               double tol) {
    const std::size_t n = oracle.agent_count();
    if (law.agent_count() != n)
        throw std::invalid_argument("ir_npt_expectation: law agent count mismatch");

    IrNptReport report;
    report.min_expected_utility = std::numeric_limits<double>::infinity();
    report.min_expected_payment = std::numeric_limits<double>::infinity();

    std::vector<std::vector<double>> values(subset_count(n));
    for (std::uint32_t bits = 0; bits < subset_count(n); ++bits)
        values[bits] = oracle.expected_values(SubsetMask(bits, n));

    for (std::size_t i = 0; i < n; ++i) {
        double payment = 0.0, value = 0.0;
        for (std::uint32_t bits = 0; bits < subset_count(n); ++bits) {
            SubsetMask mask(bits, n);
            double others = payments::member_welfare_excluding(values[bits], mask, i);
            payment += law.mass(mask) * law.coefficient(i, mask) * others;
            value += law.mass(mask) * values[bits][i];
        }
        report.min_expected_payment = std::min(report.min_expected_payment, payment);
        report.min_expected_utility = std::min(report.min_expected_utility, value - payment);
    }
    report.npt_ok = report.min_expected_payment >= -tol;
    report.ir_ok = report.min_expected_utility >= -tol;
    return report;
}

ExPostReport ir_expost(const std::vector<SpReductionRun>& runs, const BidVector& true_values,
                       double tol) {
    ExPostReport report;
    report.min_realized_utility = std::numeric_limits<double>::infinity();
    for (const SpReductionRun& run : runs) {
        if (run.levels.size() != true_values.size())
            throw std::invalid_argument("ir_expost: run size mismatch");
        for (std::size_t i = 0; i < true_values.size(); ++i) {
            double u = true_values[i] * run.levels[i] - run.payments[i];
            report.min_realized_utility = std::min(report.min_realized_utility, u);
        }
    }
    if (runs.empty()) report.min_realized_utility = 0.0;
    report.ir_ok = report.min_realized_utility >= -tol;
    return report;
}

} // namespace mechlab::verify
