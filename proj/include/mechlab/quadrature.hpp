#pragma once

#include <cstddef>
#include <functional>

namespace mechlab {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0; // accumulated Richardson error of accepted panels
    std::size_t evaluations = 0;
    bool converged = true;
};

// Adaptive Simpson. A panel is accepted when |S2 - S1| <= 15 * local tol
// (Richardson), with the extrapolated correction applied. Panels that hit the
// depth cap are accepted too but their |S2 - S1| / 15 accumulates; the result
// is flagged non-converged only if that total exceeds abs_tol, so integrands
// with step discontinuities do not spuriously fail.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double lo, double hi,
                                    double abs_tol = 1e-8, int max_depth = 40);

} // namespace mechlab
