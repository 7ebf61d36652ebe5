#include "mechlab/quadrature.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "mechlab/errors.hpp"

namespace mechlab {

namespace {

struct Worker {
    const std::function<double(double)>& f;
    std::size_t evals = 0;
    double err_accum = 0.0;

    double eval(double x) {
        ++evals;
        double y = f(x);
        if (!std::isfinite(y))
            throw NumericalError("integrate_adaptive: integrand not finite at x=" +
                                 std::to_string(x));
        return y;
    }

    // a < m < b with fa/fm/fb already computed; whole = Simpson on [a,b].
    double simpson(double a, double b, double fa, double fm, double fb) const {
        return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    }

    double recurse(double a, double b, double fa, double fm, double fb,
                   double whole, double tol, int depth) {
        double m = 0.5 * (a + b);
        double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
        double flm = eval(lm), frm = eval(rm);
        double left = simpson(a, m, fa, flm, fm);
        double right = simpson(m, b, fm, frm, fb);
        double delta = left + right - whole;
        if (std::abs(delta) <= 15.0 * tol || depth <= 0) {
            if (std::abs(delta) > 15.0 * tol)
                err_accum += std::abs(delta) / 15.0; // depth cap hit
            return left + right + delta / 15.0;
        }
        return recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
               recurse(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
    }
};

} // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double lo, double hi,
                                    double abs_tol, int max_depth) {
    if (!(abs_tol > 0.0))
        throw std::invalid_argument("integrate_adaptive: abs_tol must be > 0");
    if (!(std::isfinite(lo) && std::isfinite(hi)))
        throw std::invalid_argument("integrate_adaptive: bounds must be finite");

    QuadratureResult res;
    if (lo == hi) return res;
    double sign = 1.0;
    if (hi < lo) {
        std::swap(lo, hi);
        sign = -1.0;
    }

    Worker w{f};
    double m = 0.5 * (lo + hi);
    double fa = w.eval(lo), fm = w.eval(m), fb = w.eval(hi);
    double whole = w.simpson(lo, hi, fa, fm, fb);
    double value = w.recurse(lo, hi, fa, fm, fb, whole, abs_tol, max_depth);

    res.value = sign * value;
    res.error_estimate = w.err_accum;
    res.evaluations = w.evals;
    res.converged = w.err_accum <= abs_tol;
    return res;
}

} // namespace mechlab
