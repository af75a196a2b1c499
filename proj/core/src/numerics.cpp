#include "beliefcoop/numerics.hpp"

#include <sstream>

#include "beliefcoop/errors.hpp"

namespace beliefcoop {

double simpson(std::span<const double> y, double h) {
    const std::size_t n = y.size();
    if (n < 3 || n % 2 == 0) throw ValidationError("Simpson rule needs an odd number (>= 3) of samples");
    double odd = 0.0;
    double even = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (i % 2 == 1) {
            odd += y[i];
        } else {
            even += y[i];
        }
    }
    return h / 3.0 * (y.front() + 4.0 * odd + 2.0 * even + y.back());
}

namespace {

double adaptive_step(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                     double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol, int max_depth) {
    if (a == b) return 0.0;
    const double fa = f(a);
    const double fb = f(b);
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    // A single Simpson panel can be fooled by symmetric integrands; split once up front.
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    return adaptive_step(f, a, m, fa, flm, fm, left, 0.5 * tol, max_depth) +
           adaptive_step(f, m, b, fm, frm, fb, right, 0.5 * tol, max_depth);
}

BisectionResult bisect_signed(const std::function<double(double)>& f, double lo, double hi, int sign_lo,
                              double xtol, int max_iter) {
    BisectionResult out;
    for (out.iterations = 0; out.iterations < max_iter; ++out.iterations) {
        const double mid = 0.5 * (lo + hi);
        if (hi - lo <= xtol || mid <= lo || mid >= hi) break;
        const double fm = f(mid);
        const int s = sign_of(fm);
        if (s == 0) {
            out.root = mid;
            return out;
        }
        if (s == sign_lo) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const double mid = 0.5 * (lo + hi);
    out.root = (mid > lo && mid < hi) ? mid : lo;
    return out;
}

BisectionResult bisect(const std::function<double(double)>& f, double lo, double hi, double xtol, int max_iter) {
    const double flo = f(lo);
    const double fhi = f(hi);
    if (flo == 0.0) return {lo, 0};
    if (fhi == 0.0) return {hi, 0};
    if (sign_of(flo) == sign_of(fhi)) {
        std::ostringstream os;
        os << "bisection endpoints [" << lo << ", " << hi << "] do not bracket a root (f=" << flo << ", " << fhi
           << ")";
        throw ConvergenceError(os.str(), std::min(std::abs(flo), std::abs(fhi)));
    }
    return bisect_signed(f, lo, hi, sign_of(flo), xtol, max_iter);
}

}  // namespace beliefcoop
