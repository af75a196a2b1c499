#pragma once

#include <cmath>
#include <functional>
#include <span>

namespace beliefcoop {

/// Composite Simpson rule on equally spaced samples y[0..n-1] with spacing h.
/// Requires an odd sample count >= 3.
double simpson(std::span<const double> y, double h);

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance `tol`.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol = 1e-12,
                        int max_depth = 50);

struct BisectionResult {
    double root = 0.0;
    int iterations = 0;
};

/// Bisection on [lo, hi] where f(lo) and f(hi) have opposite signs (or one is
/// zero). Runs until the bracket is narrower than `xtol` or stops shrinking.
/// Throws ConvergenceError if the endpoints do not bracket a sign change.
BisectionResult bisect(const std::function<double(double)>& f, double lo, double hi, double xtol = 0.0,
                       int max_iter = 200);

/// Same as bisect() with the endpoint signs already known, so f is never
/// evaluated at lo or hi (useful when an endpoint is a singularity).
BisectionResult bisect_signed(const std::function<double(double)>& f, double lo, double hi, int sign_lo,
                              double xtol = 0.0, int max_iter = 200);

/// (f(x + h) - f(x - h)) / 2h.
inline double central_difference(const std::function<double(double)>& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline int sign_of(double v) noexcept { return (v > 0.0) - (v < 0.0); }

}  // namespace beliefcoop
