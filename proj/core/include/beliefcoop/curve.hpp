#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace beliefcoop {

/// Closed interval [lo, hi].
struct Interval {
    double lo = 0.0;
    double hi = 1.0;

    bool contains(double x) const noexcept { return x >= lo && x <= hi; }
    double width() const noexcept { return hi - lo; }
};

/// Default knot count for discretized threshold functions.
inline constexpr std::size_t kDefaultGridSize = 1001;

/// Piecewise-linear function on a strictly increasing knot grid.
///
/// Holds either l*(pi) (common beliefs) or pi*_d(l) (diverse beliefs).
/// Values are kept inside `codomain`; the `monotone` flag records that
/// values are nondecreasing and enables inversion.
class ThresholdCurve {
public:
    ThresholdCurve(std::vector<double> knots, std::vector<double> values, Interval codomain);

    /// `n` equally spaced knots over `domain` with values from `fn`.
    template <class Fn>
    static ThresholdCurve tabulate(Interval domain, std::size_t n, Interval codomain, Fn&& fn) {
        std::vector<double> knots = uniform_knots(domain, n);
        std::vector<double> values;
        values.reserve(n);
        for (double x : knots) values.push_back(fn(x));
        return ThresholdCurve(std::move(knots), std::move(values), codomain);
    }

    static std::vector<double> uniform_knots(Interval domain, std::size_t n);

    std::span<const double> knots() const noexcept { return knots_; }
    std::span<const double> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return knots_.size(); }
    Interval domain() const noexcept { return {knots_.front(), knots_.back()}; }
    Interval codomain() const noexcept { return codomain_; }
    bool monotone() const noexcept { return monotone_; }

    /// True when every adjacent pair of values strictly increases.
    bool strictly_increasing() const noexcept;

    double eval(double x) const;

    /// Preimage of y. On flat stretches returns the left end of the stretch.
    /// Throws ValidationError if the curve is not monotone and DomainError
    /// if y lies outside [values.front(), values.back()].
    double invert(double y) const;

    /// Sup-norm distance on a shared knot grid.
    double sup_distance(const ThresholdCurve& other) const;

private:
    std::vector<double> knots_;
    std::vector<double> values_;
    Interval codomain_;
    bool monotone_ = false;
};

inline double curve_eval(const ThresholdCurve& curve, double x) { return curve.eval(x); }
inline double curve_invert(const ThresholdCurve& curve, double y) { return curve.invert(y); }

}  // namespace beliefcoop
