#include "beliefcoop/curve.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "beliefcoop/errors.hpp"

namespace beliefcoop {

ThresholdCurve::ThresholdCurve(std::vector<double> knots, std::vector<double> values, Interval codomain)
    : knots_(std::move(knots)), values_(std::move(values)), codomain_(codomain) {
    if (knots_.size() < 2 || knots_.size() != values_.size()) {
        throw ValidationError("threshold curve needs at least two knots and one value per knot");
    }
    for (std::size_t i = 1; i < knots_.size(); ++i) {
        if (!(knots_[i] > knots_[i - 1])) throw ValidationError("curve knots must be strictly increasing");
    }
    monotone_ = true;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        const double v = values_[i];
        if (!(v >= codomain_.lo && v <= codomain_.hi)) {
            std::ostringstream os;
            os << "curve value " << v << " at knot " << knots_[i] << " outside codomain [" << codomain_.lo
               << ", " << codomain_.hi << "]";
            throw ValidationError(os.str());
        }
        if (i > 0 && v < values_[i - 1]) monotone_ = false;
    }
}

std::vector<double> ThresholdCurve::uniform_knots(Interval domain, std::size_t n) {
    if (n < 2) throw ValidationError("a grid needs at least two knots");
    if (!(domain.hi > domain.lo)) throw ValidationError("grid domain must have positive width");
    std::vector<double> knots(n);
    const double step = domain.width() / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) knots[i] = domain.lo + step * static_cast<double>(i);
    knots.back() = domain.hi;
    return knots;
}

bool ThresholdCurve::strictly_increasing() const noexcept {
    for (std::size_t i = 1; i < values_.size(); ++i) {
        if (!(values_[i] > values_[i - 1])) return false;
    }
    return true;
}

double ThresholdCurve::eval(double x) const {
    if (!(x >= knots_.front() && x <= knots_.back())) {
        std::ostringstream os;
        os << "curve query " << x << " outside domain [" << knots_.front() << ", " << knots_.back() << "]";
        throw DomainError(os.str());
    }
    auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
    std::size_t i = static_cast<std::size_t>(std::distance(knots_.begin(), it));
    i = std::clamp<std::size_t>(i, 1, knots_.size() - 1) - 1;
    const double t = (x - knots_[i]) / (knots_[i + 1] - knots_[i]);
    return values_[i] + t * (values_[i + 1] - values_[i]);
}

double ThresholdCurve::invert(double y) const {
    if (!monotone_) throw ValidationError("cannot invert a non-monotone curve");
    if (!(y >= values_.front() && y <= values_.back())) {
        std::ostringstream os;
        os << "inversion target " << y << " outside value range [" << values_.front() << ", " << values_.back()
           << "]";
        throw DomainError(os.str());
    }
    // First knot whose value reaches y; flat stretches resolve to their left end.
    auto it = std::lower_bound(values_.begin(), values_.end(), y);
    std::size_t j = static_cast<std::size_t>(std::distance(values_.begin(), it));
    if (j == 0) return knots_.front();
    const std::size_t i = j - 1;
    const double dv = values_[j] - values_[i];
    if (dv <= 0.0) return knots_[i];
    const double t = (y - values_[i]) / dv;
    return knots_[i] + t * (knots_[j] - knots_[i]);
}

double ThresholdCurve::sup_distance(const ThresholdCurve& other) const {
    if (other.knots_.size() != knots_.size()) throw ValidationError("sup distance needs a shared grid");
    double d = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) d = std::max(d, std::abs(values_[i] - other.values_[i]));
    return d;
}

}  // namespace beliefcoop
