#include "beliefcoop/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "beliefcoop/errors.hpp"

namespace beliefcoop {

struct Distribution::Impl {
    double upper = 1.0;
    std::function<double(double)> cdf;
    std::function<double(double)> pdf;
    std::function<double(double)> quantile;
    bool monotone_hazard = false;
    bool uniform = false;
    double density_sup = 0.0;
    std::string name;
};

namespace {

double bisect_quantile(const std::function<double(double)>& cdf, double upper, double u) {
    double lo = 0.0;
    double hi = upper;
    for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (cdf(mid) < u) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

void check_unit(double u) {
    if (!(u >= 0.0 && u <= 1.0)) {
        std::ostringstream os;
        os << "quantile argument " << u << " outside [0, 1]";
        throw DomainError(os.str());
    }
}

}  // namespace

Distribution Distribution::uniform(double upper) {
    if (!(upper > 0.0) || !std::isfinite(upper)) {
        throw ValidationError("uniform distribution needs a finite positive upper bound");
    }
    auto impl = std::make_shared<Impl>();
    impl->upper = upper;
    impl->cdf = [upper](double x) { return std::clamp(x / upper, 0.0, 1.0); };
    impl->pdf = [upper](double x) { return (x >= 0.0 && x <= upper) ? 1.0 / upper : 0.0; };
    impl->quantile = [upper](double u) { return u * upper; };
    impl->monotone_hazard = true;
    impl->uniform = true;
    impl->density_sup = 1.0 / upper;
    std::ostringstream os;
    os << "uniform[0," << upper << "]";
    impl->name = os.str();
    return Distribution(std::move(impl));
}

Distribution Distribution::tabulated(std::vector<double> x, std::vector<double> cdf) {
    if (x.size() != cdf.size() || x.size() < 2) {
        throw ValidationError("tabulated cdf needs at least two (x, F) pairs of equal length");
    }
    if (x.front() != 0.0) throw ValidationError("tabulated cdf must start at x = 0");
    if (cdf.front() != 0.0 || cdf.back() != 1.0) {
        throw ValidationError("tabulated cdf must run from F = 0 to F = 1");
    }
    for (std::size_t i = 1; i < x.size(); ++i) {
        if (!(x[i] > x[i - 1])) throw ValidationError("tabulated cdf abscissae must be strictly increasing");
        if (!(cdf[i] > cdf[i - 1])) throw ValidationError("tabulated cdf must be strictly increasing (f > 0)");
    }

    auto impl = std::make_shared<Impl>();
    impl->upper = x.back();
    auto xs = std::make_shared<const std::vector<double>>(std::move(x));
    auto fs = std::make_shared<const std::vector<double>>(std::move(cdf));

    // Segment containing x: index i with xs[i] <= x < xs[i+1].
    auto segment = [xs](double v) {
        auto it = std::upper_bound(xs->begin(), xs->end(), v);
        std::size_t i = static_cast<std::size_t>(std::distance(xs->begin(), it));
        return std::clamp<std::size_t>(i, 1, xs->size() - 1) - 1;
    };

    impl->cdf = [xs, fs, segment](double v) {
        if (v <= 0.0) return 0.0;
        if (v >= xs->back()) return 1.0;
        const std::size_t i = segment(v);
        const double t = (v - (*xs)[i]) / ((*xs)[i + 1] - (*xs)[i]);
        return (*fs)[i] + t * ((*fs)[i + 1] - (*fs)[i]);
    };
    impl->pdf = [xs, fs, segment](double v) {
        if (v < 0.0 || v > xs->back()) return 0.0;
        const std::size_t i = segment(std::min(v, std::nextafter(xs->back(), 0.0)));
        return ((*fs)[i + 1] - (*fs)[i]) / ((*xs)[i + 1] - (*xs)[i]);
    };
    impl->quantile = [xs, fs](double u) {
        check_unit(u);
        auto it = std::upper_bound(fs->begin(), fs->end(), u);
        std::size_t i = static_cast<std::size_t>(std::distance(fs->begin(), it));
        i = std::clamp<std::size_t>(i, 1, fs->size() - 1) - 1;
        const double t = (u - (*fs)[i]) / ((*fs)[i + 1] - (*fs)[i]);
        return (*xs)[i] + t * ((*xs)[i + 1] - (*xs)[i]);
    };

    // Hazard of a piecewise-linear cdf, sampled at segment midpoints.
    double sup = 0.0;
    bool monotone = true;
    double prev_h = -1.0;
    for (std::size_t i = 0; i + 1 < xs->size(); ++i) {
        const double slope = ((*fs)[i + 1] - (*fs)[i]) / ((*xs)[i + 1] - (*xs)[i]);
        sup = std::max(sup, slope);
        const double mid_cdf = 0.5 * ((*fs)[i] + (*fs)[i + 1]);
        const double h = slope / (1.0 - mid_cdf);
        if (h < prev_h) monotone = false;
        prev_h = h;
    }
    impl->monotone_hazard = monotone;
    impl->density_sup = sup;
    impl->name = "tabulated";
    return Distribution(std::move(impl));
}

Distribution Distribution::analytic(double upper,
                                    std::function<double(double)> cdf,
                                    std::function<double(double)> pdf,
                                    std::function<double(double)> quantile,
                                    bool monotone_hazard,
                                    std::string name) {
    if (!(upper > 0.0) || !std::isfinite(upper)) {
        throw ValidationError("analytic distribution needs a finite positive upper bound");
    }
    if (!cdf || !pdf) throw ValidationError("analytic distribution needs both cdf and pdf");
    if (std::abs(cdf(0.0)) > 1e-12 || std::abs(cdf(upper) - 1.0) > 1e-12) {
        throw ValidationError("analytic cdf must satisfy F(0) = 0 and F(upper) = 1");
    }

    constexpr int kSamples = 2000;
    double sup = 0.0;
    double prev_cdf = 0.0;
    double prev_h = -1.0;
    for (int i = 0; i <= kSamples; ++i) {
        const double x = upper * static_cast<double>(i) / kSamples;
        const double fx = pdf(x);
        const double cx = cdf(x);
        if (cx + 1e-15 < prev_cdf) throw ValidationError("analytic cdf must be nondecreasing");
        prev_cdf = cx;
        sup = std::max(sup, fx);
        if (monotone_hazard && i % 2 == 0 && i < kSamples) {
            const double h = fx / (1.0 - cx);
            if (h < prev_h * (1.0 - 1e-12)) {
                throw ValidationError("distribution flagged monotone-hazard but f/(1-F) decreases");
            }
            prev_h = h;
        }
    }

    auto impl = std::make_shared<Impl>();
    impl->upper = upper;
    if (!quantile) {
        quantile = [cdf, upper](double u) {
            if (u <= 0.0) return 0.0;
            if (u >= 1.0) return upper;
            return bisect_quantile(cdf, upper, u);
        };
    }
    impl->cdf = [cdf, upper](double x) {
        if (x <= 0.0) return 0.0;
        if (x >= upper) return 1.0;
        return cdf(x);
    };
    impl->pdf = std::move(pdf);
    impl->quantile = std::move(quantile);
    impl->monotone_hazard = monotone_hazard;
    impl->density_sup = sup;
    impl->name = std::move(name);
    return Distribution(std::move(impl));
}

double Distribution::upper() const noexcept { return impl_->upper; }
double Distribution::cdf(double x) const { return impl_->cdf(x); }
double Distribution::pdf(double x) const { return impl_->pdf(x); }

double Distribution::quantile(double u) const {
    check_unit(u);
    return impl_->quantile(u);
}

bool Distribution::monotone_hazard() const noexcept { return impl_->monotone_hazard; }
double Distribution::density_sup() const noexcept { return impl_->density_sup; }
const std::string& Distribution::name() const noexcept { return impl_->name; }
bool Distribution::is_uniform() const noexcept { return impl_->uniform; }

BeliefDistribution::BeliefDistribution(Distribution d) : Distribution(std::move(d)) {
    if (upper() != 1.0) throw ValidationError("belief distribution must live on [0, 1]");
}

double hazard(const LossDistribution& dist, double ell) {
    if (!(ell >= 0.0) || ell >= dist.upper()) {
        std::ostringstream os;
        os << "hazard undefined at l=" << ell << " (support [0, " << dist.upper() << "), 1-F vanishes at the top)";
        throw DomainError(os.str());
    }
    const double survival = 1.0 - dist.cdf(ell);
    if (survival <= 0.0) throw DomainError("hazard undefined: 1 - F(l) = 0");
    return dist.pdf(ell) / survival;
}

}  // namespace beliefcoop
