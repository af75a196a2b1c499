#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace beliefcoop {

/// A continuous distribution on [0, upper] given by cdf, pdf and quantile.
///
/// Three constructors cover what the solvers need: a closed-form uniform,
/// a tabulated cdf (piecewise-linear between strictly increasing samples),
/// and an analytic cdf/pdf pair supplied as callables. Instances are
/// immutable and cheap to copy (shared implementation).
class Distribution {
public:
    static Distribution uniform(double upper);

    /// Piecewise-linear cdf through (x[i], cdf[i]). Requires x[0] = 0,
    /// strictly increasing abscissae and cdf values running strictly from 0 to 1.
    static Distribution tabulated(std::vector<double> x, std::vector<double> cdf);

    /// User-supplied cdf and pdf on [0, upper]. When `quantile` is empty the
    /// inverse is computed by bisection on the cdf. A claimed monotone hazard
    /// is verified on a 1000-point grid and rejected if false.
    static Distribution analytic(double upper,
                                 std::function<double(double)> cdf,
                                 std::function<double(double)> pdf,
                                 std::function<double(double)> quantile = {},
                                 bool monotone_hazard = false,
                                 std::string name = "analytic");

    double upper() const noexcept;
    double cdf(double x) const;
    double pdf(double x) const;
    double quantile(double u) const;

    /// True when the hazard rate f/(1-F) is known to be nondecreasing.
    bool monotone_hazard() const noexcept;

    /// Largest density value, exact for uniform/tabulated and sampled on a
    /// 2001-point grid for analytic distributions.
    double density_sup() const noexcept;

    const std::string& name() const noexcept;
    bool is_uniform() const noexcept;

    struct Impl;

private:
    explicit Distribution(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;
};

/// Distribution of the private loss from cooperating against a defector.
class LossDistribution : public Distribution {
public:
    explicit LossDistribution(Distribution d) : Distribution(std::move(d)) {}
    static LossDistribution uniform(double ell_bar) { return LossDistribution(Distribution::uniform(ell_bar)); }
};

/// Distribution of a partner's belief about one's honesty; support is [0, 1].
class BeliefDistribution : public Distribution {
public:
    explicit BeliefDistribution(Distribution d);
    static BeliefDistribution uniform() { return BeliefDistribution(Distribution::uniform(1.0)); }
};

/// f(l) / (1 - F(l)). Throws DomainError for l outside [0, upper).
double hazard(const LossDistribution& dist, double ell);

}  // namespace beliefcoop
