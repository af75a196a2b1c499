#include "beliefcoop/diverse.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "beliefcoop/errors.hpp"
#include "beliefcoop/numerics.hpp"

namespace beliefcoop {

namespace {

void check_curve_domain(const ThresholdCurve& curve, const LossDistribution& F) {
    const Interval d = curve.domain();
    if (d.lo != 0.0 || std::abs(d.hi - F.upper()) > 1e-12 * F.upper()) {
        throw ValidationError("belief-threshold curve must span the loss support [0, upper]");
    }
    const Interval c = curve.codomain();
    if (c.lo < 0.0 || c.hi > 1.0) throw ValidationError("belief-threshold curve must map into [0, 1]");
}

double knot_spacing(const ThresholdCurve& curve) {
    const auto k = curve.knots();
    return (k.back() - k.front()) / static_cast<double>(k.size() - 1);
}

template <class Integrand>
double simpson_on_knots(const ThresholdCurve& curve, Integrand&& integrand) {
    const auto knots = curve.knots();
    const auto values = curve.values();
    std::vector<double> y(knots.size());
    for (std::size_t i = 0; i < knots.size(); ++i) y[i] = integrand(knots[i], values[i]);
    return simpson(y, knot_spacing(curve));
}

}  // namespace

double defect_integral(const ThresholdCurve& curve, const LossDistribution& F, const BeliefDistribution& G) {
    check_curve_domain(curve, F);
    return simpson_on_knots(curve, [&](double ell, double s) { return G.cdf(s) * F.pdf(ell); });
}

double cooperation_prob_given_strategy(const ThresholdCurve& curve, const LossDistribution& F,
                                       const BeliefDistribution& G) {
    check_curve_domain(curve, F);
    return simpson_on_knots(curve, [&](double ell, double s) { return (1.0 - G.cdf(s)) * F.pdf(ell); });
}

double diverse_threshold_at(double ell, double defect_mass, const GameParams& params) {
    const double denom = params.m() + (ell - (params.b() - 1.0)) * defect_mass;
    if (!(denom > 0.0)) {
        std::ostringstream os;
        os << "best-response denominator " << denom << " <= 0 at l=" << ell << " (parameters violate m > b - 1?)";
        throw InvariantViolation(os.str());
    }
    return 1.0 - params.net_moral_cost() / denom;
}

ThresholdCurve apply_T(const ThresholdCurve& curve, const GameParams& params, const LossDistribution& F,
                       const BeliefDistribution& G) {
    const double mass = defect_integral(curve, F, G);
    const auto knots = curve.knots();
    std::vector<double> values(knots.size());
    for (std::size_t i = 0; i < knots.size(); ++i) {
        values[i] = std::clamp(diverse_threshold_at(knots[i], mass, params), 0.0, 1.0);
    }
    return ThresholdCurve(std::vector<double>(knots.begin(), knots.end()), std::move(values), {0.0, 1.0});
}

double contraction_gamma(const GameParams& params, const BeliefDistribution& G) {
    const double m = params.m();
    return params.net_moral_cost() * G.density_sup() * 1.0 / (m * m);
}

DiverseSolution solve_diverse_threshold(const GameParams& params, const LossDistribution& F,
                                        const BeliefDistribution& G, const DiverseOptions& options) {
    if (options.grid_size < 3 || options.grid_size % 2 == 0) {
        throw ValidationError("diverse solver grid needs an odd knot count >= 3 (Simpson rule)");
    }
    if (!(options.tol > 0.0)) throw ValidationError("diverse solver tolerance must be positive");
    if (!(options.damping > 0.0 && options.damping <= 1.0)) throw ValidationError("damping must lie in (0, 1]");

    const double gamma = contraction_gamma(params, G);
    const bool damped = gamma >= 1.0;
    const double lambda = damped ? options.damping : 1.0;

    ThresholdCurve current = ThresholdCurve::tabulate({0.0, F.upper()}, options.grid_size, {0.0, 1.0},
                                                      [&](double) { return params.pi_low(); });

    DiverseSolution out{current, 0.0, 0.0, 0, 0.0, gamma, damped, !damped, {}};
    double diff = 0.0;
    bool converged = false;
    for (int it = 1; it <= options.max_iter; ++it) {
        ThresholdCurve next = apply_T(current, params, F, G);
        diff = next.sup_distance(current);
        if (damped) {
            const auto cv = current.values();
            const auto nv = next.values();
            std::vector<double> mix(cv.size());
            for (std::size_t i = 0; i < cv.size(); ++i) mix[i] = (1.0 - lambda) * cv[i] + lambda * nv[i];
            next = ThresholdCurve(std::vector<double>(next.knots().begin(), next.knots().end()), std::move(mix),
                                  {0.0, 1.0});
        }
        out.step_norms.push_back(diff);
        current = std::move(next);
        out.iterations = it;
        if (diff <= options.tol) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        std::ostringstream os;
        os << "diverse fixed point did not converge in " << options.max_iter << " iterations (last update "
           << diff << ")";
        throw ConvergenceError(os.str(), diff);
    }
    if (!current.strictly_increasing()) {
        throw InvariantViolation("converged diverse threshold is not strictly increasing in the loss");
    }

    out.threshold = std::move(current);
    out.residual = diff;
    out.defect_mass = defect_integral(out.threshold, F, G);
    out.coop_prob = cooperation_prob_given_strategy(out.threshold, F, G);
    return out;
}

std::string_view to_string(AlphaBetaMode mode) noexcept {
    return mode == AlphaBetaMode::Exact ? "exact" : "approximate";
}

AlphaBeta solve_alpha_beta(const GameParams& params, AlphaBetaMode mode) {
    const double C = params.net_moral_cost();
    const double bm1 = params.b() - 1.0;
    const double m = params.m();
    const double root = std::sqrt(1.0 + 4.0 * bm1 / C);

    AlphaBeta approx{0.5 * C * (1.0 + root), (root - 1.0) / (root + 1.0), AlphaBetaMode::Approximate};
    if (mode == AlphaBetaMode::Approximate) return approx;

    // The two self-consistency equations give alpha = m - (b-1) beta exactly,
    // leaving one equation in beta:
    //   h(beta) = beta - 1 + (C/beta) log(1 + beta/alpha(beta)) = 0,
    // with h(0+) = -(b-1)/m < 0 and h(1) = C log(1 + 1/C) > 0.
    auto alpha_of = [&](double beta) { return m - bm1 * beta; };
    auto h = [&](double beta) { return beta - 1.0 + C / beta * std::log1p(beta / alpha_of(beta)); };
    auto dh = [&](double beta) {
        const double a = alpha_of(beta);
        const double x = beta / a;
        const double L = std::log1p(x);
        const double dL = (m / (a * a)) / (1.0 + x);
        return 1.0 + C * (dL / beta - L / (beta * beta));
    };

    double lo = 0.0;
    double hi = 1.0;
    double beta = std::clamp(approx.beta, 1e-12, 1.0 - 1e-12);
    double hb = h(beta);
    int it = 0;
    for (; it < 200 && std::abs(hb) > 1e-15; ++it) {
        if (hb < 0.0) {
            lo = beta;
        } else {
            hi = beta;
        }
        double cand = beta - hb / dh(beta);
        if (!(cand > lo && cand < hi)) cand = 0.5 * (lo + hi);
        if (cand == beta) break;
        beta = cand;
        hb = h(beta);
    }
    if (std::abs(hb) > 1e-12) {
        std::ostringstream os;
        os << "exact (alpha, beta) system did not converge (residual " << hb << ")";
        throw ConvergenceError(os.str(), std::abs(hb));
    }
    if (!(beta > 0.0 && beta < 1.0)) throw InvariantViolation("exact beta left (0, 1)");
    return {alpha_of(beta), beta, AlphaBetaMode::Exact};
}

double diverse_upper_kink(const GameParams& params, const AlphaBeta& ab) {
    return 1.0 - params.net_moral_cost() / (ab.alpha + ab.beta);
}

double closed_form_diverse_uniform(double pi, const GameParams& params, const AlphaBeta& ab) {
    if (!(pi >= 0.0 && pi < 1.0)) throw ValidationError("closed-form diverse threshold needs pi in [0, 1)");
    if (pi < ab.beta) return 0.0;
    if (pi >= diverse_upper_kink(params, ab)) return 1.0;
    return std::max(0.0, (params.net_moral_cost() / (1.0 - pi) - ab.alpha) / ab.beta);
}

}  // namespace beliefcoop
