#include "beliefcoop/common.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "beliefcoop/errors.hpp"
#include "beliefcoop/numerics.hpp"
#include "beliefcoop/payoff.hpp"

namespace beliefcoop {

namespace {

double survival_at(double ell, const LossDistribution& dist) {
    if (!(ell >= 0.0) || ell >= dist.upper()) {
        std::ostringstream os;
        os << "psi undefined at l=" << ell << ": requires 0 <= l < " << dist.upper();
        throw DomainError(os.str());
    }
    const double s = 1.0 - dist.cdf(ell);
    if (s <= 0.0) throw DomainError("psi undefined where F(l) = 1");
    return s;
}

}  // namespace

double psi_tilt(double pi, const GameParams& params) {
    const double q = clamp_belief(pi);
    return params.net_moral_cost() * q / (1.0 - q) - (params.b() - 1.0);
}

double psi(double ell, double pi, const GameParams& params, const LossDistribution& dist) {
    const double s = survival_at(ell, dist);
    const double q = clamp_belief(pi);
    const double odds = q / (1.0 - q);
    return (params.net_moral_cost() * odds - (params.b() - 1.0) * (1.0 - s)) / s;
}

double psi_slope(double ell, double pi, const GameParams& params, const LossDistribution& dist) {
    const double s = survival_at(ell, dist);
    return dist.pdf(ell) / (s * s) * psi_tilt(pi, params);
}

double chi_bound(double pi, const GameParams& params, const LossDistribution& dist) {
    const double q = clamp_belief(pi);
    const double arg = (params.m() / (params.b() - 1.0) - 1.0) * q / (1.0 - q);
    if (!(arg >= 0.0 && arg < 1.0)) {
        std::ostringstream os;
        os << "chi bound needs pi < (b-1)/m = " << params.pi_low() << " (got pi=" << pi
           << "); use the corner equilibrium instead";
        throw RegimeError(os.str());
    }
    return dist.quantile(arg);
}

double best_response_threshold(double pi, double opponent_threshold, const GameParams& params,
                               const LossDistribution& dist) {
    const double top = dist.upper();
    if (!(pi >= 0.0 && pi <= 1.0)) throw ValidationError("belief must lie in [0, 1]");
    if (!(opponent_threshold >= 0.0 && opponent_threshold <= top)) {
        throw ValidationError("opponent threshold must lie in the loss support");
    }
    if (pi >= 1.0) return top;
    const bool below = pi < params.pi_low();
    if (opponent_threshold >= top) return below ? 0.0 : top;
    if (below && opponent_threshold > chi_bound(pi, params, dist)) return 0.0;
    return std::clamp(psi(opponent_threshold, pi, params, dist), 0.0, top);
}

std::string_view to_string(RootKind kind) noexcept {
    switch (kind) {
        case RootKind::InteriorLow: return "interior-low";
        case RootKind::InteriorHigh: return "interior-high";
        case RootKind::CornerUpper: return "corner-upper";
        case RootKind::CornerZero: return "corner-zero";
    }
    return "?";
}

std::string_view to_string(Regime regime) noexcept {
    switch (regime) {
        case Regime::UniqueInterior: return "unique-interior";
        case Regime::Triple: return "triple";
        case Regime::UniqueCorner: return "unique-corner";
    }
    return "?";
}

std::optional<double> EquilibriumSet::low() const {
    for (const auto& r : roots) {
        if (r.kind == RootKind::InteriorLow || r.kind == RootKind::CornerZero) return r.value;
    }
    return std::nullopt;
}

std::optional<double> EquilibriumSet::high() const {
    for (const auto& r : roots) {
        if (r.kind == RootKind::InteriorHigh) return r.value;
    }
    return std::nullopt;
}

std::optional<double> EquilibriumSet::corner() const {
    for (const auto& r : roots) {
        if (r.kind == RootKind::CornerUpper) return r.value;
    }
    return std::nullopt;
}

std::size_t EquilibriumSet::interior_count() const {
    return static_cast<std::size_t>(std::count_if(roots.begin(), roots.end(), [](const EquilibriumRoot& r) {
        return r.kind == RootKind::InteriorLow || r.kind == RootKind::InteriorHigh;
    }));
}

double EquilibriumSet::lowest() const {
    if (roots.empty()) throw InvariantViolation("empty equilibrium set");
    return roots.front().value;
}

double EquilibriumSet::highest() const {
    if (roots.empty()) throw InvariantViolation("empty equilibrium set");
    return roots.back().value;
}

EquilibriumSet solve_common_equilibria(double pi, const GameParams& params, const LossDistribution& dist,
                                       const CommonSolverOptions& options) {
    if (!(pi >= 0.0 && pi < 1.0)) throw ValidationError("common-belief solver needs pi in [0, 1)");
    if (!dist.monotone_hazard()) {
        throw ValidationError("common-belief equilibrium structure requires a monotone hazard rate");
    }
    if (options.scan_cells < 2) throw ValidationError("scan needs at least two cells");

    const double top = dist.upper();
    const double tilt = psi_tilt(pi, params);
    auto gap = [&](double ell) { return psi(ell, pi, params, dist) - ell; };

    // Sign of psi(l) - l as l -> upper.
    const int sign_top = tilt != 0.0 ? sign_of(tilt) : sign_of(params.b() - 1.0 - top);

    EquilibriumSet out;
    out.pi = pi;

    struct Bracket {
        double lo, hi;
        int sign_lo;
    };
    std::vector<Bracket> brackets;
    std::vector<double> exact;

    const std::size_t n = options.scan_cells;
    const double step = top / static_cast<double>(n);
    double prev_x = 0.0;
    double prev_g = gap(0.0);
    if (prev_g == 0.0) exact.push_back(0.0);
    for (std::size_t i = 1; i <= n; ++i) {
        const bool last = i == n;
        const double x = last ? top : step * static_cast<double>(i);
        const double g = last ? 0.0 : gap(x);
        const int s = last ? sign_top : sign_of(g);
        const int ps = sign_of(prev_g);
        if (!last && s == 0) exact.push_back(x);
        if (ps != 0 && s != 0 && s != ps) brackets.push_back({prev_x, x, ps});
        prev_x = x;
        prev_g = g;
    }

    std::vector<double> found = exact;
    for (const auto& br : brackets) {
        const auto res = bisect_signed(gap, br.lo, br.hi, br.sign_lo, 0.0, options.max_iter);
        found.push_back(res.root);
    }
    std::sort(found.begin(), found.end());

    // Merge roots closer than the separation floor (tangency near pi').
    const double min_sep = options.min_separation * top;
    std::vector<double> merged;
    for (double r : found) {
        if (!merged.empty() && r - merged.back() < min_sep) {
            merged.back() = 0.5 * (merged.back() + r);
        } else {
            merged.push_back(r);
        }
    }

    for (double r : merged) {
        EquilibriumRoot root;
        root.value = r;
        root.residual = std::abs(gap(r));
        if (r == 0.0) {
            root.kind = RootKind::CornerZero;
        } else {
            const double h = std::min(1e-6 * top, 0.5 * (top - r));
            const double lo = std::max(0.0, r - h);
            double slope;
            if (h > 0.0 && r + h < top) {
                slope = (gap(r + h) - gap(lo)) / (r + h - lo);
            } else {
                slope = psi_slope(r, pi, params, dist) - 1.0;  // root within an ulp of the top
            }
            root.kind = slope < 0.0 ? RootKind::InteriorLow : RootKind::InteriorHigh;
        }
        // Bisection stops at adjacent doubles; near the top psi is steep, so
        // accept a residual at the resolution floor as converged.
        const double ulp_floor = std::abs(psi_slope(r, pi, params, dist) - 1.0) *
                                 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, r);
        if (root.residual > std::max(options.tol, ulp_floor)) {
            std::ostringstream os;
            os << "root refinement at pi=" << pi << " stalled at l=" << r << " with residual " << root.residual;
            throw ConvergenceError(os.str(), root.residual);
        }
        out.roots.push_back(root);
    }

    const bool corner = pi >= params.pi_low();
    if (corner) out.roots.push_back({top, RootKind::CornerUpper, 0.0});

    const std::size_t interior = out.interior_count();
    const std::size_t noncorner = out.roots.size() - (corner ? 1 : 0);
    if (!corner) {
        if (noncorner != 1) {
            std::ostringstream os;
            os << "expected a unique equilibrium below (b-1)/m at pi=" << pi << ", found " << noncorner
               << " (hazard-rate assumption violated?)";
            throw InvariantViolation(os.str());
        }
        out.regime = Regime::UniqueInterior;
    } else if (interior == 2) {
        out.regime = Regime::Triple;
    } else if (interior > 2) {
        std::ostringstream os;
        os << "found " << interior << " interior equilibria at pi=" << pi << " (hazard-rate assumption violated?)";
        throw InvariantViolation(os.str());
    } else {
        out.regime = tilt <= 0.0 ? Regime::UniqueInterior : Regime::UniqueCorner;
    }
    return out;
}

CommonCriticals critical_pair(const GameParams& params, const LossDistribution& dist, double tol) {
    const double top = dist.upper();
    const double bm1 = params.b() - 1.0;
    if (top <= bm1) {
        std::ostringstream os;
        os << "no tangency when the loss support top " << top << " <= b - 1 = " << bm1;
        throw RegimeError(os.str());
    }
    if (!dist.monotone_hazard()) throw ValidationError("tangency search requires a monotone hazard rate");

    // l - 1/h(l) - (b-1): negative at 0, tends to top - (b-1) > 0 at the top.
    auto excess = [&](double ell) { return ell - 1.0 / hazard(dist, ell) - bm1; };
    if (excess(0.0) >= 0.0) throw InvariantViolation("tangency equation does not bracket at l = 0");
    const auto res = bisect_signed(excess, 0.0, top, -1, tol);

    CommonCriticals out;
    out.pi_low = params.pi_low();
    out.ell_prime = res.root;
    const double F = dist.cdf(out.ell_prime);
    const double num = out.ell_prime * (1.0 - F) + bm1 * F;
    out.pi_prime = num / (params.net_moral_cost() + num);
    return out;
}

double closed_form_common_uniform(double pi, const GameParams& params) {
    if (params.b() < 2.0) throw ValidationError("closed-form common threshold requires b >= 2");
    if (!(pi >= 0.0 && pi < 1.0)) throw ValidationError("closed-form common threshold needs pi in [0, 1)");
    if (pi >= params.pi_low()) return 1.0;
    const double half_b = 0.5 * params.b();
    const double k = params.net_moral_cost() * pi / (1.0 - pi);
    const double disc = half_b * half_b - k;
    if (disc < 0.0) throw ValidationError("negative discriminant in closed-form common threshold");
    // b/2 - sqrt(b^2/4 - k), written without cancellation.
    return k / (half_b + std::sqrt(disc));
}

}  // namespace beliefcoop
