#include "beliefcoop/extensions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>

#include "beliefcoop/common.hpp"
#include "beliefcoop/errors.hpp"
#include "beliefcoop/numerics.hpp"

namespace beliefcoop {

namespace {

void check_belief(double pi, const char* name) {
    if (!(pi >= 0.0 && pi < 1.0)) throw ValidationError(std::string(name) + " must lie in [0, 1)");
}

// Roots of f on [lo, hi]: exact zeros on the scan grid plus one bisected root
// per sign change. Ascending, duplicates within `merge` dropped.
std::vector<double> scan_roots(const std::function<double(double)>& f, double lo, double hi, std::size_t cells,
                               int max_iter, double merge) {
    std::vector<double> roots;
    auto push = [&](double r) {
        if (roots.empty() || r - roots.back() > merge) roots.push_back(r);
    };
    double prev_x = lo;
    double prev_g = f(lo);
    if (prev_g == 0.0) push(lo);
    for (std::size_t i = 1; i <= cells; ++i) {
        double x = (i == cells) ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(cells);
        double g = f(x);
        if (g == 0.0) {
            push(x);
        } else if (prev_g != 0.0 && sign_of(g) != sign_of(prev_g)) {
            push(bisect_signed(f, prev_x, x, sign_of(prev_g), 0.0, max_iter).root);
        }
        prev_x = x;
        prev_g = g;
    }
    return roots;
}

}  // namespace

AsymmetricEquilibrium solve_asymmetric(double pi1, double pi2, const GameParams& params,
                                       const LossDistribution& dist, const AsymmetricOptions& options) {
    check_belief(pi1, "pi1");
    check_belief(pi2, "pi2");
    if (options.scan_cells < 2) throw ValidationError("scan_cells must be at least 2");
    const double upper = dist.upper();

    auto br1 = [&](double l2) { return best_response_threshold(pi1, l2, params, dist); };
    auto br2 = [&](double l1) { return best_response_threshold(pi2, l1, params, dist); };
    auto gap = [&](double l1) { return br1(br2(l1)) - l1; };

    // Scan points with |gap| below `flat` count as zeros. A run of two or
    // more such points means the maps coincide on a whole interval; its
    // endpoints are reported and the result is flagged degenerate.
    const double flat = 1e-12 * upper;
    const std::size_t n = options.scan_cells;
    std::vector<double> xs(n + 1), gs(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        xs[i] = (i == n) ? upper : upper * static_cast<double>(i) / static_cast<double>(n);
        gs[i] = gap(xs[i]);
        if (std::abs(gs[i]) <= flat) gs[i] = 0.0;
    }

    AsymmetricEquilibrium eq;
    eq.pi1 = pi1;
    eq.pi2 = pi2;
    std::vector<double> roots;
    for (std::size_t i = 0; i <= n;) {
        if (gs[i] == 0.0) {
            std::size_t j = i;
            while (j + 1 <= n && gs[j + 1] == 0.0) ++j;
            roots.push_back(xs[i]);
            if (j > i) {
                eq.degenerate = true;
                roots.push_back(xs[j]);
            }
            i = j + 1;
            continue;
        }
        if (i + 1 <= n && gs[i + 1] != 0.0 && sign_of(gs[i]) != sign_of(gs[i + 1])) {
            roots.push_back(bisect_signed(gap, xs[i], xs[i + 1], sign_of(gs[i]), 0.0, options.max_iter).root);
        }
        ++i;
    }
    if (roots.empty()) throw ConvergenceError("no intersection of the best-response maps found", gap(0.0));

    for (double r : roots) eq.intersections.push_back({r, br2(r)});
    eq.ell1_hat = eq.intersections.front().ell1;
    eq.ell2_hat = eq.intersections.front().ell2;
    eq.unique = pi1 < params.pi_low() && roots.size() == 1 && !eq.degenerate;
    return eq;
}

bool asymmetric_interior(const AsymmetricEquilibrium& eq, const GameParams& params, const LossDistribution& dist) {
    const double upper = dist.upper();
    auto inside = [&](double v) { return v > 0.0 && v < upper; };
    if (!inside(eq.ell1_hat) || !inside(eq.ell2_hat)) return false;
    return inside(psi(eq.ell2_hat, eq.pi1, params, dist)) && inside(psi(eq.ell1_hat, eq.pi2, params, dist));
}

double asymmetric_sensitivity(double pi1, double pi2, const GameParams& params, const LossDistribution& dist,
                              double step) {
    check_belief(pi1, "pi1");
    check_belief(pi2, "pi2");
    if (!(step > 0.0) || !std::isfinite(step)) throw ValidationError("step must be positive");
    if (!(pi1 < params.pi_low() && params.pi_low() < pi2))
        throw ValidationError("sensitivity requires pi1 < (b-1)/m < pi2");
    if (pi2 - step <= params.pi_low() || pi2 + step >= 1.0) throw ValidationError("step leaves the belief range");

    std::array<double, 2> ell1{};
    std::array<double, 2> shifted{pi2 - step, pi2 + step};
    for (std::size_t k = 0; k < 2; ++k) {
        AsymmetricEquilibrium eq = solve_asymmetric(pi1, shifted[k], params, dist);
        if (!asymmetric_interior(eq, params, dist))
            throw RegimeError("corner solution: derivative of l1_hat is undefined");
        ell1[k] = eq.ell1_hat;
    }
    if (!asymmetric_interior(solve_asymmetric(pi1, pi2, params, dist), params, dist))
        throw RegimeError("corner solution: derivative of l1_hat is undefined");
    return (ell1[1] - ell1[0]) / (2.0 * step);
}

std::string_view to_string(GroupVariant v) noexcept {
    switch (v) {
        case GroupVariant::AsPrinted: return "as_printed";
        case GroupVariant::Consistent: return "consistent";
    }
    return "?";
}

double group_cooperation_sum(int n, double pi, double q) {
    if (n < 0) throw ValidationError("group size must be nonnegative");
    const double x = pi;
    const double y = (1.0 - pi) * q;
    double sum = 0.0;
    if (n <= 60) {
        std::uint64_t coef = 1;
        for (int k = 0; k <= n; ++k) {
            sum += static_cast<double>(coef) * std::pow(x, k) * std::pow(y, n - k);
            coef = coef * static_cast<std::uint64_t>(n - k) / static_cast<std::uint64_t>(k + 1);
        }
        return sum;
    }
    const double lg_n = std::lgamma(n + 1.0);
    for (int k = 0; k <= n; ++k) {
        if ((x == 0.0 && k > 0) || (y == 0.0 && n - k > 0)) continue;
        double log_term = lg_n - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
        if (k > 0) log_term += k * std::log(x);
        if (n - k > 0) log_term += (n - k) * std::log(y);
        sum += std::exp(log_term);
    }
    return sum;
}

double group_net_payoff(double ell, int n, double pi, double q, const GameParams& params, GroupVariant variant) {
    const double P = group_cooperation_sum(n, pi, q);
    const double honest_all = std::pow(pi, n);
    if (variant == GroupVariant::Consistent) {
        return (1.0 + ell) * P - ell - (params.b() * P - params.m() * honest_all);
    }
    return (1.0 - ell) * P - ell - (params.b() - params.m() * honest_all);
}

GroupSolution solve_group_common(int n, double pi, const GameParams& params, const LossDistribution& F,
                                 GroupVariant variant, std::size_t scan_cells) {
    if (n < 1) throw ValidationError("group size n must be at least 1");
    check_belief(pi, "pi");
    if (scan_cells < 2) throw ValidationError("scan_cells must be at least 2");
    const double upper = F.upper();
    auto H = [&](double t) { return group_net_payoff(t, n, pi, F.cdf(t), params, variant); };

    GroupSolution sol;
    std::vector<double> interior;
    for (double r : scan_roots(H, 0.0, upper, scan_cells, 200, 1e-12 * upper)) {
        if (r > 0.0 && r < upper) interior.push_back(r);
    }
    const double h0 = H(0.0);
    const double h1 = H(upper);
    if (h0 <= 0.0) sol.equilibria.push_back(0.0);
    sol.equilibria.insert(sol.equilibria.end(), interior.begin(), interior.end());
    if (h1 >= 0.0) sol.equilibria.push_back(upper);

    if (!interior.empty()) {
        sol.threshold = interior.front();
        sol.residual = std::abs(H(sol.threshold));
    } else {
        sol.corner = true;
        sol.threshold = h0 <= 0.0 ? 0.0 : upper;
    }
    return sol;
}

double group_threshold_given_q(int n, double pi, double q, const GameParams& params, const LossDistribution& F,
                               GroupVariant variant) {
    const double upper = F.upper();
    auto net = [&](double t) { return group_net_payoff(t, n, pi, q, params, variant); };
    const double lo = net(0.0);
    if (lo <= 0.0) return 0.0;
    const double hi = net(upper);
    if (hi >= 0.0) return upper;
    return bisect_signed(net, 0.0, upper, 1).root;
}

double group_population_cooperation(int n, double q, const GameParams& params, const LossDistribution& F,
                                    const BeliefDistribution& G, GroupVariant variant) {
    auto integrand = [&](double pi) {
        double t = group_threshold_given_q(n, pi, q, params, F, variant);
        return F.cdf(t) * G.pdf(pi);
    };
    return std::clamp(adaptive_simpson(integrand, 0.0, 1.0, 1e-13), 0.0, 1.0);
}

GroupDiverseSolution solve_group_diverse(int n, const GameParams& params, const LossDistribution& F,
                                         const BeliefDistribution& G, GroupVariant variant,
                                         const GroupDiverseOptions& options) {
    if (n < 1) throw ValidationError("group size n must be at least 1");
    if (options.grid_size < 3) throw ValidationError("grid_size must be at least 3");
    if (!(options.tol > 0.0)) throw ValidationError("tol must be positive");

    std::vector<double> history;
    double q = 0.0;
    double lambda = 1.0;
    int it = 0;
    bool converged = false;
    while (it < options.max_iter) {
        ++it;
        double next = group_population_cooperation(n, q, params, F, G, variant);
        double r = std::abs(next - q);
        if (!history.empty() && r > history.back()) lambda = std::max(lambda * 0.5, 1.0 / 64.0);
        history.push_back(r);
        q = q + lambda * (next - q);
        if (r <= options.tol) {
            converged = true;
            break;
        }
    }
    if (!converged) throw ConvergenceError("group fixed point on q did not converge", history.back());

    const double upper = F.upper();
    auto t_of = [&](double pi) { return group_threshold_given_q(n, pi, q, params, F, variant); };
    GroupDiverseSolution sol{ThresholdCurve::tabulate({0.0, 1.0}, options.grid_size, {0.0, upper}, t_of), q, it,
                             std::move(history)};
    return sol;
}

}  // namespace beliefcoop
