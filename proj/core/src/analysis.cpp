#include "beliefcoop/analysis.hpp"

#include <cmath>
#include <sstream>

#include "beliefcoop/common.hpp"
#include "beliefcoop/errors.hpp"
#include "beliefcoop/numerics.hpp"

namespace beliefcoop {

namespace {

void require_uniform_case(const GameParams& params) {
    if (params.b() < 2.0) {
        std::ostringstream os;
        os << "uniform-case comparison requires b >= 2 (got b=" << params.b() << ")";
        throw ValidationError(os.str());
    }
}

}  // namespace

double crossing_gap(double pi, const GameParams& params, const AlphaBeta& ab) {
    return closed_form_common_uniform(pi, params) - closed_form_diverse_uniform(pi, params, ab);
}

double common_slope_uniform(double pi, const GameParams& params) {
    const double C = params.net_moral_cost();
    const double half_b = 0.5 * params.b();
    const double disc = half_b * half_b - C * pi / (1.0 - pi);
    return C / (2.0 * (1.0 - pi) * (1.0 - pi) * std::sqrt(disc));
}

double diverse_slope_uniform(double pi, const GameParams& params, const AlphaBeta& ab) {
    return params.net_moral_cost() / (ab.beta * (1.0 - pi) * (1.0 - pi));
}

double solve_pi_dagger(const GameParams& params, const AlphaBeta& ab, const PiDaggerOptions& options) {
    require_uniform_case(params);
    if (options.scan_points < 2) throw ValidationError("pi-dagger scan needs at least two points");
    const double lo = ab.beta;
    const double hi = diverse_upper_kink(params, ab);
    if (!(hi > lo)) throw InvariantViolation("diverse middle branch is empty");

    auto gap = [&](double pi) { return crossing_gap(pi, params, ab); };

    const int n = options.scan_points;
    int changes = 0;
    double br_lo = 0.0;
    double br_hi = 0.0;
    double prev_x = lo + (hi - lo) / (n + 1);
    int prev_s = sign_of(gap(prev_x));
    for (int i = 2; i <= n; ++i) {
        const double x = lo + (hi - lo) * i / (n + 1);
        const int s = sign_of(gap(x));
        if (s != 0 && prev_s != 0 && s != prev_s) {
            ++changes;
            br_lo = prev_x;
            br_hi = x;
        } else if (s == 0 && prev_s != 0) {
            ++changes;
            br_lo = br_hi = x;
        }
        if (s != 0) {
            prev_s = s;
            prev_x = x;
        }
    }
    if (changes != 1) {
        std::ostringstream os;
        os << "expected exactly one crossing of l*_c and l*_d on (" << lo << ", " << hi << "), found " << changes;
        throw InvariantViolation(os.str());
    }
    if (br_lo == br_hi) return br_lo;
    return bisect(gap, br_lo, br_hi, options.tol).root;
}

std::string_view to_string(ExAnteMethod method) noexcept {
    return method == ExAnteMethod::ClosedForm ? "closed_form" : "quadrature";
}

double ex_ante_p_common(const GameParams& params, ExAnteMethod method) {
    require_uniform_case(params);
    const double C = params.net_moral_cost();
    const double b = params.b();
    if (method == ExAnteMethod::Quadrature) {
        const auto integrand = [&](double ell) { return 1.0 / (C + b * ell - ell * ell); };
        return C * adaptive_simpson(integrand, 0.0, 1.0, 1e-14);
    }
    const double phi = std::sqrt(C + 0.25 * b * b);
    const double denom = phi * (phi - 1.0) - 0.5 * b * (0.5 * b - 1.0);
    if (!(denom > 0.0)) throw ValidationError("p_c log argument is not positive; parameters out of range");
    return C / (2.0 * phi) * std::log1p(2.0 * phi / denom);
}

bool ex_ante_diverse_series_fallback(const GameParams& params) {
    const double C = params.net_moral_cost();
    const double x = 4.0 * (params.b() - 1.0) / C;
    return x < 1e-8;
}

double ex_ante_p_diverse(const GameParams& params, const AlphaBeta& ab, ExAnteMethod method) {
    const double C = params.net_moral_cost();
    if (method == ExAnteMethod::Quadrature) {
        const auto integrand = [&](double ell) { return C / (ab.alpha + ab.beta * ell); };
        return adaptive_simpson(integrand, 0.0, 1.0, 1e-14);
    }
    const double x = 4.0 * (params.b() - 1.0) / C;
    const double gamma = std::sqrt(1.0 + x);
    const double gm1 = x / (gamma + 1.0);  // gamma - 1 without cancellation
    const double arg = 2.0 * gm1 / (C * (gamma + 1.0) * (gamma + 1.0));
    if (ex_ante_diverse_series_fallback(params)) {
        // log(1 + arg) ~ arg, so the ratio collapses to 2/(gamma + 1).
        return 2.0 / (gamma + 1.0);
    }
    return C * (gamma + 1.0) / gm1 * std::log1p(arg);
}

CooperationReport cooperation_report(const GameParams& params, AlphaBetaMode mode) {
    require_uniform_case(params);
    const AlphaBeta ab = solve_alpha_beta(params, mode);
    const double C = params.net_moral_cost();
    const double b = params.b();

    CooperationReport r;
    r.mode = mode;
    r.pi_dagger = solve_pi_dagger(params, ab);
    r.p_common = ex_ante_p_common(params, ExAnteMethod::ClosedForm);
    r.p_diverse = ex_ante_p_diverse(params, ab, ExAnteMethod::ClosedForm);
    r.phi = std::sqrt(C + 0.25 * b * b);
    r.gamma_aux = std::sqrt(1.0 + 4.0 * (b - 1.0) / C);
    r.bounds = {ab.beta, diverse_upper_kink(params, ab), params.pi_low()};
    return r;
}

RegionGrid diversity_region(std::span<const double> b_grid, std::span<const double> m_grid) {
    RegionGrid grid;
    grid.b_grid.assign(b_grid.begin(), b_grid.end());
    grid.m_grid.assign(m_grid.begin(), m_grid.end());
    grid.cells.reserve(b_grid.size() * m_grid.size());
    for (double b : b_grid) {
        for (double m : m_grid) {
            RegionCell cell{b, m, false, 0.0, 0.0, false};
            if (b >= 2.0 && m > b - 1.0) {
                const GameParams params = validate_params(b, m);
                const AlphaBeta ab = solve_alpha_beta(params, AlphaBetaMode::Approximate);
                cell.valid = true;
                cell.p_common = ex_ante_p_common(params, ExAnteMethod::ClosedForm);
                cell.p_diverse = ex_ante_p_diverse(params, ab, ExAnteMethod::ClosedForm);
                cell.diverse_wins = cell.p_diverse > cell.p_common;
            }
            grid.cells.push_back(cell);
        }
    }
    return grid;
}

PiDaggerSensitivity pi_dagger_sensitivity(const GameParams& params, double step, AlphaBetaMode mode) {
    if (!(step > 0.0)) throw ValidationError("sensitivity step must be positive");
    const double b = params.b();
    const double m = params.m();
    const double hb = step * b;
    const double hm = step * m;
    if (b - hb < 2.0 || m - hm <= (b + hb) - 1.0) {
        throw ValidationError("sensitivity step pushes (b, m) outside b >= 2, m > b - 1");
    }
    auto dagger = [mode](double bb, double mm) {
        const GameParams p = validate_params(bb, mm);
        return solve_pi_dagger(p, solve_alpha_beta(p, mode));
    };
    PiDaggerSensitivity s;
    s.d_db = (dagger(b + hb, m) - dagger(b - hb, m)) / (2.0 * hb);
    s.d_dm = (dagger(b, m + hm) - dagger(b, m - hm)) / (2.0 * hm);
    return s;
}

}  // namespace beliefcoop
