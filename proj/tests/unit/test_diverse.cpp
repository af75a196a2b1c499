#include <array>
#include <cmath>

#include "beliefcoop/common.hpp"
#include "beliefcoop/diverse.hpp"
#include "beliefcoop/errors.hpp"
#include "beliefcoop/numerics.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace beliefcoop;

namespace {

const GameParams P28 = validate_params(2, 8);
const LossDistribution U1 = LossDistribution::uniform(1);
const BeliefDistribution G1 = BeliefDistribution::uniform();

ThresholdCurve constant_curve(double v, std::size_t n = 1001) {
    return ThresholdCurve::tabulate({0.0, 1.0}, n, {0.0, 1.0}, [=](double) { return v; });
}

}  // namespace

TEST_CASE("operator T on reference curves") {
    auto all_defect = apply_T(constant_curve(1.0), P28, U1, G1);
    for (std::size_t i = 0; i < all_defect.size(); ++i) {
        double ell = all_defect.knots()[i];
        CHECK(all_defect.values()[i] == doctest::Approx(1.0 - 7.0 / (8.0 + ell - 1.0)).epsilon(1e-14));
    }
    auto all_coop = apply_T(constant_curve(0.0), P28, U1, G1);
    for (double v : all_coop.values()) CHECK(v == doctest::Approx(1.0 / 8.0).epsilon(1e-14));

    auto id = ThresholdCurve::tabulate({0.0, 1.0}, 1001, {0.0, 1.0}, [](double x) { return x; });
    CHECK(std::abs(defect_integral(id, U1, G1) - 0.5) <= 1e-10);
    auto out = apply_T(id, P28, U1, G1);
    for (std::size_t i = 0; i < out.size(); ++i) {
        double ell = out.knots()[i];
        CHECK(out.values()[i] == doctest::Approx(1.0 - 7.0 / (8.0 + (ell - 1.0) / 2.0)).epsilon(1e-12));
    }
}

TEST_CASE("cooperation probability of reference strategies") {
    CHECK(cooperation_prob_given_strategy(constant_curve(1.0), U1, G1) == doctest::Approx(0.0));
    CHECK(cooperation_prob_given_strategy(constant_curve(0.0), U1, G1) == doctest::Approx(1.0));
    auto id = ThresholdCurve::tabulate({0.0, 1.0}, 1001, {0.0, 1.0}, [](double x) { return x; });
    CHECK(cooperation_prob_given_strategy(id, U1, G1) == doctest::Approx(0.5).epsilon(1e-12));
    auto wrong = ThresholdCurve::tabulate({0.0, 2.0}, 11, {0.0, 1.0}, [](double) { return 0.5; });
    CHECK_THROWS_AS(cooperation_prob_given_strategy(wrong, U1, G1), ValidationError);
}

TEST_CASE("operator T keeps the invariant range") {
    // The image lies in [0, 1); it is bounded below by (b-1)/m only for
    // losses l >= b - 1 (or when nobody defects).
    auto F = LossDistribution::uniform(8);
    for (double v : {0.0, 0.3, 1.0}) {
        for (auto p : {P28, validate_params(3, 20), validate_params(5, 4.5)}) {
            for (const LossDistribution* L : std::array<const LossDistribution*, 2>{&U1, &F}) {
                auto curve = ThresholdCurve::tabulate({0.0, L->upper()}, 101, {0.0, 1.0}, [=](double) { return v; });
                auto out = apply_T(curve, p, *L, G1);
                for (std::size_t i = 0; i < out.size(); ++i) {
                    double y = out.values()[i];
                    CHECK(y >= 0.0);
                    CHECK(y < 1.0);
                    if (out.knots()[i] >= p.b() - 1.0 || v == 0.0) CHECK(y >= p.pi_low() - 1e-15);
                }
            }
        }
    }
    CHECK(apply_T(constant_curve(1.0), P28, U1, G1).values()[0] == doctest::Approx(0.0));
    auto partial = apply_T(constant_curve(0.3), P28, U1, G1);
    CHECK(partial.values()[0] == doctest::Approx(1.0 - 7.0 / 7.7).epsilon(1e-12));
    CHECK(partial.values()[0] < P28.pi_low());
}

TEST_CASE("diverse fixed point for uniform losses and beliefs") {
    auto sol = solve_diverse_threshold(P28, U1, G1);
    CHECK(sol.contraction_gamma == doctest::Approx(7.0 / 64.0).epsilon(1e-15));
    CHECK(sol.uniqueness_certified);
    CHECK_FALSE(sol.damped);
    CHECK(sol.residual <= 1e-10);
    CHECK(sol.threshold.size() == 1001);
    CHECK(sol.threshold.strictly_increasing());
    for (std::size_t k = 1; k < sol.step_norms.size(); ++k) {
        CHECK(sol.step_norms[k] <= sol.contraction_gamma * sol.step_norms[k - 1] + 1e-15);
    }
    CHECK(sol.coop_prob + defect_integral(sol.threshold, U1, G1) == doctest::Approx(1.0).epsilon(1e-14));

    // substituting the curve back into the right-hand side reproduces it
    auto again = apply_T(sol.threshold, P28, U1, G1);
    CHECK(again.sup_distance(sol.threshold) <= 1e-10);
    const double mass = defect_integral(sol.threshold, U1, G1);
    for (std::size_t i = 0; i < sol.threshold.size(); i += 50) {
        CHECK(sol.threshold.values()[i] ==
              doctest::Approx(diverse_threshold_at(sol.threshold.knots()[i], mass, P28)).epsilon(1e-10));
    }

    // The converged curve has the form 1 - C/(alpha + beta l) with the exact pair.
    auto ab = solve_alpha_beta(P28, AlphaBetaMode::Exact);
    CHECK(sol.threshold.values()[0] == doctest::Approx(1.0 - 7.0 / ab.alpha).epsilon(1e-8));
    double mean = simpson(sol.threshold.values(), 1e-3);
    CHECK(std::abs(mean - ab.beta) <= 2e-3);
}

TEST_CASE("diverse solver on a non-uniform loss law and a wider support") {
    auto F = LossDistribution::uniform(3.0);
    auto p = validate_params(2.5, 10);
    auto sol = solve_diverse_threshold(p, F, G1);
    CHECK(sol.threshold.strictly_increasing());
    CHECK(apply_T(sol.threshold, p, F, G1).sup_distance(sol.threshold) <= 1e-10);
}

TEST_CASE("concentrated beliefs reduce to the common-belief threshold") {
    const double bar = 0.05, d = 0.02;
    BeliefDistribution G(Distribution::tabulated({0.0, bar - d, bar + d, 1.0}, {0.0, 1e-6, 1.0 - 1e-6, 1.0}));
    auto sol = solve_diverse_threshold(P28, U1, G);
    double ell_star = solve_common_equilibria(bar, P28, U1).lowest();
    CHECK(sol.threshold.invert(bar) == doctest::Approx(ell_star).epsilon(2e-2));
}

TEST_CASE("damping engages when the contraction bound fails") {
    BeliefDistribution G(Distribution::tabulated({0.0, 0.45, 0.55, 1.0}, {0.0, 0.05, 0.95, 1.0}));
    auto p = validate_params(2, 3);
    auto sol = solve_diverse_threshold(p, U1, G);
    CHECK(sol.contraction_gamma >= 1.0);
    CHECK(sol.damped);
    CHECK_FALSE(sol.uniqueness_certified);
    CHECK(apply_T(sol.threshold, p, U1, G).sup_distance(sol.threshold) <= 1e-9);
}

TEST_CASE("solver option validation") {
    DiverseOptions even;
    even.grid_size = 1000;
    CHECK_THROWS_AS(solve_diverse_threshold(P28, U1, G1, even), ValidationError);
    DiverseOptions tiny;
    tiny.max_iter = 2;
    tiny.tol = 1e-15;
    CHECK_THROWS_AS(solve_diverse_threshold(P28, U1, G1, tiny), ConvergenceError);
}

TEST_CASE("alpha and beta") {
    auto approx = solve_alpha_beta(P28, AlphaBetaMode::Approximate);
    const double g = std::sqrt(11.0 / 7.0);
    CHECK(approx.alpha == doctest::Approx(3.5 * (1.0 + g)).epsilon(1e-14));
    CHECK(approx.beta == doctest::Approx((g - 1.0) / (g + 1.0)).epsilon(1e-14));
    CHECK(std::abs(approx.alpha - 7.0 * (1.0 + 1.0 / approx.alpha)) <= 1e-9);
    CHECK(std::abs(approx.beta - (1.0 - 7.0 / approx.alpha)) <= 1e-9);

    auto exact = solve_alpha_beta(P28, AlphaBetaMode::Exact);
    const double L = std::log1p(exact.beta / exact.alpha);
    CHECK(exact.alpha == doctest::Approx(7.0 * (1.0 + L / exact.beta)).epsilon(1e-12));
    CHECK(exact.beta == doctest::Approx(1.0 - 7.0 / exact.beta * L).epsilon(1e-12));
    CHECK(exact.alpha > 0.0);
    CHECK(exact.beta > 0.0);
    CHECK(exact.beta < 1.0);

    double prev_beta = 1.0, prev_gap = 1.0;
    for (double m : {1e2, 1e3, 1e4}) {
        auto p = validate_params(2, m);
        auto a = solve_alpha_beta(p, AlphaBetaMode::Approximate);
        auto e = solve_alpha_beta(p, AlphaBetaMode::Exact);
        CHECK(a.beta < prev_beta);
        double gap = std::abs(e.alpha / a.alpha - 1.0);
        CHECK(gap < prev_gap);
        prev_beta = a.beta;
        prev_gap = gap;
    }
    CHECK(prev_beta < 1e-3);
    CHECK(prev_gap < 1e-3);
}

TEST_CASE("closed-form diverse threshold") {
    auto ab = solve_alpha_beta(P28, AlphaBetaMode::Approximate);
    const double kink = diverse_upper_kink(P28, ab);
    CHECK(closed_form_diverse_uniform(ab.beta, P28, ab) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(7.0 / (1.0 - ab.beta) == doctest::Approx(ab.alpha).epsilon(1e-12));
    CHECK(closed_form_diverse_uniform(std::nextafter(kink, 0.0), P28, ab) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(closed_form_diverse_uniform(kink, P28, ab) == 1.0);
    CHECK(closed_form_diverse_uniform(0.0, P28, ab) == 0.0);
    CHECK(closed_form_diverse_uniform(0.5, P28, ab) == 1.0);

    auto sol = solve_diverse_threshold(P28, U1, G1);
    for (double pi : {0.118, 0.12, 0.123}) {
        double cf = closed_form_diverse_uniform(pi, P28, ab);
        CHECK(cf > 0.0);
        CHECK(cf < 1.0);
        CHECK(cf == doctest::Approx(oracle::diverse_uniform(pi, 2, 8, {ab.alpha, ab.beta})).epsilon(1e-14));
        CHECK(std::abs(cf - sol.threshold.invert(pi)) <= 5e-2);
    }
}
