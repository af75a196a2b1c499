#include <cmath>
#include <cstring>

#include "beliefcoop/common.hpp"
#include "beliefcoop/diverse.hpp"
#include "beliefcoop/errors.hpp"
#include "beliefcoop/montecarlo.hpp"
#include "doctest.h"

using namespace beliefcoop;

namespace {

const GameParams P350 = validate_params(3, 50);
const GameParams P28 = validate_params(2, 8);
const LossDistribution U8 = LossDistribution::uniform(8);
const LossDistribution U1 = LossDistribution::uniform(1);
const BeliefDistribution G1 = BeliefDistribution::uniform();

bool same_bits(double a, double b) {
    if (std::isnan(a) && std::isnan(b)) return true;
    return std::memcmp(&a, &b, sizeof a) == 0;
}

bool identical(const SimReport& a, const SimReport& b) {
    bool ok = same_bits(a.coop_rate_strategic, b.coop_rate_strategic) && same_bits(a.half_width, b.half_width) &&
              same_bits(a.analytic_prediction, b.analytic_prediction) &&
              same_bits(a.max_deviation_gain, b.max_deviation_gain) &&
              same_bits(a.mean_payoff_cooperate, b.mean_payoff_cooperate) &&
              same_bits(a.mean_payoff_defect, b.mean_payoff_defect) && a.cell_counts == b.cell_counts;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) ok = ok && same_bits(a.cell_mean_payoff[i][j], b.cell_mean_payoff[i][j]);
    return ok;
}

ThresholdCurve common_strategy(const GameParams& p, const LossDistribution& F, double top, std::size_t n) {
    return ThresholdCurve::tabulate({0.0, top}, n, {0.0, F.upper()},
                                    [&](double pi) { return solve_common_equilibria(pi, p, F).lowest(); });
}

}  // namespace

TEST_CASE("counter-based generator") {
    CounterRng a(42), b(42), c(43);
    CHECK(a.bits(7, 0) == b.bits(7, 0));
    CHECK(a.bits(7, 0) != c.bits(7, 0));
    CHECK(a.bits(7, 0) != a.bits(7, 1));
    CHECK(a.bits(7, 0) != a.bits(8, 0));
    double sum = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        double u = a.uniform(i, 3);
        CHECK_UNARY(u >= 0.0 && u < 1.0);
        sum += u;
    }
    CHECK(sum / n == doctest::Approx(0.5).epsilon(5e-3));
}

TEST_CASE("simulated cooperation matches the common-belief prediction") {
    for (double pi : {0.01, 0.03, 0.035}) {
        SimConfig cfg;
        cfg.pi = pi;
        cfg.n_samples = 200000;
        cfg.seed = 11;
        auto rep = simulate(cfg, P350, U8, G1);
        const double t = solve_common_equilibria(pi, P350, U8).lowest();
        CHECK(rep.analytic_prediction == doctest::Approx(t / 8.0).epsilon(1e-14));
        CHECK(std::abs(rep.coop_rate_strategic - rep.analytic_prediction) <= 3 * rep.half_width);
        CHECK(rep.half_width ==
              doctest::Approx(1.96 * std::sqrt(rep.coop_rate_strategic * (1 - rep.coop_rate_strategic) / 200000.0)));
        CHECK(rep.max_deviation_gain <= 1e-12);
        CHECK(rep.cell_counts[0][0] + rep.cell_counts[0][1] + rep.cell_counts[1][0] + rep.cell_counts[1][1] == 200000);
        CHECK(rep.cell_mean_payoff[0][0] == doctest::Approx(1.0));
        CHECK(rep.cell_mean_payoff[1][1] == doctest::Approx(0.0));
    }
    SimConfig zero;
    zero.pi = 0.0;
    zero.n_samples = 10000;
    auto rep = simulate(zero, P28, U1, G1);
    CHECK(rep.coop_rate_strategic == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(rep.half_width == 0.0);
    CHECK(std::isnan(rep.mean_payoff_cooperate));
}

TEST_CASE("simulated cooperation matches the diverse-belief prediction") {
    SimConfig cfg;
    cfg.scenario = Scenario::Diverse;
    cfg.n_samples = 200000;
    cfg.seed = 5;
    auto rep = simulate(cfg, P28, U1, G1);
    auto sol = solve_diverse_threshold(P28, U1, G1);
    CHECK(rep.analytic_prediction == doctest::Approx(sol.coop_prob).epsilon(1e-14));
    CHECK(std::abs(rep.coop_rate_strategic - rep.analytic_prediction) <= 3 * rep.half_width);
    CHECK(rep.max_deviation_gain <= 1e-6);
}

TEST_CASE("asymmetric scenario") {
    SimConfig cfg;
    cfg.scenario = Scenario::Asymmetric;
    cfg.pi1 = 0.03;
    cfg.pi2 = 0.08;
    cfg.n_samples = 200000;
    auto rep = simulate(cfg, P350, U8, G1);
    auto eq = solve_asymmetric(0.03, 0.08, P350, U8);
    CHECK(rep.analytic_prediction == doctest::Approx(eq.ell1_hat / 8.0));
    CHECK(std::abs(rep.coop_rate_strategic - rep.analytic_prediction) <= 3 * rep.half_width);
    CHECK(rep.max_deviation_gain <= 1e-9);
}

TEST_CASE("simulation is reproducible and scales at the Monte Carlo rate") {
    SimConfig cfg;
    cfg.pi = 0.03;
    cfg.n_samples = 50000;
    cfg.seed = 2024;
    CHECK(identical(simulate(cfg, P350, U8, G1), simulate(cfg, P350, U8, G1)));
    cfg.seed = 2025;
    auto other = simulate(cfg, P350, U8, G1);
    cfg.seed = 2024;
    CHECK_FALSE(identical(simulate(cfg, P350, U8, G1), other));

    double prev = 0.0;
    for (std::uint64_t n : {10000ULL, 100000ULL, 1000000ULL}) {
        cfg.n_samples = n;
        auto rep = simulate(cfg, P350, U8, G1);
        double scaled = rep.half_width * std::sqrt(static_cast<double>(n));
        if (prev > 0.0) CHECK(scaled == doctest::Approx(prev).epsilon(0.2));
        prev = scaled;
    }
}

TEST_CASE("supplied strategies and configuration checks") {
    SimConfig cfg;
    cfg.pi = 0.03;
    cfg.n_samples = 1000;
    cfg.strategy = ThresholdCurve({0.0, 0.5}, {0.0, 4.0}, {0.0, 8.0});
    auto rep = simulate(cfg, P350, U8, G1);
    CHECK(rep.analytic_prediction == doctest::Approx(0.24 / 8.0));
    CHECK(rep.max_deviation_gain > 0.0);

    SimConfig bad;
    bad.n_samples = 0;
    CHECK_THROWS_AS(simulate(bad, P28, U1, G1), ValidationError);
    bad.n_samples = 10;
    bad.pi = 1.0;
    CHECK_THROWS_AS(simulate(bad, P28, U1, G1), ValidationError);
    SimConfig asym;
    asym.scenario = Scenario::Asymmetric;
    asym.strategy = ThresholdCurve({0.0, 1.0}, {0.0, 1.0}, {0.0, 1.0});
    CHECK_THROWS_AS(validate(asym), ValidationError);
}

TEST_CASE("deviation check on equilibrium and perturbed strategies") {
    auto eq = common_strategy(P350, U8, 0.99, 199);
    CHECK(deviation_check_common(eq, P350, U8) <= 1e-6);
    auto shifted = ThresholdCurve::tabulate({0.0, 0.99}, 199, {0.0, 8.1},
                                            [&](double pi) { return std::min(eq.eval(pi) + 0.1, 8.0); });
    CHECK(deviation_check_common(shifted, P350, U8) > 0.0);

    auto sol = solve_diverse_threshold(P28, U1, G1);
    CHECK(deviation_check_diverse(sol.threshold, P28, U1, G1) <= 1e-6);
    auto moved = ThresholdCurve::tabulate({0.0, 1.0}, 1001, {0.0, 1.0},
                                          [&](double l) { return std::min(sol.threshold.eval(l) + 0.1, 1.0); });
    CHECK(deviation_check_diverse(moved, P28, U1, G1) > 0.0);

    // Honest partner for sure: cooperation beats defection by 1 - (b - m).
    ThresholdCurve certain({0.99, 1.0}, {1.0, 1.0}, {0.0, 1.0});
    CHECK(deviation_check_common(certain, P28, U1) == 0.0);
    ThresholdCurve wrong({0.99, 1.0}, {0.0, 0.0}, {0.0, 1.0});
    CHECK(deviation_check_common(wrong, P28, U1) == doctest::Approx(1.0 - (2.0 - 8.0)));

    auto a = solve_asymmetric(0.03, 0.06, P350, U8);
    CHECK(deviation_check_asymmetric(a, P350, U8) <= 1e-6);
    for (double pi : {0.0, 0.05, 0.1, 0.3}) {
        auto g = solve_group_common(1, pi, P28, U1);
        CHECK(deviation_check_group(1, pi, g.threshold, P28, U1, GroupVariant::Consistent) <= 1e-6);
    }
    auto g3 = solve_group_common(3, 0.7, P350, U8);
    CHECK(deviation_check_group(3, 0.7, g3.threshold, P350, U8, GroupVariant::Consistent) <= 1e-6);
    const double off = g3.threshold < 7.0 ? g3.threshold + 0.5 : g3.threshold - 0.5;
    CHECK(deviation_check_group(3, 0.7, off, P350, U8, GroupVariant::Consistent) > 0.0);
}
