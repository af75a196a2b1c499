#include "beliefcoop/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "beliefcoop/common.hpp"
#include "beliefcoop/diverse.hpp"
#include "beliefcoop/errors.hpp"
#include "beliefcoop/payoff.hpp"

namespace beliefcoop {

namespace {

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

enum Stream : std::uint32_t { OwnLoss = 0, OwnBelief = 1, Honesty = 2, PartnerLoss = 3, PartnerBelief = 4 };

// Largest gain from deviating when the prescribed action is C for l <= t and
// D above. A threshold of 0 prescribes C only to the zero-probability type
// l = 0, so it is read as "defect for every loss".
double threshold_gain(const std::function<double(double)>& net, double t, double upper, std::size_t grid) {
    const bool cooperators = t > 0.0;
    double gain = 0.0;
    for (std::size_t i = 0; i < grid; ++i) {
        double ell = upper * static_cast<double>(i) / static_cast<double>(grid - 1);
        double v = net(ell);
        gain = std::max(gain, cooperators && ell <= t ? -v : v);
    }
    const double at = net(std::clamp(t, 0.0, upper));
    if (cooperators) gain = std::max(gain, -at);
    if (t < upper) gain = std::max(gain, at);
    return gain;
}

// Gain from deviating for one belief row: the partner cooperates with
// probability p and the prescribed action is C iff l <= t.
double row_gain(double pi, double t, double p, const GameParams& params, const LossDistribution& F,
                std::size_t grid) {
    const double upper = F.upper();
    const double defect = payoff_defect(pi, p, params);
    auto net = [&](double ell) { return payoff_cooperate(ell, pi, p, params) - defect; };
    return threshold_gain(net, t, upper, grid);
}

}  // namespace

std::uint64_t CounterRng::bits(std::uint64_t index, std::uint32_t stream) const noexcept {
    std::uint64_t key = mix64(seed_ + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(stream) + 1));
    return mix64(key ^ mix64(index + 0x632be59bd9b4e019ULL));
}

double CounterRng::uniform(std::uint64_t index, std::uint32_t stream) const noexcept {
    return static_cast<double>(bits(index, stream) >> 11) * 0x1.0p-53;
}

std::string_view to_string(Scenario s) noexcept {
    switch (s) {
        case Scenario::Common: return "common";
        case Scenario::Diverse: return "diverse";
        case Scenario::Asymmetric: return "asymmetric";
    }
    return "?";
}

void validate(const SimConfig& config) {
    if (config.n_samples < 1) throw ValidationError("n_samples must be at least 1");
    auto belief = [](double v, const char* name) {
        if (!(v >= 0.0 && v < 1.0)) throw ValidationError(std::string(name) + " must lie in [0, 1)");
    };
    switch (config.scenario) {
        case Scenario::Common: belief(config.pi, "pi"); break;
        case Scenario::Diverse: break;
        case Scenario::Asymmetric:
            belief(config.pi1, "pi1");
            belief(config.pi2, "pi2");
            if (config.strategy) throw ValidationError("asymmetric scenario uses the analytic strategy only");
            break;
    }
}

SimReport simulate(const SimConfig& config, const GameParams& params, const LossDistribution& F,
                   const BeliefDistribution& G) {
    validate(config);
    const CounterRng rng(config.seed);
    const double b = params.b();
    const double m = params.m();

    SimReport rep;
    rep.scenario = config.scenario;
    rep.n_samples = config.n_samples;
    rep.seed = config.seed;

    std::array<std::array<double, 2>, 2> sums{};
    std::uint64_t coop = 0;
    auto tally = [&](bool own_c, bool partner_honest, bool partner_c, double ell) {
        const bool pc = partner_honest || partner_c;
        double payoff;
        if (own_c) {
            payoff = pc ? 1.0 : -ell;
        } else if (pc) {
            payoff = partner_honest ? b - m : b;
        } else {
            payoff = 0.0;
        }
        const std::size_t a = own_c ? Cooperate : Defect;
        const std::size_t o = pc ? Cooperate : Defect;
        ++rep.cell_counts[a][o];
        sums[a][o] += payoff;
        coop += own_c ? 1 : 0;
    };

    if (config.scenario == Scenario::Common) {
        double t;
        if (config.strategy) {
            t = config.strategy->eval(config.pi);
        } else {
            t = solve_common_equilibria(config.pi, params, F).lowest();
        }
        for (std::uint64_t i = 0; i < config.n_samples; ++i) {
            double ell = F.quantile(rng.uniform(i, OwnLoss));
            bool honest = rng.uniform(i, Honesty) < config.pi;
            bool partner_c = !honest && F.quantile(rng.uniform(i, PartnerLoss)) <= t;
            tally(ell <= t, honest, partner_c, ell);
        }
        rep.analytic_prediction = F.cdf(t);
        rep.max_deviation_gain = row_gain(config.pi, t, F.cdf(t), params, F, 201);
    } else if (config.scenario == Scenario::Diverse) {
        ThresholdCurve s = config.strategy ? *config.strategy : solve_diverse_threshold(params, F, G).threshold;
        for (std::uint64_t i = 0; i < config.n_samples; ++i) {
            double ell = F.quantile(rng.uniform(i, OwnLoss));
            double pi = G.quantile(rng.uniform(i, OwnBelief));
            bool honest = rng.uniform(i, Honesty) < pi;
            bool partner_c = false;
            if (!honest) {
                double pl = F.quantile(rng.uniform(i, PartnerLoss));
                double pp = G.quantile(rng.uniform(i, PartnerBelief));
                partner_c = pp >= s.eval(pl);
            }
            tally(pi >= s.eval(ell), honest, partner_c, ell);
        }
        rep.analytic_prediction = cooperation_prob_given_strategy(s, F, G);
        rep.max_deviation_gain = deviation_check_diverse(s, params, F, G);
    } else {
        AsymmetricEquilibrium eq = solve_asymmetric(config.pi1, config.pi2, params, F);
        for (std::uint64_t i = 0; i < config.n_samples; ++i) {
            double ell = F.quantile(rng.uniform(i, OwnLoss));
            bool honest = rng.uniform(i, Honesty) < config.pi1;
            bool partner_c = !honest && F.quantile(rng.uniform(i, PartnerLoss)) <= eq.ell2_hat;
            tally(ell <= eq.ell1_hat, honest, partner_c, ell);
        }
        rep.analytic_prediction = F.cdf(eq.ell1_hat);
        rep.max_deviation_gain = deviation_check_asymmetric(eq, params, F);
    }

    const double n = static_cast<double>(config.n_samples);
    const double p = static_cast<double>(coop) / n;
    rep.coop_rate_strategic = p;
    rep.half_width = 1.96 * std::sqrt(p * (1.0 - p) / n);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t a = 0; a < 2; ++a) {
        std::uint64_t count = 0;
        double total = 0.0;
        for (std::size_t o = 0; o < 2; ++o) {
            const auto c = rep.cell_counts[a][o];
            rep.cell_mean_payoff[a][o] = c ? sums[a][o] / static_cast<double>(c) : nan;
            count += c;
            total += sums[a][o];
        }
        (a == Cooperate ? rep.mean_payoff_cooperate : rep.mean_payoff_defect) =
            count ? total / static_cast<double>(count) : nan;
    }
    return rep;
}

double deviation_check_common(const ThresholdCurve& strategy, const GameParams& params, const LossDistribution& F,
                              std::size_t grid) {
    if (grid < 2) throw ValidationError("deviation grid needs at least 2 points");
    const auto knots = strategy.knots();
    const auto values = strategy.values();
    double gain = 0.0;
    for (std::size_t i = 0; i < knots.size(); ++i) {
        gain = std::max(gain, row_gain(knots[i], values[i], F.cdf(values[i]), params, F, grid));
    }
    return gain;
}

double deviation_check_diverse(const ThresholdCurve& strategy, const GameParams& params, const LossDistribution& F,
                               const BeliefDistribution& G, std::size_t grid) {
    if (grid < 2) throw ValidationError("deviation grid needs at least 2 points");
    const double p = cooperation_prob_given_strategy(strategy, F, G);
    const auto knots = strategy.knots();
    const auto values = strategy.values();
    double gain = 0.0;
    auto check = [&](double ell, double pi, double s) {
        double v = payoff_cooperate(ell, pi, p, params) - payoff_defect(pi, p, params);
        return pi >= s ? -v : v;
    };
    for (std::size_t i = 0; i < knots.size(); ++i) {
        const double s = values[i];
        for (std::size_t j = 0; j < grid; ++j) {
            gain = std::max(gain, check(knots[i], static_cast<double>(j) / static_cast<double>(grid - 1), s));
        }
        // At the boundary itself both actions must be (near) optimal.
        double v = payoff_cooperate(knots[i], s, p, params) - payoff_defect(s, p, params);
        gain = std::max(gain, -v);
        if (s > 0.0) gain = std::max(gain, v);
    }
    return gain;
}

double deviation_check_asymmetric(const AsymmetricEquilibrium& eq, const GameParams& params,
                                  const LossDistribution& F, std::size_t grid) {
    if (grid < 2) throw ValidationError("deviation grid needs at least 2 points");
    return std::max(row_gain(eq.pi1, eq.ell1_hat, F.cdf(eq.ell2_hat), params, F, grid),
                    row_gain(eq.pi2, eq.ell2_hat, F.cdf(eq.ell1_hat), params, F, grid));
}

double deviation_check_group(int n, double pi, double threshold, const GameParams& params,
                             const LossDistribution& F, GroupVariant variant, std::size_t grid) {
    if (grid < 2) throw ValidationError("deviation grid needs at least 2 points");
    const double upper = F.upper();
    const double q = F.cdf(threshold);
    auto net = [&](double ell) { return group_net_payoff(ell, n, pi, q, params, variant); };
    return threshold_gain(net, threshold, upper, grid);
}

}  // namespace beliefcoop
