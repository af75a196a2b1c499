#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

#include "beliefcoop/curve.hpp"
#include "beliefcoop/distribution.hpp"
#include "beliefcoop/extensions.hpp"
#include "beliefcoop/params.hpp"

namespace beliefcoop {

/// Counter-based generator: draw `index` on `stream` depends only on
/// (seed, index, stream), so any partition of the index range reproduces the
/// serial sequence.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) noexcept : seed_(seed) {}

    std::uint64_t bits(std::uint64_t index, std::uint32_t stream) const noexcept;
    /// Uniform on [0, 1) with 53 random bits.
    double uniform(std::uint64_t index, std::uint32_t stream) const noexcept;

    std::uint64_t seed() const noexcept { return seed_; }

private:
    std::uint64_t seed_;
};

enum class Scenario { Common, Diverse, Asymmetric };
std::string_view to_string(Scenario s) noexcept;

struct SimConfig {
    Scenario scenario = Scenario::Common;
    double pi = 0.0;   ///< common scenario belief
    double pi1 = 0.0;  ///< asymmetric: belief of the tallied player about the partner
    double pi2 = 0.0;  ///< asymmetric: belief of the partner
    std::uint64_t n_samples = 100000;
    std::uint64_t seed = 1;
    /// Supplied strategy: l-threshold over pi (common) or pi-threshold over l
    /// (diverse). Empty means the analytic equilibrium strategy.
    std::optional<ThresholdCurve> strategy;
};

/// Throws ValidationError on a bad configuration.
void validate(const SimConfig& config);

enum Action : std::size_t { Cooperate = 0, Defect = 1 };

struct SimReport {
    Scenario scenario = Scenario::Common;
    std::uint64_t n_samples = 0;
    std::uint64_t seed = 0;
    double coop_rate_strategic = 0.0;
    double half_width = 0.0;  ///< 95% normal half-width 1.96 sqrt(p(1-p)/n)
    double analytic_prediction = 0.0;
    double max_deviation_gain = 0.0;
    double mean_payoff_cooperate = 0.0;  ///< NaN when no sample cooperated
    double mean_payoff_defect = 0.0;     ///< NaN when no sample defected
    /// [own action][partner action] counts and mean payoffs (NaN for empty cells).
    std::array<std::array<std::uint64_t, 2>, 2> cell_counts{};
    std::array<std::array<double, 2>, 2> cell_mean_payoff{};
};

/// Plays `n_samples` matches. Partner honesty is Bernoulli with the belief of
/// the tallied player; losses come from F and, in the diverse scenario,
/// beliefs from G. Deterministic in the seed.
SimReport simulate(const SimConfig& config, const GameParams& params, const LossDistribution& F,
                   const BeliefDistribution& G);

/// Largest expected-payoff gain from deviating off the prescribed action.
///
/// Common: `strategy` maps pi to a loss threshold; every knot is checked as a
/// separate equilibrium against `grid` losses plus the threshold itself.
double deviation_check_common(const ThresholdCurve& strategy, const GameParams& params, const LossDistribution& F,
                              std::size_t grid = 201);

/// Diverse: `strategy` maps l to a belief threshold; the partner cooperation
/// probability is integrated from the strategy itself.
double deviation_check_diverse(const ThresholdCurve& strategy, const GameParams& params, const LossDistribution& F,
                               const BeliefDistribution& G, std::size_t grid = 201);

double deviation_check_asymmetric(const AsymmetricEquilibrium& eq, const GameParams& params,
                                  const LossDistribution& F, std::size_t grid = 201);

/// Group game with common belief `pi`: co-members cooperate iff their loss
/// is at most `threshold`.
double deviation_check_group(int n, double pi, double threshold, const GameParams& params,
                             const LossDistribution& F, GroupVariant variant, std::size_t grid = 201);

}  // namespace beliefcoop
