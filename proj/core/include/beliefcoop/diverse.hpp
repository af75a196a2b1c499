#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "beliefcoop/curve.hpp"
#include "beliefcoop/distribution.hpp"
#include "beliefcoop/params.hpp"

namespace beliefcoop {

/// Defection mass of a belief-threshold strategy: the integral of
/// G(s(l)) dF(l), i.e. the probability that a strategic partner defects.
/// Composite Simpson on the curve's own knots (odd knot count).
double defect_integral(const ThresholdCurve& curve, const LossDistribution& F, const BeliefDistribution& G);

/// Probability a strategic partner using belief threshold `curve` cooperates:
/// the integral of [1 - G(s(l))] dF(l).
double cooperation_prob_given_strategy(const ThresholdCurve& curve, const LossDistribution& F,
                                       const BeliefDistribution& G);

/// Value of the best-response belief threshold at loss `ell` when the
/// partner defects with probability `defect_mass`:
/// 1 - (1+m-b) / (m + (l - (b-1)) * defect_mass).
double diverse_threshold_at(double ell, double defect_mass, const GameParams& params);

/// One application of the best-response operator on belief thresholds.
ThresholdCurve apply_T(const ThresholdCurve& curve, const GameParams& params, const LossDistribution& F,
                       const BeliefDistribution& G);

/// Lipschitz bound of apply_T in the sup norm: (1+m-b) * sup g * sup F / m^2,
/// where sup g is the belief density bound and sup F = 1.
double contraction_gamma(const GameParams& params, const BeliefDistribution& G);

struct DiverseOptions {
    std::size_t grid_size = kDefaultGridSize;
    double tol = 1e-10;
    int max_iter = 10000;
    double damping = 0.5;  ///< used only when the contraction bound is >= 1
};

struct DiverseSolution {
    ThresholdCurve threshold;  ///< pi*_d over l in [0, upper]
    double coop_prob = 0.0;    ///< probability a strategic partner cooperates
    double defect_mass = 0.0;  ///< integral of G(pi*_d) dF at the fixed point
    int iterations = 0;
    double residual = 0.0;     ///< sup norm of the last update
    double contraction_gamma = 0.0;
    bool damped = false;             ///< damping was needed (gamma >= 1)
    bool uniqueness_certified = false;  ///< contraction bound < 1
    std::vector<double> step_norms;  ///< sup norm of each update, in order
};

/// Iterates apply_T from the constant curve (b-1)/m until the sup-norm update
/// drops below `tol`. Throws ConvergenceError after `max_iter` iterations and
/// InvariantViolation if the result is not strictly increasing.
DiverseSolution solve_diverse_threshold(const GameParams& params, const LossDistribution& F,
                                        const BeliefDistribution& G, const DiverseOptions& options = {});

enum class AlphaBetaMode { Exact, Approximate };
std::string_view to_string(AlphaBetaMode mode) noexcept;

/// Coefficients of the uniform-case diverse threshold 1 - (1+m-b)/(alpha + beta l).
struct AlphaBeta {
    double alpha = 0.0;
    double beta = 0.0;
    AlphaBetaMode mode = AlphaBetaMode::Approximate;
};

/// Exact mode solves the self-consistency system for uniform losses and
/// beliefs on [0, 1]; approximate mode returns the large-m closed forms.
AlphaBeta solve_alpha_beta(const GameParams& params, AlphaBetaMode mode);

/// Uniform-case diverse loss threshold l*_d(pi) (inverse of pi*_d, clamped to [0, 1]).
double closed_form_diverse_uniform(double pi, const GameParams& params, const AlphaBeta& ab);

/// Belief above which l*_d reaches 1: 1 - (1+m-b)/(alpha + beta).
double diverse_upper_kink(const GameParams& params, const AlphaBeta& ab);

}  // namespace beliefcoop
