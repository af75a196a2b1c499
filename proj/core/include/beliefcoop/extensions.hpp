#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "beliefcoop/curve.hpp"
#include "beliefcoop/distribution.hpp"
#include "beliefcoop/params.hpp"

namespace beliefcoop {

// ---------------------------------------------------------------------------
// Asymmetric, commonly known beliefs

struct AsymmetricPoint {
    double ell1 = 0.0;
    double ell2 = 0.0;
};

struct AsymmetricEquilibrium {
    double pi1 = 0.0;
    double pi2 = 0.0;
    double ell1_hat = 0.0;  ///< lowest-l1 intersection
    double ell2_hat = 0.0;
    bool unique = false;    ///< pi1 < (b-1)/m and exactly one intersection found
    bool degenerate = false;  ///< the maps coincide on an interval; its endpoints are listed
    std::vector<AsymmetricPoint> intersections;
};

struct AsymmetricOptions {
    std::size_t scan_cells = 2000;
    int max_iter = 200;
};

/// Intersections of the two best-response maps
///   l1 = BR(pi1; l2),  l2 = BR(pi2; l1)
/// found as roots of l1 -> BR(pi1; BR(pi2; l1)) - l1 by scan and bisection.
/// With pi1 < (b-1)/m that composite is strictly decreasing, so the
/// intersection is unique; otherwise every intersection on the scan is listed.
AsymmetricEquilibrium solve_asymmetric(double pi1, double pi2, const GameParams& params,
                                       const LossDistribution& dist, const AsymmetricOptions& options = {});

/// True when both thresholds sit strictly inside the support and neither
/// reaction is clamped.
bool asymmetric_interior(const AsymmetricEquilibrium& eq, const GameParams& params, const LossDistribution& dist);

/// Central difference of l1_hat with respect to pi2. Requires
/// pi1 < (b-1)/m < pi2; throws RegimeError if any of the three solves is a corner.
double asymmetric_sensitivity(double pi1, double pi2, const GameParams& params, const LossDistribution& dist,
                              double step = 1e-6);

// ---------------------------------------------------------------------------
// Group game: one strategic player among n others

/// `AsPrinted` keeps the cooperation factor (1 - l) and defection payoff
/// b - m pi^n as typeset; `Consistent` uses the two-player payoff algebra,
/// cooperation (1 + l) P - l and defection b P - m pi^n, where P is the
/// probability that every other member cooperates.
enum class GroupVariant { AsPrinted, Consistent };
std::string_view to_string(GroupVariant v) noexcept;

/// sum_{k=0..n} C(n,k) pi^k [(1-pi) q]^{n-k}. Exact integer coefficients up
/// to n = 60, log-space terms beyond.
double group_cooperation_sum(int n, double pi, double q);

/// Cooperation minus defection payoff for a member with loss `ell` when each
/// strategic co-member cooperates with probability `q`.
double group_net_payoff(double ell, int n, double pi, double q, const GameParams& params, GroupVariant variant);

struct GroupSolution {
    double threshold = 0.0;  ///< lowest interior equilibrium, else the corner
    bool corner = false;     ///< no interior root; threshold is 0 or upper
    double residual = 0.0;   ///< |net payoff| at an interior threshold
    std::vector<double> equilibria;  ///< every equilibrium threshold, ascending
};

GroupSolution solve_group_common(int n, double pi, const GameParams& params, const LossDistribution& F,
                                 GroupVariant variant = GroupVariant::Consistent, std::size_t scan_cells = 2000);

/// Threshold of a member with belief `pi` when co-members cooperate with
/// probability `q` (the net payoff is affine and decreasing in the loss).
double group_threshold_given_q(int n, double pi, double q, const GameParams& params, const LossDistribution& F,
                               GroupVariant variant);

struct GroupDiverseOptions {
    std::size_t grid_size = kDefaultGridSize;
    double tol = 1e-12;
    int max_iter = 500;
};

struct GroupDiverseSolution {
    ThresholdCurve threshold;  ///< pi -> l^n_d(pi) on [0, 1]
    double coop_prob = 0.0;    ///< q at the fixed point
    int iterations = 0;
    std::vector<double> residual_history;
};

/// Outer fixed point on q = integral of F(l^n_d(pi)) dG(pi), starting from q = 0.
GroupDiverseSolution solve_group_diverse(int n, const GameParams& params, const LossDistribution& F,
                                         const BeliefDistribution& G,
                                         GroupVariant variant = GroupVariant::Consistent,
                                         const GroupDiverseOptions& options = {});

/// One outer step: the cooperation probability implied by best responses to `q`.
double group_population_cooperation(int n, double q, const GameParams& params, const LossDistribution& F,
                                    const BeliefDistribution& G, GroupVariant variant);

}  // namespace beliefcoop
