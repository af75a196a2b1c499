#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "beliefcoop/distribution.hpp"
#include "beliefcoop/params.hpp"

namespace beliefcoop {

/// Reduced-form best response under common beliefs: the threshold a player
/// adopts when the partner cooperates iff its loss is below `ell`.
///
///   psi(l; pi) = (1+m-b)/(1-F(l)) * pi/(1-pi) - (b-1) F(l)/(1-F(l))
///
/// Equivalently (b-1) + c(pi)/(1-F(l)) with c(pi) = (1+m-b) pi/(1-pi) - (b-1),
/// which makes the slope sign (that of c) and the l -> upper limit explicit.
/// Throws DomainError for l outside [0, upper).
double psi(double ell, double pi, const GameParams& params, const LossDistribution& dist);

/// Analytic d psi / d l = f(l)/(1-F(l))^2 * c(pi).
double psi_slope(double ell, double pi, const GameParams& params, const LossDistribution& dist);

/// c(pi) above; negative below (b-1)/m, positive above.
double psi_tilt(double pi, const GameParams& params);

/// Opponent threshold above which defecting for every loss is a best
/// response, F^{-1}((m/(b-1) - 1) pi/(1-pi)). Only exists for pi < (b-1)/m;
/// otherwise throws RegimeError (the corner case applies instead).
double chi_bound(double pi, const GameParams& params, const LossDistribution& dist);

/// Optimal own threshold against a partner who cooperates iff its loss is at
/// most `opponent_threshold`. Ties resolve to cooperation.
double best_response_threshold(double pi, double opponent_threshold, const GameParams& params,
                               const LossDistribution& dist);

enum class RootKind { InteriorLow, InteriorHigh, CornerUpper, CornerZero };
enum class Regime { UniqueInterior, Triple, UniqueCorner };

std::string_view to_string(RootKind kind) noexcept;
std::string_view to_string(Regime regime) noexcept;

struct EquilibriumRoot {
    double value = 0.0;
    RootKind kind = RootKind::InteriorLow;
    double residual = 0.0;  ///< |psi(value) - value|; zero for corners
};

/// Symmetric equilibrium thresholds at one commonly known belief.
struct EquilibriumSet {
    double pi = 0.0;
    std::vector<EquilibriumRoot> roots;  ///< ascending by value
    Regime regime = Regime::UniqueInterior;

    std::optional<double> low() const;     ///< interior-low or corner-zero root
    std::optional<double> high() const;    ///< interior-high root
    std::optional<double> corner() const;  ///< the l = upper equilibrium
    std::size_t interior_count() const;
    double lowest() const;
    double highest() const;
};

struct CommonSolverOptions {
    std::size_t scan_cells = 2000;
    double tol = 1e-10;
    double min_separation = 1e-4;  ///< relative to the support width
    int max_iter = 200;
};

/// All symmetric threshold equilibria at belief `pi` in [0, 1).
///
/// Scans psi(l) - l for sign changes, bisects each bracket to machine
/// resolution, and adds the corner l = upper when pi >= (b-1)/m. The right
/// end of the scan uses the analytic limit of psi, so psi is never evaluated
/// at the singular top of the support.
EquilibriumSet solve_common_equilibria(double pi, const GameParams& params, const LossDistribution& dist,
                                       const CommonSolverOptions& options = {});

/// Boundaries of the multiple-equilibrium region.
struct CommonCriticals {
    double pi_low = 0.0;     ///< (b-1)/m
    double ell_prime = 0.0;  ///< tangency loss: l - 1/h(l) = b - 1
    double pi_prime = 0.0;   ///< tangency belief
};

/// Requires upper > b - 1 (otherwise there is no tangency and RegimeError is thrown).
CommonCriticals critical_pair(const GameParams& params, const LossDistribution& dist, double tol = 0.0);

/// Closed-form common-belief threshold for losses uniform on [0, 1] and b >= 2.
double closed_form_common_uniform(double pi, const GameParams& params);

}  // namespace beliefcoop
