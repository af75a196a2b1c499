#pragma once

#include "beliefcoop/params.hpp"

namespace beliefcoop {

/// Beliefs are clamped to [0, 1 - kBeliefEps] wherever pi/(1 - pi) appears.
inline constexpr double kBeliefEps = 1e-9;

double clamp_belief(double pi) noexcept;

/// Expected payoff of a strategic player with loss `ell` and belief `pi`
/// who cooperates, when a strategic partner cooperates with probability `p`:
/// pi + (1-pi) p - (1-pi)(1-p) ell.
double payoff_cooperate(double ell, double pi, double p, const GameParams& params);

/// Expected payoff of defecting: pi (b - m) + (1-pi) p b. Independent of the loss.
double payoff_defect(double pi, double p, const GameParams& params);

}  // namespace beliefcoop
