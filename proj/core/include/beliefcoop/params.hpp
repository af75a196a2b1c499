#pragma once

namespace beliefcoop {

/// Payoff primitives: b is the gain from defecting on a cooperating strategic
/// partner, m the moral cost of defecting on an honest one.
///
/// Construct through validate_params(); the invariants b > 1 and m > b - 1
/// hold for every live instance.
class GameParams {
public:
    double b() const noexcept { return b_; }
    double m() const noexcept { return m_; }

    /// 1 + m - b, the net loss from defecting on an honest partner
    /// relative to mutual cooperation. Positive by construction.
    double net_moral_cost() const noexcept { return 1.0 + m_ - b_; }

    /// (b - 1)/m: the belief above which cooperating against a fully
    /// cooperative partner beats defecting.
    double pi_low() const noexcept { return (b_ - 1.0) / m_; }

    friend GameParams validate_params(double b, double m);

private:
    GameParams(double b, double m) : b_(b), m_(m) {}

    double b_;
    double m_;
};

/// Throws ValidationError naming the violated assumption.
GameParams validate_params(double b, double m);

}  // namespace beliefcoop
