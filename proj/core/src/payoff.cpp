#include "beliefcoop/payoff.hpp"

#include <algorithm>
#include <sstream>

#include "beliefcoop/errors.hpp"

namespace beliefcoop {

namespace {

void check_probability(const char* what, double v) {
    if (!(v >= 0.0 && v <= 1.0)) {
        std::ostringstream os;
        os << what << "=" << v << " outside [0, 1]";
        throw ValidationError(os.str());
    }
}

}  // namespace

double clamp_belief(double pi) noexcept { return std::clamp(pi, 0.0, 1.0 - kBeliefEps); }

double payoff_cooperate(double ell, double pi, double p, const GameParams&) {
    check_probability("belief", pi);
    check_probability("partner cooperation probability", p);
    return pi + (1.0 - pi) * p - (1.0 - pi) * (1.0 - p) * ell;
}

double payoff_defect(double pi, double p, const GameParams& params) {
    check_probability("belief", pi);
    check_probability("partner cooperation probability", p);
    return pi * (params.b() - params.m()) + (1.0 - pi) * p * params.b();
}

}  // namespace beliefcoop
