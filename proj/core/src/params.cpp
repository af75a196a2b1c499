#include "beliefcoop/params.hpp"

#include <cmath>
#include <sstream>

#include "beliefcoop/errors.hpp"

namespace beliefcoop {

GameParams validate_params(double b, double m) {
    if (!std::isfinite(b) || !std::isfinite(m)) {
        throw ValidationError("payoff parameters must be finite");
    }
    if (b <= 1.0) {
        std::ostringstream os;
        os << "defection benefit must satisfy b > 1 (got b=" << b << ")";
        throw ValidationError(os.str());
    }
    if (m <= b - 1.0) {
        std::ostringstream os;
        os << "moral cost must satisfy m > b - 1 (got b=" << b << ", m=" << m
           << "; strategic players would never prefer to cooperate with an honest partner)";
        throw ValidationError(os.str());
    }
    return GameParams(b, m);
}

}  // namespace beliefcoop
