#pragma once

#include <cmath>
#include <stdexcept>

namespace mchase::oracles {

/// Deadbeat feedback u = -(theta1/theta2) x for the scalar plant. The
/// parameter box keeps theta2 >= 1, so the ratio never blows up.
inline double deadbeat_control(double theta1, double theta2, double x,
                               double theta2_floor = 1.0) {
    if (theta2 < theta2_floor - 1e-12)
        throw std::invalid_argument("deadbeat_control: theta2 below parameter-space floor");
    return -(theta1 / theta2) * x;
}

/// Mistake-function bound of the deadbeat oracle under rho-noisy parameter
/// observations and |w| <= eta:
///     M(gamma) = log(gamma)/log(1/rho) + c(rho),
///     c(rho) = (log(1-rho) - log(1-rho-eta)) / log(1/rho).
/// Valid for any margin 0 < rho < 1 - eta.
inline double deadbeat_mistake_function(double rho, double eta, double gamma) {
    if (!(rho > 0.0 && rho < 1.0 - eta))
        throw std::invalid_argument("deadbeat_mistake_function: need 0 < rho < 1 - eta");
    if (gamma < 1.0)
        throw std::invalid_argument("deadbeat_mistake_function: gamma >= 1 required");
    const double log_inv_rho = std::log(1.0 / rho);
    const double c = (std::log(1.0 - rho) - std::log(1.0 - rho - eta)) / log_inv_rho;
    return std::log(gamma) / log_inv_rho + c;
}

}  // namespace mchase::oracles
