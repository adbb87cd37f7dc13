#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace mchase::plants {

/// One-link arm  a qdd + b qd + c sin(q) = tau + tau_d,  |tau_d| <= omega.
struct ArmParams {
    double a = 1.5;  // inertia, > 0
    double b = 0.3;  // velocity coefficient
    double c = 2.0;  // gravity torque coefficient
};

/// State layout [q, qd].
inline Eigen::VectorXd arm_ode(const Eigen::VectorXd& state, double tau,
                               const ArmParams& p, double tau_d, double omega) {
    if (p.a <= 0.0) throw std::invalid_argument("arm_ode: inertia must be positive");
    if (std::abs(tau_d) > omega * (1.0 + 1e-12))
        throw std::invalid_argument("arm_ode: disturbance out of bound");
    Eigen::VectorXd dx(2);
    dx[0] = state[1];
    dx[1] = (tau + tau_d - p.b * state[1] - p.c * std::sin(state[0])) / p.a;
    return dx;
}

}  // namespace mchase::plants
