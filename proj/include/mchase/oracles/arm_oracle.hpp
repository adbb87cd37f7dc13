#pragma once

#include <Eigen/Dense>
#include <functional>

namespace mchase::oracles {

/// Gains of the robust tracking law for the one-link arm. The disturbance
/// gain grows affinely with the posited disturbance bound:
/// K_omega(w) = k0 + k1 * w.
struct ArmGains {
    double lambda = 2.0;
    double k0 = 5.0;
    double k1 = 2.0;
    double rho_u = 2.0;   // robust-term magnitude
    double eps_u = 0.1;   // boundary-layer width
    bool literal_v = false;  // v = qd_d - lambda*qd variant (no guarantees)
};

/// Twice-differentiable reference trajectory.
struct ArmReference {
    std::function<double(double)> q;
    std::function<double(double)> qd;
    std::function<double(double)> qdd;
};

struct ArmAction {
    double torque = 0.0;
    Eigen::Vector3d robust_term = Eigen::Vector3d::Zero();  // u, norm <= rho_u
    double r = 0.0;  // composite tracking signal
};

/// Robust tracking oracle tau = Y'(eta + u) - K_omega r with the sliding
/// signals r = qtil_dot + lambda qtil, v = qd_d - lambda qtil, a = vdot, and
/// the boundary-layer robust term
///     u = -rho Y''r / ||Y''r||   (||Y''r|| > eps),
///     u = -(rho/eps) Y''r        (otherwise).
class ArmOracle {
public:
    /// theta = [a, b, c, omega]: inertia, velocity and gravity coefficients
    /// plus the posited disturbance bound.
    ArmOracle(Eigen::Vector4d theta, ArmGains gains, ArmReference ref);

    /// state = [q, qd]; qdd_est feeds only the literal-v variant.
    ArmAction act(double t, const Eigen::Vector2d& state, double qdd_est = 0.0) const;

    double k_omega() const { return gains_.k0 + gains_.k1 * theta_[3]; }

private:
    Eigen::Vector4d theta_;
    ArmGains gains_;
    ArmReference ref_;
};

}  // namespace mchase::oracles
