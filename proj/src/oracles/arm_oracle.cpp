#include "mchase/oracles/arm_oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace mchase::oracles {

using Eigen::Vector2d;
using Eigen::Vector3d;
using Eigen::Vector4d;

ArmOracle::ArmOracle(Vector4d theta, ArmGains gains, ArmReference ref)
    : theta_(std::move(theta)), gains_(std::move(gains)), ref_(std::move(ref)) {
    if (!(gains_.lambda > 0.0) || !(gains_.k0 > 0.0))
        throw std::invalid_argument("ArmOracle: gains must be positive");
}

ArmAction ArmOracle::act(double t, const Vector2d& state, double qdd_est) const {
    const double q = state[0], qd = state[1];
    const double q_d = ref_.q(t), qd_d = ref_.qd(t), qdd_d = ref_.qdd(t);
    const double qtil = q - q_d;
    const double qtil_d = qd - qd_d;
    const double lam = gains_.lambda;

    const double r = qtil_d + lam * qtil;
    double v, a;
    if (gains_.literal_v) {
        v = qd_d - lam * qd;
        a = qdd_d - lam * qdd_est;
    } else {
        v = qd_d - lam * qtil;
        a = qdd_d - lam * qtil_d;
    }

    const Vector3d y(a, v, std::sin(q));  // M a + C v + N = Y' [a_p; b; c]
    const Vector3d yr = y * r;            // Y''r for a single link
    const double nrm = yr.norm();
    Vector3d u;
    if (nrm > gains_.eps_u)
        u = -gains_.rho_u * yr / nrm;
    else
        u = -(gains_.rho_u / gains_.eps_u) * yr;

    ArmAction out;
    out.robust_term = u;
    out.r = r;
    out.torque = y.dot(theta_.head<3>() + u) - k_omega() * r;
    return out;
}

}  // namespace mchase::oracles
