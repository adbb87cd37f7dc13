#include "mchase/oracles/cartpole_oracle.hpp"

#include <algorithm>
#include <cmath>

#include "mchase/oracles/lqr.hpp"

namespace mchase::oracles {

using Eigen::Matrix4d;
using Eigen::RowVector4d;
using Eigen::Vector4d;
using Eigen::VectorXd;
using plants::CartPoleParams;

namespace {

constexpr double kDeg30 = M_PI / 6.0;
constexpr double kDeg60 = M_PI / 3.0;

double sgn(double v) { return v >= 0.0 ? 1.0 : -1.0; }  // sign(0) := +1
double clip(double v, double lim) { return std::min(lim, std::max(-lim, v)); }
double wrap_pi(double phi) { return std::remainder(phi, 2.0 * M_PI); }

}  // namespace

const char* branch_name(Branch b) {
    switch (b) {
        case Branch::Lqr: return "lqr";
        case Branch::Swing: return "swing";
        case Branch::BarrierBlend: return "blend";
        case Branch::Safety: return "safety";
    }
    return "?";
}

double cartpole_feedback_linearize(double xdd_d, const VectorXd& state,
                                   const CartPoleParams& p) {
    const double phi = state[1], xd = state[2], phid = state[3];
    const double s = std::sin(phi), c = std::cos(phi);
    return (p.M + p.m * s * s) * xdd_d - p.m * p.g * c * s +
           p.m * p.l * phid * phid * s - p.b_x * xd;
}

double cartpole_energy(double phi, double phid, double l, double g) {
    return (l / (2.0 * g)) * phid * phid + std::cos(phi);
}

double cartpole_swing_accel(const VectorXd& state, const CartPoleParams& p,
                            const CartPoleGains& g) {
    const double phi = state[1], phid = state[3];
    const double e = cartpole_energy(phi, phid, p.l, p.g);
    const double raw = 0.5 * g.swing_gain * std::abs(std::cos(phi)) * (e - 1.0) *
                       sgn(phid * std::cos(phi));
    return -clip(raw, g.a_max);
}

double barrier(double x, double xd, double a_max) {
    return (0.5 / a_max) * xd * std::abs(xd) + x;
}

double safety_policy(const VectorXd& state, const CartPoleGains& g) {
    const double edge = g.d_max - g.eps_safe;
    const double x = state[0], xd = state[2];
    const double err = x - std::min(edge, std::max(-edge, x));
    return clip(-g.safety_kp * err - g.safety_kd * xd, g.force_limit);
}

void CartPoleOracle::upright_linearization(const CartPoleParams& p, Matrix4d& a,
                                           Vector4d& b) {
    // After feedback linearization: xdd = u, l phidd = g phi + b_theta phid + u.
    a.setZero();
    a(0, 2) = 1.0;
    a(1, 3) = 1.0;
    a(3, 1) = p.g / p.l;
    a(3, 3) = p.b_theta / p.l;
    b << 0.0, 0.0, 1.0, 1.0 / p.l;
}

CartPoleOracle::CartPoleOracle(const CartPoleParams& posited, const CartPoleGains& gains)
    : params_(posited), gains_(gains) {
    Matrix4d a;
    Vector4d b;
    upright_linearization(params_, a, b);
    const Eigen::MatrixXd k =
        lqr_gain(a, b, gains_.lqr_q.asDiagonal(), Eigen::MatrixXd::Constant(1, 1, gains_.lqr_r));
    k_lqr_ = k.row(0);
    phidd_max_ = gains_.a_max * params_.g / params_.l * std::sin(kDeg30);
}

OracleAction CartPoleOracle::act(const VectorXd& obs_state) const {
    OracleAction out;
    const double x = obs_state[0], xd = obs_state[2], phid = obs_state[3];
    const double phi = wrap_pi(obs_state[1]);
    const double edge = gains_.d_max - gains_.eps_safe;

    if (!(std::abs(x) < edge)) {
        out.branch = Branch::Safety;
        out.force = safety_policy(obs_state, gains_);
        return out;
    }

    const Vector4d z(x, phi, xd, phid);
    const double u_lqr = -k_lqr_.dot(z);
    const bool lqr_ok = std::abs(phid * phid / phidd_max_) < kDeg60 &&
                        std::cos(kDeg30 / phidd_max_ + phi * sgn(phid)) > std::cos(kDeg30) &&
                        std::abs(u_lqr) <= gains_.a_max;

    double xdd;
    Branch base;
    if (lqr_ok) {
        xdd = u_lqr;
        base = Branch::Lqr;
    } else {
        const double pump = cartpole_swing_accel(obs_state, params_, gains_);
        const double cap = gains_.center_cap * gains_.a_max;
        const double center =
            clip(-gains_.center_kp * x - gains_.center_kd * xd, cap);
        xdd = clip(pump + center, gains_.a_max);
        base = Branch::Swing;
    }

    const double xdd_back = -gains_.a_max * sgn(xd);
    const double b = barrier(x, xd, gains_.a_max);
    const double lambda = std::min(1.0, std::abs(b) / edge);
    const double l2 = lambda * lambda;
    if (b >= 0.0)
        xdd = (1.0 - l2) * xdd + l2 * std::min(xdd, xdd_back);
    else
        xdd = (1.0 - l2) * xdd + l2 * std::max(xdd, xdd_back);

    out.xdd_desired = xdd;
    out.lambda = lambda;
    out.branch = lambda >= 0.05 ? Branch::BarrierBlend : base;
    out.force = clip(cartpole_feedback_linearize(xdd, obs_state, params_), gains_.force_limit);
    return out;
}

}  // namespace mchase::oracles
