#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>
#include <cmath>

#include "helpers.hpp"
#include "mchase/oracles/arm_oracle.hpp"
#include "mchase/oracles/cartpole_oracle.hpp"
#include "mchase/oracles/deadbeat.hpp"
#include "mchase/oracles/lqr.hpp"
#include "mchase/plants/cartpole.hpp"
#include "mchase/plants/rk4.hpp"

using namespace mchase;
using namespace mchase::oracles;
using Eigen::Matrix4d;
using Eigen::MatrixXd;
using Eigen::Vector2d;
using Eigen::Vector4d;
using Eigen::VectorXd;
using plants::CartPoleParams;
using testutil::Rng;

namespace {

VectorXd state4(double x, double phi, double xd, double phid) {
    return Vector4d(x, phi, xd, phid);
}

const double kE = std::exp(1.0);

}  // namespace

TEST_CASE("deadbeat control: formula, zero numerator, deadbeat property") {
    CHECK(deadbeat_control(1.0, 1.0, 2.0) == doctest::Approx(-2.0));
    CHECK(deadbeat_control(0.0, 1.7, 123.0) == doctest::Approx(0.0));
    const double u = deadbeat_control(0.8, 1.3, 5.0);
    CHECK(0.8 * 5.0 + 1.3 * u == doctest::Approx(0.0));  // x1 = 0, exact model
    CHECK_THROWS(deadbeat_control(1.0, 0.5, 1.0));
}

TEST_CASE("deadbeat mistake function: paper substitution and direct values") {
    const double rho = 1.0 / kE, eta = 1.0 / kE;
    // gamma = 1 leaves only c(rho) = log((e-1)/(e-2)).
    CHECK(deadbeat_mistake_function(rho, eta, 1.0) ==
          doctest::Approx(std::log((kE - 1.0) / (kE - 2.0))).epsilon(1e-12));

    // At gamma_inf = e^phi / (e-1) the bound collapses to phi - log(e-2).
    for (double phi : {2.0, 6.0, 11.0}) {
        const double gamma_inf = std::exp(phi) / (kE - 1.0);
        CHECK(deadbeat_mistake_function(rho, eta, gamma_inf) ==
              doctest::Approx(phi - std::log(kE - 2.0)).epsilon(1e-12));
    }

    CHECK(deadbeat_mistake_function(0.5, 0.25, kE) ==
          doctest::Approx(1.0 / std::log(2.0) + 1.0).epsilon(1e-12));
    CHECK_THROWS(deadbeat_mistake_function(0.8, 0.3, 1.0));  // rho >= 1 - eta
    CHECK_THROWS(deadbeat_mistake_function(0.0, 0.3, 1.0));
}

TEST_CASE("deadbeat one-step contraction under the weighted metric") {
    Rng rng(13);
    const double a = 2.0, eta = 1.0 / kE, rho = 1.0 / kE;
    for (int i = 0; i < 500; ++i) {
        const double th1 = rng.uniform(-a, a), th2 = rng.uniform(1.0, 3.0);
        // posited parameters within metric distance rho of the truth
        double p1, p2;
        do {
            p1 = th1 + rng.uniform(-rho, rho);
            p2 = th2 + rng.uniform(-rho / a, rho / a);
        } while (std::abs(p1 - th1) + a * std::abs(p2 - th2) > rho || p2 < 1.0 ||
                 std::abs(p1) > a || p2 > 3.0);
        const double x = rng.uniform(-8.0, 8.0);
        const double w = rng.uniform(-eta, eta);
        const double xn = th1 * x + th2 * deadbeat_control(p1, p2, x) + w;
        CHECK(std::abs(xn) <= rho * std::abs(x) + eta + 1e-12);
    }
}

TEST_CASE("lqr_gain: scalar closed forms") {
    const MatrixXd one = MatrixXd::Constant(1, 1, 1.0);
    MatrixXd k = lqr_gain(MatrixXd::Zero(1, 1), one, one, one);
    CHECK(k(0, 0) == doctest::Approx(1.0).epsilon(1e-9));

    k = lqr_gain(one, one, one, one);
    CHECK(k(0, 0) == doctest::Approx(1.0 + std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("lqr_gain: stable closed loop over the whole test grid") {
    const CartPoleGains g;
    for (double l : {0.1, 0.2, 0.4, 0.6, 1.0})
        for (double bth : {0.0, 1.0, 2.0}) {
            CartPoleParams p;
            p.l = l;
            p.b_theta = bth;
            Matrix4d a;
            Vector4d b;
            CartPoleOracle::upright_linearization(p, a, b);
            const MatrixXd k = lqr_gain(a, b, g.lqr_q.asDiagonal(),
                                        MatrixXd::Constant(1, 1, g.lqr_r));
            CHECK(spectral_abscissa(a - b * k) < -1e-6);
        }
}

TEST_CASE("feedback linearization: closed forms") {
    CartPoleParams p;  // M=1, m=0.1, l=0.5, b=0
    CHECK(cartpole_feedback_linearize(1.0, state4(0, 0, 0, 0), p) == doctest::Approx(1.0));
    CHECK(cartpole_feedback_linearize(0.0, state4(0, M_PI / 2, 0, 0), p) ==
          doctest::Approx(0.0));
    CHECK(cartpole_feedback_linearize(0.0, state4(0, M_PI / 4, 0, 1), p) ==
          doctest::Approx(-0.1 * 9.81 * 0.5 + 0.1 * 0.5 * std::sqrt(0.5)).epsilon(1e-12));
}

TEST_CASE("feedback linearization inverts the plant acceleration") {
    Rng rng(21);
    for (int i = 0; i < 100; ++i) {
        CartPoleParams p;
        p.M = rng.uniform(0.1, 5.0);
        p.m = rng.uniform(0.1, 1.0);
        p.l = rng.uniform(0.05, 1.0);
        p.b_x = rng.uniform(0.0, 20.0);
        const VectorXd st = state4(rng.uniform(-0.5, 0.5), rng.uniform(-4, 4),
                                   rng.uniform(-2, 2), rng.uniform(-6, 6));
        const double xdd_d = rng.uniform(-4.9, 4.9);
        const double f = cartpole_feedback_linearize(xdd_d, st, p);
        const VectorXd dx = plants::cartpole_ode(st, f, p);
        CHECK(dx[2] == doctest::Approx(xdd_d).epsilon(1e-9));  // b_theta = 0 case
    }
}

TEST_CASE("cartpole energy: closed forms") {
    CHECK(cartpole_energy(0, 0, 0.5) == doctest::Approx(1.0));
    CHECK(cartpole_energy(M_PI, 0, 0.5) == doctest::Approx(-1.0));
    CHECK(cartpole_energy(M_PI / 2, 2.0, 0.4905) == doctest::Approx(0.1));
}

TEST_CASE("swing acceleration: rest, saturation sign, small-error value") {
    CartPoleParams p;
    CartPoleGains g;

    CHECK(cartpole_swing_accel(state4(0, 0, 0, 0), p, g) == doctest::Approx(0.0));

    CartPoleGains big = g;
    big.swing_gain = 1000.0;
    // Hanging with low energy: the inner term saturates with sign -sign(-phid).
    CHECK(cartpole_swing_accel(state4(0, M_PI, 0, 1.0), p, big) ==
          doctest::Approx(-big.a_max));
    CHECK(cartpole_swing_accel(state4(0, M_PI, 0, -1.0), p, big) ==
          doctest::Approx(big.a_max));

    // E = 1.2 at phi = 0, phid = 1 requires l = 0.4 g.
    CartPoleParams lp = p;
    lp.l = 0.4 * 9.81;
    CartPoleGains g2 = g;
    g2.swing_gain = 2.0;
    CHECK(cartpole_swing_accel(state4(0, 0, 0, 1.0), lp, g2) == doctest::Approx(-0.2));
}

TEST_CASE("barrier: closed forms") {
    CHECK(barrier(0, 0, 4.905) == doctest::Approx(0.0));
    CHECK(barrier(0.3, 0, 1.0) == doctest::Approx(0.3));
    CHECK(barrier(0.0, 1.0, 2.0) == doctest::Approx(0.25));
}

TEST_CASE("safety policy: sign, equilibrium, PD value, Lyapunov decrease") {
    CartPoleGains g;
    CHECK(safety_policy(state4(0.6, 0, 0, 0), g) < 0.0);
    CHECK(safety_policy(state4(0, 0, 0, 0), g) == doctest::Approx(0.0));
    CartPoleGains soft = g;  // PD value check at reference gains
    soft.safety_kp = 50.0;
    soft.safety_kd = 20.0;
    CHECK(safety_policy(state4(0.62, 0, 0.1, 0), soft) == doctest::Approx(-5.5));

    // dV/dt for V = xd^2/2 + (kp/M) err^2/2 under M xdd = F, checked on a grid.
    for (double M : {0.1, 5.0})
        for (double x = 0.56; x <= 0.85; x += 0.02)
            for (double xd = -3.0; xd <= 3.0; xd += 0.25)
                for (double sx : {1.0, -1.0}) {
                    const VectorXd st = state4(sx * x, 0, sx * xd, 0);
                    const double f = safety_policy(st, g);
                    const double err = st[0] - std::clamp(st[0], -0.55, 0.55);
                    const double vdot = st[2] * (f / M) + (g.safety_kp / M) * err * st[2];
                    if (std::abs(st[2]) > 1e-9)
                        CHECK(vdot < 0.0);
                    else
                        CHECK(vdot <= 1e-12);
                }
}

TEST_CASE("oracle branches: upright lqr, safety override, hanging kick") {
    CartPoleParams p;
    CartPoleGains g;
    const CartPoleOracle orc(p, g);

    auto up = orc.act(state4(0, 0, 0, 0));
    CHECK(up.branch == Branch::Lqr);
    CHECK(std::abs(up.force) < 1e-9);

    auto safe = orc.act(state4(0.6 - 0.025, 0, 0, 0));
    CHECK(safe.branch == Branch::Safety);

    auto kick = orc.act(state4(0, M_PI, 0, 0));
    CHECK(kick.branch == Branch::Swing);
    CHECK(kick.lambda == doctest::Approx(0.0));
    CHECK(kick.xdd_desired ==
          doctest::Approx(std::min(0.5 * g.swing_gain * 2.0, g.a_max)));
    CHECK(kick.force == doctest::Approx(p.M * kick.xdd_desired));

    CartPoleGains soft = g;
    soft.swing_gain = 1.2;  // below saturation: value check of the swing law
    const CartPoleOracle meek(p, soft);
    auto nudge = meek.act(state4(0, M_PI, 0, 0));
    CHECK(nudge.xdd_desired == doctest::Approx(0.5 * 1.2 * 2.0));
}

TEST_CASE("oracle output: force and acceleration budgets on a dense grid") {
    CartPoleParams p;
    p.M = 0.1;  // lightest cart stresses the force path least; check both ends
    CartPoleGains g;
    const CartPoleOracle light(p, g);
    CartPoleParams ph;
    ph.M = 5.0;
    ph.m = 1.0;
    ph.l = 0.05;
    ph.b_x = 20.0;
    const CartPoleOracle heavy(ph, g);

    for (double x = -0.7; x <= 0.7; x += 0.07)
        for (double phi = -3.4; phi <= 3.4; phi += 0.2)
            for (double xd = -2.5; xd <= 2.5; xd += 0.5)
                for (double phid = -8.0; phid <= 8.0; phid += 1.6)
                    for (const auto* orc : {&light, &heavy}) {
                        const auto a = orc->act(state4(x, phi, xd, phid));
                        CHECK(std::abs(a.force) <= g.force_limit + 1e-9);
                        CHECK(std::abs(a.xdd_desired) <= g.a_max + 1e-9);
                    }
}

TEST_CASE("barrier blend: continuous across the B = 0 switch") {
    CartPoleParams p;
    CartPoleGains g;
    const CartPoleOracle orc(p, g);
    // Sweep xd through the B = 0 root at several positions in swing regime.
    for (double x : {0.1, 0.25, 0.4}) {
        const double xd_root = -std::sqrt(2.0 * g.a_max * x);  // B(x, xd_root) = 0
        const auto lo = orc.act(state4(x, M_PI, xd_root - 1e-9, 0.5));
        const auto hi = orc.act(state4(x, M_PI, xd_root + 1e-9, 0.5));
        CHECK(std::abs(lo.force - hi.force) < 1e-6);
    }
}

TEST_CASE("lqr branch recovers from small perturbations with a posited model") {
    // Local robustness: a small parameter ball around the truth still returns
    // a neighborhood of upright into the target set.
    CartPoleParams truth;  // M=1, m=0.1, l=0.5
    CartPoleParams posited = truth;
    posited.l = 0.515;
    posited.M = 1.03;
    posited.m = 0.103;
    CartPoleGains g;
    const CartPoleOracle orc(posited, g);

    VectorXd st = state4(0.05, 0.1, 0.0, 0.0);
    bool settled = false;
    for (int t = 0; t < 1500 && !settled; ++t) {
        const auto a = orc.act(st);
        auto ode = [&](const VectorXd& s) { return plants::cartpole_ode(s, a.force, truth); };
        st = plants::rk4_zoh_step(ode, st, 0.02, 10);
        settled = std::abs(st[0]) < 0.05 && std::abs(std::remainder(st[1], 2 * M_PI)) < 0.05 &&
                  std::abs(st[2]) < 0.2 && std::abs(st[3]) < 0.2;
        CHECK(std::abs(st[0]) <= 0.6);  // never trips the safety limit
    }
    CHECK(settled);
}

TEST_CASE("arm oracle: feedforward-only at zero error, PD decomposition") {
    ArmGains g;
    g.lambda = 2.0;
    g.k0 = 5.0;
    g.k1 = 0.0;
    ArmReference ref{[](double) { return 0.0; }, [](double) { return 0.0; },
                     [](double) { return 0.0; }};
    const ArmOracle orc(Eigen::Vector4d(1.5, 0.3, 2.0, 0.0), g, ref);

    const auto at_rest = orc.act(0.0, Vector2d(0.0, 0.0));
    CHECK(at_rest.r == doctest::Approx(0.0));
    CHECK(at_rest.robust_term.norm() == doctest::Approx(0.0));
    CHECK(at_rest.torque == doctest::Approx(0.0));

    // qtil = 0.1, qtil_dot = 0 -> r = 0.2 and the -K r term contributes -1.0.
    const auto off = orc.act(0.0, Vector2d(0.1, 0.0));
    CHECK(off.r == doctest::Approx(0.2));
    const double feed = Eigen::Vector3d(-g.lambda * 0.0, -g.lambda * 0.1, std::sin(0.1))
                            .dot(Eigen::Vector3d(1.5, 0.3, 2.0));
    CHECK(off.torque - (feed + off.robust_term.dot(Eigen::Vector3d(0.0, -0.2, std::sin(0.1))))
          == doctest::Approx(-5.0 * 0.2).epsilon(1e-9));
}

TEST_CASE("arm oracle: robust term is rho-bounded and continuous at the layer") {
    ArmGains g;
    ArmReference ref{[](double t) { return std::sin(t); }, [](double t) { return std::cos(t); },
                     [](double t) { return -std::sin(t); }};
    const ArmOracle orc(Eigen::Vector4d(1.5, 0.3, 2.0, 0.2), g, ref);
    Rng rng(55);
    for (int i = 0; i < 300; ++i) {
        const auto a = orc.act(rng.uniform(0, 6), Vector2d(rng.uniform(-2, 2), rng.uniform(-3, 3)));
        CHECK(a.robust_term.norm() <= g.rho_u + 1e-12);
    }
    // Both branches agree when ||Y'r|| = eps: scan for near-boundary states.
    ArmGains tight = g;
    tight.eps_u = 0.5;
    const ArmOracle o2(Eigen::Vector4d(1.5, 0.3, 2.0, 0.2), tight, ref);
    for (double dq = 0.001; dq < 1.0; dq *= 1.6) {
        const auto lo = o2.act(0.0, Vector2d(dq - 1e-10, 0.0));
        const auto hi = o2.act(0.0, Vector2d(dq + 1e-10, 0.0));
        CHECK(std::abs(lo.torque - hi.torque) < 1e-5);
    }
    CHECK(o2.k_omega() == doctest::Approx(5.0 + 2.0 * 0.2));
}
