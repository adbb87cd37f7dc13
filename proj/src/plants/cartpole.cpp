#include "mchase/plants/cartpole.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace mchase::plants {

using Eigen::VectorXd;

VectorXd cartpole_ode(const VectorXd& state, double force, const CartPoleParams& p,
                      double w_x, double w_th) {
    const double phi = state[1];
    const double xd = state[2];
    const double phid = state[3];
    const double s = std::sin(phi);
    const double c = std::cos(phi);

    // [M+m, -m l c; -c, l] [xdd; phidd] = [r1; r2]
    const double r1 = force + w_x - p.m * p.l * phid * phid * s + p.b_x * xd;
    const double r2 = p.g * s + p.b_theta * phid + w_th;
    const double det = p.l * (p.M + p.m * s * s);
    assert(det > 0.0);

    VectorXd dx(4);
    dx[0] = xd;
    dx[1] = phid;
    dx[2] = (p.l * r1 + p.m * p.l * c * r2) / det;
    dx[3] = (c * r1 + (p.M + p.m) * r2) / det;
    return dx;
}

VectorXd lumped_params(const CartPoleParams& p, double tau_dx, double tau_dth) {
    VectorXd v(7);
    v << p.M + p.m, p.m * p.l, p.b_x, p.l, p.b_theta, tau_dx, tau_dth;
    return v;
}

CartPoleParams unlump_params(const VectorXd& lumped) {
    auto clamp = [](double v, double lo, double hi) { return std::min(hi, std::max(lo, v)); };
    CartPoleParams p;
    p.l = clamp(lumped[3], 0.05, 1.0);
    p.m = clamp(lumped[1] / p.l, 0.1, 1.0);
    p.M = clamp(lumped[0] - p.m, 0.1, 5.0);
    p.b_x = clamp(lumped[2], 0.0, 20.0);
    p.b_theta = clamp(lumped[4], 0.0, 2.0);
    return p;
}

geom::Box lumped_uncertainty_box(double tau_dx_max, double tau_dth_max) {
    VectorXd lo(7), hi(7);
    lo << 0.1 + 0.1, 0.1 * 0.05, 0.0, 0.05, 0.0, 0.0, 0.0;
    hi << 5.0 + 1.0, 1.0 * 1.0, 20.0, 1.0, 2.0, tau_dx_max, tau_dth_max;
    return geom::Box(lo, hi);
}

std::optional<chase::DataPoint> cartpole_window_row(
    const std::vector<CartPoleMeasurement>& history, int t, int window,
    const CartPoleRegressorConfig& cfg, const geom::Box& param_box) {
    const int h = window;
    const int a = t - h;
    if (a < 1 || t >= static_cast<int>(history.size())) return std::nullopt;

    const double ts = cfg.ts;
    const double L = h * ts;
    auto mid_pos = [&](int j) { return 0.5 * (history[j].x + history[j - 1].x); };
    auto mid_ang = [&](int j) { return 0.5 * (history[j].phi + history[j - 1].phi); };

    const auto& A = history[a];
    const auto& B = history[t];
    const double cos_a = std::cos(mid_ang(a)), cos_b = std::cos(mid_ang(t));

    // Mean force over [a - 1/2, t - 1/2]: halves of the boundary holds plus
    // the full interior holds.
    double fbar = 0.5 * history[a - 1].force + 0.5 * history[t - 1].force;
    for (int j = a; j <= t - 2; ++j) fbar += history[j].force;
    fbar /= h;

    // Row 1: p1 dvx - p2 d(vphi cos) - p3 dx = mean F + mean w_x.
    const double f11 = (B.vx - A.vx) / L;
    const double f12 = -(B.vphi * cos_b - A.vphi * cos_a) / L;
    const double f13 = -(mid_pos(t) - mid_pos(a)) / L;
    const double y1 = fbar;

    // Row 2: p4 dvphi - p5 dphi = [vx cos] + integral(g sin + vx vphi sin).
    const double f24 = (B.vphi - A.vphi) / L;
    const double f25 = -(mid_ang(t) - mid_ang(a)) / L;
    auto gq = [&](int j) {
        const double sj = std::sin(mid_ang(j));
        return cfg.g * sj + history[j].vx * history[j].vphi * sj;
    };
    double quad = 0.5 * (gq(a) + gq(t));
    for (int j = a + 1; j <= t - 1; ++j) quad += gq(j);
    const double y2 = (B.vx * cos_b - A.vx * cos_a) / L + quad / h;

    // Sound propagation of the position/angle noise amplitudes through every
    // measured quantity in the row (velocities are single differences, so the
    // amplification is 2 n / Ts), plus a discretization floor proportional to
    // the row's own scale.
    const double nx = cfg.noise_pos, np = cfg.noise_ang;
    const double dvx = 2.0 * nx / ts, dvp = 2.0 * np / ts;
    const double p1u = param_box.upper[0], p2u = param_box.upper[1], p3u = param_box.upper[2];
    const double p4u = param_box.upper[3], p5u = param_box.upper[4];

    double vx_max = 0.0, vp_max = 0.0;
    for (int j = a; j <= t; ++j) {
        vx_max = std::max(vx_max, std::abs(history[j].vx));
        vp_max = std::max(vp_max, std::abs(history[j].vphi));
    }

    const double d_vphicos = dvp + (vp_max + dvp) * np;
    double s1 = (p1u * 2.0 * dvx + p2u * 2.0 * d_vphicos + p3u * 2.0 * nx) / L;

    const double d_vxcos = dvx + (vx_max + dvx) * np;
    const double d_gq = cfg.g * np + dvx * (vp_max + dvp) + (vx_max + dvx) * dvp +
                        (vx_max + dvx) * (vp_max + dvp) * np;
    double s2 = (p4u * 2.0 * dvp + p5u * 2.0 * np) / L + 2.0 * d_vxcos / L + d_gq;

    const double scale1 = p1u * std::abs(f11) + p2u * std::abs(f12) + p3u * std::abs(f13) +
                          std::abs(y1) + cfg.g;
    const double scale2 = p4u * std::abs(f24) + p5u * std::abs(f25) + std::abs(y2) + cfg.g;
    s1 += cfg.disc_floor * ts * scale1;
    s2 += cfg.disc_floor * ts * scale2;

    chase::DataPoint d;
    d.t = t;
    d.u = VectorXd::Constant(1, fbar);
    d.x.resize(9);
    d.x << f11, f12, f13, f24, f25, y1, y2, s1, s2;
    d.x_next = VectorXd();
    return d;
}

chase::RegressorSpec cartpole_regressor_spec() {
    chase::RegressorSpec s;
    s.n_out = 2;
    s.n_param = 7;
    s.features = [](const VectorXd& x, const VectorXd&) {
        Eigen::MatrixXd psi = Eigen::MatrixXd::Zero(2, 7);
        psi(0, 0) = x[0];
        psi(0, 1) = x[1];
        psi(0, 2) = x[2];
        psi(1, 3) = x[3];
        psi(1, 4) = x[4];
        return psi;
    };
    s.target = [](const VectorXd&, const VectorXd& x, const VectorXd&) {
        return Eigen::Vector2d(x[5], x[6]);
    };
    s.noise_row_param = {5, 6};
    s.fixed_noise = Eigen::Vector2d::Zero();
    s.row_slack = [](const chase::DataPoint& d) { return Eigen::Vector2d(d.x[7], d.x[8]); };
    return s;
}

}  // namespace mchase::plants
