#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "mchase/chase/regressor.hpp"
#include "mchase/geom/box.hpp"

namespace mchase::plants {

inline constexpr double kGravity = 9.81;

/// Physical cart-pole parameters. Angle phi is measured from the upright
/// position; phi = pi is hanging down.
struct CartPoleParams {
    double M = 1.0;        // cart mass
    double m = 0.1;        // pole mass
    double l = 0.5;        // pole length
    double b_x = 0.0;      // cart velocity coefficient
    double b_theta = 0.0;  // pole velocity coefficient
    double g = kGravity;
};

/// State layout [x, phi, xdot, phidot].
/// Solves the coupled pair
///     (M+m) xdd - m l (phidd cos - phid^2 sin) - b_x xd = F + w_x
///     l phidd - g sin(phi) - b_theta phid = xdd cos(phi) + w_th
/// for (xdd, phidd) through the 2x2 mass matrix; the determinant
/// l (M + m sin^2 phi) stays positive for any m, l > 0.
Eigen::VectorXd cartpole_ode(const Eigen::VectorXd& state, double force,
                             const CartPoleParams& p, double w_x = 0.0,
                             double w_th = 0.0);

/// Lumped parameter vector [M+m, m*l, b_x, l, b_theta, tau_dx, tau_dth].
Eigen::VectorXd lumped_params(const CartPoleParams& p, double tau_dx, double tau_dth);

/// Physical parameters implied by a lumped vector, clamped to the admissible
/// ranges (the selection may sit slightly off the consistent manifold).
CartPoleParams unlump_params(const Eigen::VectorXd& lumped);

/// Uncertainty box over the lumped parameters (mass/length/friction ranges
/// plus the admissible disturbance-bound range).
geom::Box lumped_uncertainty_box(double tau_dx_max, double tau_dth_max);

/// One measured sample: noisy positions plus finite-difference velocities.
struct CartPoleMeasurement {
    double x = 0.0;        // noisy cart position
    double phi = 0.0;      // noisy pole angle
    double vx = 0.0;       // (x_t - x_{t-1}) / Ts
    double vphi = 0.0;
    double force = 0.0;    // input held over [t, t+1)
};

struct CartPoleRegressorConfig {
    double ts = 0.02;
    std::vector<int> windows = {5, 25};  // averaging windows, in samples
    double noise_pos = 0.0;              // position noise amplitude
    double noise_ang = 0.0;              // angle noise amplitude
    double disc_floor = 0.1;             // discretization slack, x Ts x row scale
    double g = kGravity;
};

/// Window-averaged observation rows for the lumped parameters. Integrating
/// both equations of motion over [t-h-1/2, t-1/2] (sample midpoints) turns
/// them into exact identities in endpoint velocities, endpoint positions and
/// the window-mean force; only the m-dd-cos pole coupling needs an interior
/// quadrature. The packed DataPoint carries precomputed feature coefficients,
/// targets and sound per-row slack so the RegressorSpec can stay a plain
/// unpacker:
///     x = [f11, f12, f13, f24, f25, y1, y2, s1, s2], u = [mean force].
std::optional<chase::DataPoint> cartpole_window_row(
    const std::vector<CartPoleMeasurement>& history, int t, int window,
    const CartPoleRegressorConfig& cfg, const geom::Box& param_box);

/// RegressorSpec over the 7 lumped parameters with the disturbance bounds as
/// coordinates 5 and 6.
chase::RegressorSpec cartpole_regressor_spec();

}  // namespace mchase::plants
