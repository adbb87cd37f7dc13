#pragma once

#include <Eigen/Dense>

#include "mchase/plants/cartpole.hpp"

namespace mchase::oracles {

/// Tuning of the hybrid swing-up oracle and its safety wrapper.
struct CartPoleGains {
    Eigen::Vector4d lqr_q{9.0, 10.0, 3.0, 1.0};  // weights over [x, phi, xd, phid]
    double lqr_r = 0.5;
    double swing_gain = 90.0;
    double a_max = 0.5 * plants::kGravity;  // acceleration budget
    double d_max = 0.6;                     // cart position limit
    double eps_safe = 0.05;                 // buffer before the safety policy
    double force_limit = 200.0;
    double safety_kp = 400.0;
    double safety_kd = 150.0;
    // Saturated cart-centering correction added to the energy command; keeps
    // the cart from wandering into the barrier while pumping (heavy poles
    // shove the cart hard). Capped at center_cap * a_max.
    double center_kp = 2.0;
    double center_kd = 3.0;
    double center_cap = 0.3;
};

enum class Branch { Lqr, Swing, BarrierBlend, Safety };

const char* branch_name(Branch b);

struct OracleAction {
    double force = 0.0;
    double xdd_desired = 0.0;  // 0 on the safety branch
    Branch branch = Branch::Swing;
    double lambda = 0.0;       // barrier blend weight actually applied
};

/// Partial feedback linearization: the force realizing a desired cart
/// acceleration under the posited parameters.
double cartpole_feedback_linearize(double xdd_d, const Eigen::VectorXd& state,
                                   const plants::CartPoleParams& p);

/// Normalized pole energy (l/2g) phid^2 + cos(phi); 1 upright, -1 hanging.
double cartpole_energy(double phi, double phid, double l, double g = plants::kGravity);

/// Energy-pumping desired acceleration, saturated at a_max.
double cartpole_swing_accel(const Eigen::VectorXd& state, const plants::CartPoleParams& p,
                            const CartPoleGains& g);

/// Barrier value (1/2 a_max) xd |xd| + x; its level set gates the blend
/// toward the braking backup near the position limits.
double barrier(double x, double xd, double a_max);

/// Saturated PD pull back into [-(d_max - eps_safe), +(d_max - eps_safe)].
double safety_policy(const Eigen::VectorXd& state, const CartPoleGains& g);

/// The posited-parameter hybrid oracle: LQR near upright, energy swing-up
/// elsewhere, barrier blending toward a braking action near the position
/// limit, and the safety policy override outside the buffer. The LQR gain is
/// computed once per posited parameter vector at construction.
class CartPoleOracle {
public:
    CartPoleOracle(const plants::CartPoleParams& posited, const CartPoleGains& gains);

    OracleAction act(const Eigen::VectorXd& obs_state) const;

    const Eigen::RowVector4d& lqr_gain_row() const { return k_lqr_; }
    const plants::CartPoleParams& posited() const { return params_; }

    /// Linearization of the post-linearization pole dynamics about upright.
    static void upright_linearization(const plants::CartPoleParams& p,
                                      Eigen::Matrix4d& a, Eigen::Vector4d& b);

private:
    plants::CartPoleParams params_;
    CartPoleGains gains_;
    Eigen::RowVector4d k_lqr_;
    double phidd_max_ = 0.0;
};

}  // namespace mchase::oracles
