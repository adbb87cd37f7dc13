#pragma once

#include <Eigen/Dense>

namespace mchase::oracles {

/// Stabilizing solution of A'P + PA - PBR^-1B'P + Q = 0 by Newton-Kleinman
/// iteration seeded from a pole-placed gain (Ackermann, single input).
/// Convergence tolerance 1e-10 on the iterates. Throws when the iteration
/// fails to stabilize or converge.
Eigen::MatrixXd care_solve(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                           const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R);

/// Continuous-time LQR gain K = R^-1 B' P. Verifies the closed loop A - BK
/// numerically (spectral abscissa < 0) before returning.
Eigen::MatrixXd lqr_gain(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                         const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R);

/// Single-input pole placement via Ackermann's formula.
Eigen::RowVectorXd ackermann_gain(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                  const Eigen::VectorXd& poles);

/// max Re(eig(M)).
double spectral_abscissa(const Eigen::MatrixXd& m);

}  // namespace mchase::oracles
