#include "mchase/oracles/lqr.hpp"

#include <Eigen/Eigenvalues>
#include <stdexcept>

namespace mchase::oracles {

using Eigen::MatrixXd;
using Eigen::RowVectorXd;
using Eigen::VectorXd;

double spectral_abscissa(const MatrixXd& m) {
    return Eigen::EigenSolver<MatrixXd>(m, false).eigenvalues().real().maxCoeff();
}

RowVectorXd ackermann_gain(const MatrixXd& A, const VectorXd& b, const VectorXd& poles) {
    const int n = static_cast<int>(A.rows());
    if (poles.size() != n) throw std::invalid_argument("ackermann_gain: need n poles");

    MatrixXd ctrb(n, n);
    VectorXd col = b;
    for (int i = 0; i < n; ++i) {
        ctrb.col(i) = col;
        col = A * col;
    }
    // chi(A) for chi(s) = prod (s - p_i)
    MatrixXd chi = MatrixXd::Identity(n, n);
    for (int i = 0; i < n; ++i) chi = chi * (A - poles[i] * MatrixXd::Identity(n, n));

    const Eigen::FullPivLU<MatrixXd> lu(ctrb);
    if (!lu.isInvertible())
        throw std::runtime_error("ackermann_gain: pair (A, b) is not controllable");
    RowVectorXd e_n = RowVectorXd::Zero(n);
    e_n[n - 1] = 1.0;
    return e_n * lu.solve(chi);
}

namespace {

// A' X + X A = -W via the Kronecker system (n <= ~6 here).
// vec(A'X) = (I kron A') vec(X), vec(XA) = (A' kron I) vec(X), column-major.
MatrixXd lyapunov_solve(const MatrixXd& A, const MatrixXd& W) {
    const int n = static_cast<int>(A.rows());
    const MatrixXd At = A.transpose();
    MatrixXd K = MatrixXd::Zero(n * n, n * n);
    for (int j = 0; j < n; ++j) K.block(j * n, j * n, n, n) = At;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int r = 0; r < n; ++r) K(j * n + r, i * n + r) += At(j, i);

    const VectorXd rhs = Eigen::Map<const VectorXd>(W.data(), n * n);
    const VectorXd x = K.fullPivLu().solve(-rhs);
    return Eigen::Map<const MatrixXd>(x.data(), n, n);
}

}  // namespace

MatrixXd care_solve(const MatrixXd& A, const MatrixXd& B, const MatrixXd& Q,
                    const MatrixXd& R) {
    const int n = static_cast<int>(A.rows());
    if (B.cols() != 1)
        throw std::invalid_argument("care_solve: single-input systems only");

    // Pole-placed stabilizing seed, spread left of the open-loop spectrum.
    const double shift = std::max(1.0, 1.5 * std::abs(spectral_abscissa(A)));
    VectorXd poles(n);
    for (int i = 0; i < n; ++i) poles[i] = -shift * (1.0 + 0.5 * i);
    MatrixXd K = ackermann_gain(A, B.col(0), poles);

    const MatrixXd Rinv = R.inverse();
    MatrixXd P_prev = MatrixXd::Zero(n, n);
    for (int it = 0; it < 200; ++it) {
        const MatrixXd Acl = A - B * K;
        if (spectral_abscissa(Acl) >= 0.0)
            throw std::runtime_error("care_solve: iterate lost stability");
        const MatrixXd W = Q + K.transpose() * R * K;
        const MatrixXd P = lyapunov_solve(Acl, W);
        K = Rinv * B.transpose() * P;
        if (it > 0 && (P - P_prev).norm() <= 1e-10 * std::max(1.0, P.norm()))
            return 0.5 * (P + P.transpose());
        P_prev = P;
    }
    throw std::runtime_error("care_solve: Newton-Kleinman did not converge");
}

MatrixXd lqr_gain(const MatrixXd& A, const MatrixXd& B, const MatrixXd& Q,
                  const MatrixXd& R) {
    const MatrixXd P = care_solve(A, B, Q, R);
    const MatrixXd K = R.inverse() * B.transpose() * P;
    if (spectral_abscissa(A - B * K) >= -1e-9)
        throw std::runtime_error("lqr_gain: closed loop not stable");
    return K;
}

}  // namespace mchase::oracles
