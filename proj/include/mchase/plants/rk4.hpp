#pragma once

#include <Eigen/Dense>

namespace mchase::plants {

/// Classical fixed-step RK4 over one sampling interval with the input held
/// constant (zero-order hold). substeps >= 10 keeps the integration error an
/// order below the sampling grid.
template <typename Ode>
Eigen::VectorXd rk4_zoh_step(const Ode& ode, const Eigen::VectorXd& state,
                             double ts, int substeps) {
    const double h = ts / substeps;
    Eigen::VectorXd x = state;
    for (int s = 0; s < substeps; ++s) {
        const Eigen::VectorXd k1 = ode(x);
        const Eigen::VectorXd k2 = ode(x + 0.5 * h * k1);
        const Eigen::VectorXd k3 = ode(x + 0.5 * h * k2);
        const Eigen::VectorXd k4 = ode(x + h * k3);
        x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return x;
}

}  // namespace mchase::plants
