#include "mchase/chase/regressor.hpp"

#include <stdexcept>

namespace mchase::chase {

std::vector<geom::Halfspace> halfspaces_from_observation(const RegressorSpec& spec,
                                                         const DataPoint& d,
                                                         double noise_scale,
                                                         double slack_scale) {
    const Eigen::MatrixXd psi = spec.features(d.x, d.u);
    const Eigen::VectorXd y = spec.target(d.x_next, d.x, d.u);
    if (psi.rows() != spec.n_out || psi.cols() != spec.n_param || y.size() != spec.n_out)
        throw std::invalid_argument("halfspaces_from_observation: dimension mismatch");
    if (static_cast<int>(spec.noise_row_param.size()) != spec.n_out)
        throw std::invalid_argument("halfspaces_from_observation: noise_row_param size");

    Eigen::VectorXd slack = Eigen::VectorXd::Zero(spec.n_out);
    if (spec.row_slack) slack = slack_scale * spec.row_slack(d);

    std::vector<geom::Halfspace> out;
    out.reserve(static_cast<size_t>(2 * spec.n_out));
    for (int i = 0; i < spec.n_out; ++i) {
        Eigen::VectorXd up = psi.row(i).transpose();
        Eigen::VectorXd lo = -up;
        double b_up = y[i] + slack[i];
        double b_lo = -y[i] + slack[i];
        const int j = spec.noise_row_param[static_cast<size_t>(i)];
        if (j >= 0) {
            up[j] -= 1.0;
            lo[j] -= 1.0;
        } else {
            const double eta = noise_scale * spec.fixed_noise[i];
            b_up += eta;
            b_lo += eta;
        }
        if (up.norm() < 1e-14 && lo.norm() < 1e-14) {
            if (b_up >= 0.0 && b_lo >= 0.0) continue;  // 0 <= b: no information
            // 0 <= b < 0: the observation contradicts the declared bound.
            // Emit a canonical empty pair so the update reports inconsistency.
            Eigen::VectorXd e1 = Eigen::VectorXd::Zero(spec.n_param);
            e1[0] = 1.0;
            out.emplace_back(e1, -1.0);
            out.emplace_back(-e1, -1.0);
            continue;
        }
        out.emplace_back(std::move(up), b_up);
        out.emplace_back(std::move(lo), b_lo);
    }
    return out;
}

}  // namespace mchase::chase
