#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "mchase/geom/lp.hpp"

namespace mchase::chase {

/// One observed transition (t, x+, x, u).
struct DataPoint {
    long t = 0;
    Eigen::VectorXd x_next;
    Eigen::VectorXd x;
    Eigen::VectorXd u;
};

/// Linear-in-parameters observation model
///     Psi(x, u) * theta  in  [y - eta - s, y + eta + s]   (row-wise)
/// where eta is the disturbance bound (either a known constant per row, or a
/// coordinate of theta itself) and s is an optional extra widening used to
/// absorb measurement-error propagation.
struct RegressorSpec {
    int n_out = 0;
    int n_param = 0;

    /// Psi(x, u): n_out x n_param basis matrix. Columns belonging to
    /// disturbance-bound coordinates must be zero.
    std::function<Eigen::MatrixXd(const Eigen::VectorXd&, const Eigen::VectorXd&)> features;

    /// y(x+, x, u): n_out targets.
    std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::VectorXd&,
                                  const Eigen::VectorXd&)> target;

    /// Per row: theta index of the disturbance-bound coordinate, or -1 when
    /// the bound is known and fixed_noise[row] applies.
    std::vector<int> noise_row_param;
    Eigen::VectorXd fixed_noise;

    /// Optional per-row widening from measurement noise; may be empty.
    std::function<Eigen::VectorXd(const DataPoint&)> row_slack;
};

/// The 2*n_out halfspaces a single observation induces on theta, exactly as
/// the observation model reads (no rescaling).
std::vector<geom::Halfspace> halfspaces_from_observation(const RegressorSpec& spec,
                                                         const DataPoint& d,
                                                         double noise_scale = 1.0,
                                                         double slack_scale = 1.0);

}  // namespace mchase::chase
