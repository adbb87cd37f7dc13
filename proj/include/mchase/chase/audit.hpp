#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <vector>

#include "mchase/geom/metric.hpp"

namespace mchase::chase {

/// Per-step snapshot of a chase: the selected parameter plus the region's
/// support values over the shared direction set (steps with an unchanged
/// region share the same vector).
struct ChaseStep {
    Eigen::VectorXd theta;
    std::shared_ptr<const Eigen::VectorXd> supports;
};

/// Empirical check of the chasing properties:
///   (A) cumulative movement settles (terminal-quarter movement),
///   (B) per-step movement tends to zero (tail average),
///   (C) worst path / d_H ratio over intervals,
///   (D) the same restricted to windows of length at most T.
/// d_H comes from the directional estimator, a lower bound, so the reported
/// ratios are upper estimates; estimator_slack carries the caveat explicitly.
struct AuditReport {
    double total_movement = 0.0;
    double terminal_quarter_movement = 0.0;  // (A)
    double tail_step_movement = 0.0;         // (B)
    double ratio_all_intervals = 0.0;        // (C)
    double ratio_windows = 0.0;              // (D)
    int window_T = 1;
    int intervals_checked = 0;
    double estimator_slack = 0.0;            // 3/sqrt(M) relative, by convention
    bool ratio_defined = false;              // false when no interval shrank
};

AuditReport chasing_audit(const std::vector<ChaseStep>& steps, const geom::Metric& metric,
                          int window_T = 1, int max_interval_samples = 400,
                          std::uint64_t seed = 0);

}  // namespace mchase::chase
