#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace mchase::geom {

/// Distance on parameter space: euclidean or weighted L1.
struct Metric {
    enum class Kind { Euclidean, WeightedL1 };

    Kind kind = Kind::Euclidean;
    Eigen::VectorXd weights;  // used by WeightedL1

    static Metric euclidean() { return Metric{}; }
    static Metric weighted_l1(Eigen::VectorXd w) {
        Metric m;
        m.kind = Kind::WeightedL1;
        m.weights = std::move(w);
        return m;
    }

    double operator()(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
        if (a.size() != b.size()) throw std::invalid_argument("Metric: dimension mismatch");
        if (kind == Kind::Euclidean) return (a - b).norm();
        if (weights.size() != a.size()) throw std::invalid_argument("Metric: weight dimension mismatch");
        return weights.dot((a - b).cwiseAbs());
    }

    /// Exact diameter of a box under this metric.
    double box_diameter(const Eigen::VectorXd& lower, const Eigen::VectorXd& upper) const {
        const Eigen::VectorXd w = upper - lower;
        if (kind == Kind::Euclidean) return w.norm();
        return weights.dot(w);
    }
};

}  // namespace mchase::geom
