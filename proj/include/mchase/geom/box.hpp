#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace mchase::geom {

/// Axis-aligned box [lower, upper] in R^n. The compact parameter space every
/// polytope lives inside; keeps all LPs bounded.
struct Box {
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;

    Box() = default;
    Box(Eigen::VectorXd lo, Eigen::VectorXd hi)
        : lower(std::move(lo)), upper(std::move(hi)) {
        if (lower.size() != upper.size() || lower.size() < 1)
            throw std::invalid_argument("Box: dimension mismatch or empty");
        for (Eigen::Index i = 0; i < lower.size(); ++i)
            if (lower[i] > upper[i])
                throw std::invalid_argument("Box: lower > upper");
    }

    static Box cube(int dim, double lo, double hi) {
        return Box(Eigen::VectorXd::Constant(dim, lo),
                   Eigen::VectorXd::Constant(dim, hi));
    }

    int dim() const { return static_cast<int>(lower.size()); }
    Eigen::VectorXd width() const { return upper - lower; }
    Eigen::VectorXd center() const { return 0.5 * (lower + upper); }

    bool contains(const Eigen::VectorXd& x, double tol = 0.0) const {
        if (x.size() != lower.size())
            throw std::invalid_argument("Box::contains: dimension mismatch");
        for (Eigen::Index i = 0; i < x.size(); ++i)
            if (x[i] < lower[i] - tol || x[i] > upper[i] + tol) return false;
        return true;
    }

    Eigen::VectorXd clamp(const Eigen::VectorXd& x) const {
        return x.cwiseMax(lower).cwiseMin(upper);
    }

    /// max_{x in box} <v,x>, attained at a corner.
    double support(const Eigen::VectorXd& v) const {
        double h = 0.0;
        for (Eigen::Index i = 0; i < v.size(); ++i)
            h += v[i] >= 0.0 ? v[i] * upper[i] : v[i] * lower[i];
        return h;
    }
};

}  // namespace mchase::geom
