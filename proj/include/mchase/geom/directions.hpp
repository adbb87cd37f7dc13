#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace mchase::geom {

/// Fixed bag of unit directions on S^{n-1}: the +/- axis pairs first, then
/// seeded antithetic pairs drawn uniformly on the sphere. Shared across all
/// time steps of a run so that per-direction support values are comparable
/// over time (common random numbers).
///
/// Each direction carries a quadrature weight. Weights start uniform (1/M)
/// and get a small least-squares correction enforcing
///     sum_i w_i v_i v_i' = I/n,   sum_i w_i = 1,
/// which makes the Steiner estimate n * sum_i w_i h(v_i) v_i exact on boxes
/// and keeps the chased path bounded by n * max_i |h_1(v_i) - h_T(v_i)|.
class DirectionSet {
public:
    static DirectionSet make(int dim, int count, std::uint64_t seed);

    int dim() const { return dim_; }
    int size() const { return static_cast<int>(dirs_.size()); }
    const Eigen::VectorXd& operator[](int i) const { return dirs_[static_cast<size_t>(i)]; }
    const std::vector<Eigen::VectorXd>& all() const { return dirs_; }
    double weight(int i) const { return weights_[i]; }
    std::uint64_t seed() const { return seed_; }

    /// Index of the antithetic partner of direction i (-v_i is always present).
    int negation_index(int i) const { return i ^ 1; }

private:
    void fit_weights();

    int dim_ = 0;
    std::uint64_t seed_ = 0;
    std::vector<Eigen::VectorXd> dirs_;
    Eigen::VectorXd weights_;
};

}  // namespace mchase::geom
