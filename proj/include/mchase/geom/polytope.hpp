#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "mchase/geom/box.hpp"
#include "mchase/geom/directions.hpp"
#include "mchase/geom/lp.hpp"

#include "json.hpp"

namespace mchase::geom {

/// Compact convex parameter set: bounding box intersected with an ordered,
/// append-only list of halfspaces. Appends only shrink the region; the
/// generation counter increments per append so consumers can detect change.
/// Treat constructed values as immutable snapshots; copy before mutating.
class Polytope {
public:
    Polytope() = default;
    explicit Polytope(Box box) : box_(std::move(box)) {}

    const Box& box() const { return box_; }
    const std::vector<Halfspace>& halfspaces() const { return halfspaces_; }
    std::uint64_t generation() const { return generation_; }
    int dim() const { return box_.dim(); }

    void append(Halfspace hs) {
        if (hs.normal.size() != box_.dim())
            throw std::invalid_argument("Polytope::append: dimension mismatch");
        halfspaces_.push_back(std::move(hs));
        ++generation_;
    }

    nlohmann::json to_json() const;

private:
    Box box_;
    std::vector<Halfspace> halfspaces_;
    std::uint64_t generation_ = 0;
};

/// Membership: box bounds and every halfspace with slack >= -tol.
bool contains(const Polytope& p, const Eigen::VectorXd& theta, double tol);

bool is_empty(const Polytope& p);

struct Support {
    double value = 0.0;
    Eigen::VectorXd argmax;
};

/// h_P(v) = max over the region of <v, x>. Throws on infeasible region.
Support support(const Polytope& p, const Eigen::VectorXd& v);

/// Support values for every direction in the set (axis pairs first).
Eigen::VectorXd support_all(const Polytope& p, const DirectionSet& dirs);

/// Tight bounding box of the region from the 2n axis support LPs.
Box bounding_box(const Polytope& p);

/// Euclidean projection via Dykstra's alternating projections over the box
/// and each halfspace. Exact identity on interior points. Throws on
/// infeasible region or non-convergence within max_iter.
Eigen::VectorXd project(const Polytope& p, const Eigen::VectorXd& theta0,
                        double tol = 1e-8, int max_iter = 10000);

/// Feasible point minimizing the sup-norm distance to the target (a single
/// LP); within sqrt(n) of the euclidean projection. Robust fallback where
/// only feasibility plus proximity matters.
Eigen::VectorXd nearest_point_linf(const Polytope& p, const Eigen::VectorXd& target);

/// Monte-Carlo Steiner point (n/M) sum h_P(v_i) v_i over the direction set,
/// projected back into the region if the raw estimate falls outside.
Eigen::VectorXd steiner(const Polytope& p, const DirectionSet& dirs);
Eigen::VectorXd steiner_from_supports(const Polytope& p, const DirectionSet& dirs,
                                      const Eigen::VectorXd& supports);

/// Directional Hausdorff estimate max_i |h_P(v_i) - h_Q(v_i)|; equals d_H up
/// to sampling error when Q is nested inside P.
double hausdorff(const Polytope& p, const Polytope& q, const DirectionSet& dirs);

/// Max sampled width h_P(v) + h_P(-v); exact for boxes (axis pairs included).
double diameter(const Polytope& p, const DirectionSet& dirs);
double diameter_from_supports(const DirectionSet& dirs, const Eigen::VectorXd& supports);

/// Region-preserving constraint removal. Every removed halfspace carries an
/// LP certificate (its support over the remaining region is within 1e-9 of
/// never cutting).
Polytope prune_redundant(const Polytope& p);

}  // namespace mchase::geom
