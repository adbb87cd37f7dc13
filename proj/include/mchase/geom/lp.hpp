#pragma once

#include <Eigen/Dense>
#include <vector>

#include "mchase/geom/box.hpp"

namespace mchase::geom {

/// Halfspace {x : <normal, x> <= offset}.
struct Halfspace {
    Eigen::VectorXd normal;
    double offset = 0.0;

    Halfspace() = default;
    Halfspace(Eigen::VectorXd a, double b) : normal(std::move(a)), offset(b) {
        if (normal.size() < 1 || normal.lpNorm<Eigen::Infinity>() == 0.0)
            throw std::invalid_argument("Halfspace: zero normal");
    }
};

enum class LpStatus { Optimal, Infeasible, IterationLimit };

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    double value = 0.0;        // objective at optimum
    Eigen::VectorXd point;     // maximizer (valid when Optimal)
};

/// Dense two-phase tableau simplex for
///     max c'x   s.t.  normal_k' x <= offset_k  for all k,   x in box.
/// Dimensions here are tiny (n <= ~10, a few hundred rows), so a dense
/// tableau with a Bland fallback is both simple and reliable.
/// Feasibility/optimality tolerance 1e-8 (see LpTol).
inline constexpr double kLpTol = 1e-8;

LpResult solve_support_lp(const Box& box, const std::vector<Halfspace>& halfspaces,
                          const Eigen::VectorXd& objective);

/// Phase-1 only: is box ∩ halfspaces nonempty? Fills a witness on success.
LpResult solve_feasibility_lp(const Box& box, const std::vector<Halfspace>& halfspaces);

}  // namespace mchase::geom
