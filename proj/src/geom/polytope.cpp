#include "mchase/geom/polytope.hpp"

#include <cmath>
#include <stdexcept>

namespace mchase::geom {

nlohmann::json Polytope::to_json() const {
    nlohmann::json j;
    j["lower"] = std::vector<double>(box_.lower.data(), box_.lower.data() + box_.lower.size());
    j["upper"] = std::vector<double>(box_.upper.data(), box_.upper.data() + box_.upper.size());
    nlohmann::json hs = nlohmann::json::array();
    for (const auto& h : halfspaces_) {
        nlohmann::json e;
        e["a"] = std::vector<double>(h.normal.data(), h.normal.data() + h.normal.size());
        e["b"] = h.offset;
        hs.push_back(e);
    }
    j["halfspaces"] = hs;
    return j;
}

bool contains(const Polytope& p, const Eigen::VectorXd& theta, double tol) {
    if (theta.size() != p.dim())
        throw std::invalid_argument("contains: dimension mismatch");
    if (!p.box().contains(theta, tol)) return false;
    for (const auto& h : p.halfspaces())
        if (h.normal.dot(theta) - h.offset > tol) return false;
    return true;
}

bool is_empty(const Polytope& p) {
    return solve_feasibility_lp(p.box(), p.halfspaces()).status != LpStatus::Optimal;
}

Support support(const Polytope& p, const Eigen::VectorXd& v) {
    const LpResult res = solve_support_lp(p.box(), p.halfspaces(), v);
    if (res.status != LpStatus::Optimal)
        throw std::runtime_error("support: infeasible polytope or LP failure");
    return Support{res.value, res.point};
}

Eigen::VectorXd support_all(const Polytope& p, const DirectionSet& dirs) {
    Eigen::VectorXd h(dirs.size());
    for (int i = 0; i < dirs.size(); ++i) h[i] = support(p, dirs[i]).value;
    return h;
}

Box bounding_box(const Polytope& p) {
    const int n = p.dim();
    Eigen::VectorXd lo(n), hi(n);
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) {
        e[i] = 1.0;
        hi[i] = support(p, e).value;
        e[i] = -1.0;
        lo[i] = -support(p, e).value;
        e[i] = 0.0;
    }
    return Box(lo, hi);
}

Eigen::VectorXd project(const Polytope& p, const Eigen::VectorXd& theta0,
                        double tol, int max_iter) {
    if (theta0.size() != p.dim())
        throw std::invalid_argument("project: dimension mismatch");
    if (contains(p, theta0, 0.0)) return theta0;

    const auto& hs = p.halfspaces();
    const size_t nsets = hs.size() + 1;  // box last
    std::vector<Eigen::VectorXd> corr(nsets, Eigen::VectorXd::Zero(p.dim()));
    std::vector<double> nrm2(hs.size());
    for (size_t k = 0; k < hs.size(); ++k) nrm2[k] = hs[k].normal.squaredNorm();

    Eigen::VectorXd x = theta0;
    for (int it = 0; it < max_iter; ++it) {
        double sweep_move = 0.0;
        for (size_t k = 0; k < nsets; ++k) {
            const Eigen::VectorXd y = x + corr[k];
            Eigen::VectorXd xn;
            if (k < hs.size()) {
                const double viol = hs[k].normal.dot(y) - hs[k].offset;
                xn = viol > 0.0 ? Eigen::VectorXd(y - (viol / nrm2[k]) * hs[k].normal) : y;
            } else {
                xn = p.box().clamp(y);
            }
            corr[k] = y - xn;
            sweep_move = std::max(sweep_move, (xn - x).lpNorm<Eigen::Infinity>());
            x = xn;
        }
        if (sweep_move < 0.1 * tol) {
            // Box projection ran last, so box bounds hold exactly; halfspace
            // violations are bounded by the sweep displacement.
            bool ok = true;
            for (const auto& h : hs)
                if (h.normal.dot(x) - h.offset > tol) { ok = false; break; }
            if (ok) return x;
        }
    }
    if (is_empty(p)) throw std::runtime_error("project: infeasible polytope");
    throw std::runtime_error("project: Dykstra did not converge within max_iter");
}

Eigen::VectorXd nearest_point_linf(const Polytope& p, const Eigen::VectorXd& target) {
    const int n = p.dim();
    // Lift to (x, t): minimize t subject to |x_i - target_i| <= t and x in P.
    double t_max = 1.0;
    for (int i = 0; i < n; ++i)
        t_max += std::max(std::abs(p.box().upper[i] - target[i]),
                          std::abs(p.box().lower[i] - target[i]));
    Eigen::VectorXd lo(n + 1), hi(n + 1);
    lo.head(n) = p.box().lower;
    hi.head(n) = p.box().upper;
    lo[n] = 0.0;
    hi[n] = t_max;
    std::vector<Halfspace> hs;
    hs.reserve(p.halfspaces().size() + 2 * static_cast<size_t>(n));
    for (const auto& h : p.halfspaces()) {
        Eigen::VectorXd a = Eigen::VectorXd::Zero(n + 1);
        a.head(n) = h.normal;
        hs.emplace_back(std::move(a), h.offset);
    }
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXd up = Eigen::VectorXd::Zero(n + 1);
        up[i] = 1.0;
        up[n] = -1.0;
        hs.emplace_back(up, target[i]);
        Eigen::VectorXd dn = Eigen::VectorXd::Zero(n + 1);
        dn[i] = -1.0;
        dn[n] = -1.0;
        hs.emplace_back(dn, -target[i]);
    }
    Eigen::VectorXd c = Eigen::VectorXd::Zero(n + 1);
    c[n] = -1.0;
    const LpResult res = solve_support_lp(Box(lo, hi), hs, c);
    if (res.status != LpStatus::Optimal)
        throw std::runtime_error("nearest_point_linf: infeasible polytope or LP failure");
    return res.point.head(n);
}

Eigen::VectorXd steiner_from_supports(const Polytope& p, const DirectionSet& dirs,
                                      const Eigen::VectorXd& supports) {
    const int n = p.dim();
    Eigen::VectorXd s = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < dirs.size(); ++i)
        s += dirs.weight(i) * supports[i] * dirs[i];
    s *= static_cast<double>(n);
    if (!contains(p, s, 1e-9)) {
        try {
            s = project(p, s, 1e-8, 4000);
        } catch (const std::exception&) {
            // thin regions can stall the sweeps; the sup-norm point is close
            // enough for the membership guard
            s = nearest_point_linf(p, s);
        }
    }
    return s;
}

Eigen::VectorXd steiner(const Polytope& p, const DirectionSet& dirs) {
    return steiner_from_supports(p, dirs, support_all(p, dirs));
}

double hausdorff(const Polytope& p, const Polytope& q, const DirectionSet& dirs) {
    if (p.dim() != q.dim())
        throw std::invalid_argument("hausdorff: dimension mismatch");
    double d = 0.0;
    for (int i = 0; i < dirs.size(); ++i)
        d = std::max(d, std::abs(support(p, dirs[i]).value - support(q, dirs[i]).value));
    return d;
}

double diameter_from_supports(const DirectionSet& dirs, const Eigen::VectorXd& supports) {
    double d = 0.0;
    for (int i = 0; i < dirs.size(); i += 2)
        d = std::max(d, supports[i] + supports[dirs.negation_index(i)]);
    return d;
}

double diameter(const Polytope& p, const DirectionSet& dirs) {
    return diameter_from_supports(dirs, support_all(p, dirs));
}

Polytope prune_redundant(const Polytope& p) {
    const auto& hs = p.halfspaces();
    std::vector<bool> keep(hs.size(), true);
    for (size_t k = 0; k < hs.size(); ++k) {
        std::vector<Halfspace> others;
        others.reserve(hs.size() - 1);
        for (size_t j = 0; j < hs.size(); ++j)
            if (j != k && keep[j]) others.push_back(hs[j]);
        const LpResult res = solve_support_lp(p.box(), others, hs[k].normal);
        if (res.status == LpStatus::Optimal && res.value <= hs[k].offset + 1e-9)
            keep[k] = false;
    }
    Polytope out(p.box());
    for (size_t k = 0; k < hs.size(); ++k)
        if (keep[k]) out.append(hs[k]);
    return out;
}

}  // namespace mchase::geom
