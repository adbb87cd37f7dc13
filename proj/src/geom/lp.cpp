#include "mchase/geom/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mchase::geom {
namespace {

constexpr double kPivTol = 1e-10;

// Tableau simplex over: max obj'y, rows G y + s = h with y >= 0.
// Columns: [ y (n) | slacks (m) | artificials (p) | rhs ].
struct Tableau {
    Eigen::MatrixXd t;          // m x (ncols+1)
    Eigen::VectorXd z;          // objective row, size ncols
    double z0 = 0.0;            // objective value of current basis
    std::vector<int> basis;     // basic column per row
    int n = 0, m = 0, ncols = 0;

    double rhs(int r) const { return t(r, ncols); }

    void pivot(int r, int c) {
        t.row(r) /= t(r, c);
        for (int i = 0; i < m; ++i) {
            if (i == r) continue;
            const double f = t(i, c);
            if (std::abs(f) > 0.0) t.row(i) -= f * t.row(r);
        }
        const double f = z[c];
        if (std::abs(f) > 0.0) {
            z -= f * t.row(r).head(ncols);
            z0 -= f * t(r, ncols);
        }
        basis[static_cast<size_t>(r)] = c;
    }

    // Maximize. Returns false on iteration limit.
    bool run(const std::vector<bool>& allowed) {
        const long iter_cap = 400L * (m + n + 8);
        const long bland_after = 4L * (m + n + 8);
        for (long iter = 0; iter < iter_cap; ++iter) {
            const bool bland = iter > bland_after;
            int enter = -1;
            double best = kLpTol * 0.1;
            for (int c = 0; c < ncols; ++c) {
                if (!allowed[static_cast<size_t>(c)]) continue;
                if (z[c] > best) {
                    enter = c;
                    if (bland) break;
                    best = z[c];
                }
            }
            if (enter < 0) return true;  // optimal
            int leave = -1;
            double best_ratio = std::numeric_limits<double>::infinity();
            for (int r = 0; r < m; ++r) {
                const double a = t(r, enter);
                if (a <= kPivTol) continue;
                const double ratio = rhs(r) / a;
                if (ratio < best_ratio - 1e-12 ||
                    (bland && ratio < best_ratio + 1e-12 && leave >= 0 &&
                     basis[static_cast<size_t>(r)] < basis[static_cast<size_t>(leave)])) {
                    best_ratio = ratio;
                    leave = r;
                }
            }
            if (leave < 0) return true;  // unbounded; cannot happen box-bounded
            pivot(leave, enter);
        }
        return false;
    }
};

struct Shifted {
    Eigen::MatrixXd G;
    Eigen::VectorXd h;
    Eigen::VectorXd lo;
    int n = 0, m = 0;
};

Shifted shift_problem(const Box& box, const std::vector<Halfspace>& hs) {
    Shifted s;
    s.n = box.dim();
    s.m = static_cast<int>(hs.size()) + s.n;
    s.lo = box.lower;
    s.G.setZero(s.m, s.n);
    s.h.resize(s.m);
    for (int k = 0; k < static_cast<int>(hs.size()); ++k) {
        if (hs[static_cast<size_t>(k)].normal.size() != s.n)
            throw std::invalid_argument("lp: halfspace dimension mismatch");
        s.G.row(k) = hs[static_cast<size_t>(k)].normal.transpose();
        s.h[k] = hs[static_cast<size_t>(k)].offset - hs[static_cast<size_t>(k)].normal.dot(box.lower);
    }
    const Eigen::VectorXd w = box.width();
    for (int i = 0; i < s.n; ++i) {
        s.G(static_cast<int>(hs.size()) + i, i) = 1.0;
        s.h[static_cast<int>(hs.size()) + i] = w[i];
    }
    return s;
}

LpResult solve(const Box& box, const std::vector<Halfspace>& hs,
               const Eigen::VectorXd* objective) {
    const Shifted sp = shift_problem(box, hs);
    const int n = sp.n, m = sp.m;

    // Count artificials (rows with negative rhs after slack insertion).
    std::vector<int> art_of_row(static_cast<size_t>(m), -1);
    int p = 0;
    for (int r = 0; r < m; ++r)
        if (sp.h[r] < 0.0) art_of_row[static_cast<size_t>(r)] = p++;

    Tableau tb;
    tb.n = n;
    tb.m = m;
    tb.ncols = n + m + p;
    tb.t.setZero(m, tb.ncols + 1);
    tb.basis.assign(static_cast<size_t>(m), -1);
    for (int r = 0; r < m; ++r) {
        const double sgn = sp.h[r] < 0.0 ? -1.0 : 1.0;
        tb.t.row(r).head(n) = sgn * sp.G.row(r);
        tb.t(r, n + r) = sgn;  // slack
        tb.t(r, tb.ncols) = sgn * sp.h[r];
        if (art_of_row[static_cast<size_t>(r)] >= 0) {
            const int ac = n + m + art_of_row[static_cast<size_t>(r)];
            tb.t(r, ac) = 1.0;
            tb.basis[static_cast<size_t>(r)] = ac;
        } else {
            tb.basis[static_cast<size_t>(r)] = n + r;
        }
    }

    std::vector<bool> allowed(static_cast<size_t>(tb.ncols), true);

    if (p > 0) {
        // Phase 1: max -(sum of artificials); price out initial basis.
        tb.z.setZero(tb.ncols);
        tb.z0 = 0.0;
        for (int r = 0; r < m; ++r) {
            if (art_of_row[static_cast<size_t>(r)] < 0) continue;
            tb.z += tb.t.row(r).head(tb.ncols);
            tb.z0 += tb.t(r, tb.ncols);
        }
        for (int a = 0; a < p; ++a) tb.z[n + m + a] = 0.0;
        if (!tb.run(allowed)) return {LpStatus::IterationLimit, 0.0, {}};
        if (tb.z0 > kLpTol) return {LpStatus::Infeasible, 0.0, {}};
        // Drive leftover artificials out of the basis where possible.
        for (int r = 0; r < m; ++r) {
            if (tb.basis[static_cast<size_t>(r)] < n + m) continue;
            int c = 0;
            for (; c < n + m; ++c)
                if (std::abs(tb.t(r, c)) > kPivTol) break;
            if (c < n + m) tb.pivot(r, c);
        }
        for (int a = 0; a < p; ++a) allowed[static_cast<size_t>(n + m + a)] = false;
    }

    auto extract_point = [&]() {
        Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
        for (int r = 0; r < m; ++r) {
            const int bc = tb.basis[static_cast<size_t>(r)];
            if (bc >= 0 && bc < n) y[bc] = tb.t(r, tb.ncols);
        }
        return Eigen::VectorXd(y + sp.lo);
    };

    if (objective == nullptr) {
        LpResult res;
        res.status = LpStatus::Optimal;
        res.point = extract_point();
        res.value = 0.0;
        return res;
    }

    // Phase 2: price the real objective through the current basis.
    tb.z.setZero(tb.ncols);
    tb.z.head(n) = *objective;
    tb.z0 = -objective->dot(sp.lo);
    for (int r = 0; r < m; ++r) {
        const int bc = tb.basis[static_cast<size_t>(r)];
        const double f = tb.z[bc];
        if (std::abs(f) > 0.0) {
            tb.z -= f * tb.t.row(r).head(tb.ncols);
            tb.z0 -= f * tb.t(r, tb.ncols);
        }
    }
    if (!tb.run(allowed)) return {LpStatus::IterationLimit, 0.0, {}};

    LpResult res;
    res.status = LpStatus::Optimal;
    res.point = extract_point();
    res.value = objective->dot(res.point);
    return res;
}

}  // namespace

LpResult solve_support_lp(const Box& box, const std::vector<Halfspace>& halfspaces,
                          const Eigen::VectorXd& objective) {
    if (objective.size() != box.dim())
        throw std::invalid_argument("lp: objective dimension mismatch");
    if (halfspaces.empty()) {
        LpResult res;
        res.status = LpStatus::Optimal;
        res.point.resize(box.dim());
        for (int i = 0; i < box.dim(); ++i)
            res.point[i] = objective[i] >= 0.0 ? box.upper[i] : box.lower[i];
        res.value = objective.dot(res.point);
        return res;
    }
    return solve(box, halfspaces, &objective);
}

LpResult solve_feasibility_lp(const Box& box, const std::vector<Halfspace>& halfspaces) {
    if (halfspaces.empty()) {
        LpResult res;
        res.status = LpStatus::Optimal;
        res.point = box.center();
        return res;
    }
    return solve(box, halfspaces, nullptr);
}

}  // namespace mchase::geom
