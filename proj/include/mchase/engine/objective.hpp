#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace mchase::engine {

/// Binary per-step objective. Closed boundaries count as satisfied
/// (|x| <= 1 and ||x - x_d|| <= eps as written).
struct Objective {
    enum class Kind { Interval, TargetSet, Tracking };
    Kind kind = Kind::Interval;

    double interval_halfwidth = 1.0;       // Interval: |x[0]| <= w

    Eigen::VectorXd target_halfwidths;     // TargetSet: per-coordinate box
    int wrap_index = -1;                   // coordinate folded to (-pi, pi]

    std::function<Eigen::VectorXd(double)> reference;  // Tracking: x_d(time)
    double tracking_eps = 0.1;
    double ts = 0.02;

    /// 1 = mistake, 0 = requirement met.
    int evaluate(const Eigen::VectorXd& x, const Eigen::VectorXd& /*u*/, long t) const {
        switch (kind) {
            case Kind::Interval:
                return std::abs(x[0]) <= interval_halfwidth ? 0 : 1;
            case Kind::TargetSet: {
                if (x.size() != target_halfwidths.size())
                    throw std::invalid_argument("Objective: dimension mismatch");
                for (Eigen::Index i = 0; i < x.size(); ++i) {
                    double v = x[i];
                    if (static_cast<int>(i) == wrap_index) v = std::remainder(v, 2.0 * M_PI);
                    if (std::abs(v) > target_halfwidths[i]) return 1;
                }
                return 0;
            }
            case Kind::Tracking: {
                const Eigen::VectorXd xd = reference(static_cast<double>(t) * ts);
                return (x - xd).norm() <= tracking_eps ? 0 : 1;
            }
        }
        return 1;
    }
};

/// Running mistake account: per-step flags, the cumulative sum, first
/// success, and the clean run at the tail.
struct MistakeLedger {
    std::vector<int> flags;
    long total = 0;
    long first_success = -1;

    void add(int flag) {
        flags.push_back(flag);
        total += flag;
        if (flag == 0 && first_success < 0) first_success = static_cast<long>(flags.size()) - 1;
    }
    long terminal_clean_run() const {
        long n = 0;
        for (auto it = flags.rbegin(); it != flags.rend() && *it == 0; ++it) ++n;
        return n;
    }
    long mistakes_in_terminal_fraction(double frac) const {
        const long start = static_cast<long>(std::ceil((1.0 - frac) * flags.size()));
        long s = 0;
        for (size_t i = static_cast<size_t>(start); i < flags.size(); ++i) s += flags[i];
        return s;
    }
};

}  // namespace mchase::engine
