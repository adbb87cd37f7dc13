#include "mchase/chase/audit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mchase::chase {
namespace {

double hausdorff_from_supports(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

struct Pick {
    std::uint64_t s;
    std::uint64_t next() {
        std::uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
};

}  // namespace

AuditReport chasing_audit(const std::vector<ChaseStep>& steps, const geom::Metric& metric,
                          int window_T, int max_interval_samples, std::uint64_t seed) {
    const int T = static_cast<int>(steps.size());
    if (T < 2) throw std::invalid_argument("chasing_audit: need at least 2 steps");

    AuditReport rep;
    rep.window_T = window_T;

    std::vector<double> move(static_cast<size_t>(T), 0.0);
    for (int t = 1; t < T; ++t) {
        move[static_cast<size_t>(t)] = metric(steps[static_cast<size_t>(t)].theta,
                                              steps[static_cast<size_t>(t - 1)].theta);
        rep.total_movement += move[static_cast<size_t>(t)];
    }
    const int q = std::max(1, T / 4);
    for (int t = T - q; t < T; ++t) rep.terminal_quarter_movement += move[static_cast<size_t>(t)];
    rep.tail_step_movement = rep.terminal_quarter_movement / q;

    if (steps.front().supports) {
        const int m = static_cast<int>(steps.front().supports->size());
        rep.estimator_slack = 3.0 / std::sqrt(static_cast<double>(m));
    }

    std::vector<double> csum(static_cast<size_t>(T), 0.0);
    for (int t = 1; t < T; ++t)
        csum[static_cast<size_t>(t)] = csum[static_cast<size_t>(t - 1)] + move[static_cast<size_t>(t)];

    auto ratio_of = [&](int t1, int t2) -> std::pair<bool, double> {
        const double path = csum[static_cast<size_t>(t2)] - csum[static_cast<size_t>(t1)];
        if (!steps[static_cast<size_t>(t1)].supports || !steps[static_cast<size_t>(t2)].supports)
            return {false, 0.0};
        const double dh = hausdorff_from_supports(*steps[static_cast<size_t>(t1)].supports,
                                                  *steps[static_cast<size_t>(t2)].supports);
        if (dh < 1e-12) return {path < 1e-12, 0.0};  // 0/0 counts as ratio 0
        return {true, path / dh};
    };

    const long all_pairs = static_cast<long>(T) * (T - 1) / 2;
    Pick rng{seed ^ 0xa02bdbf7bb3c0a7ULL};
    auto consider = [&](int t1, int t2) {
        const auto [ok, r] = ratio_of(t1, t2);
        if (!ok) return;
        ++rep.intervals_checked;
        rep.ratio_defined = true;
        rep.ratio_all_intervals = std::max(rep.ratio_all_intervals, r);
        if (t2 - t1 <= window_T) rep.ratio_windows = std::max(rep.ratio_windows, r);
    };

    if (all_pairs <= max_interval_samples) {
        for (int t1 = 0; t1 < T; ++t1)
            for (int t2 = t1 + 1; t2 < T; ++t2) consider(t1, t2);
    } else {
        consider(0, T - 1);
        for (int t = 1; t < T; ++t)
            if (t <= window_T || move[static_cast<size_t>(t)] > 0.0) consider(t - 1, t);
        for (int k = 0; k < max_interval_samples; ++k) {
            const int t1 = static_cast<int>(rng.next() % static_cast<std::uint64_t>(T - 1));
            const int t2 = t1 + 1 + static_cast<int>(rng.next() % static_cast<std::uint64_t>(T - 1 - t1));
            consider(t1, t2);
        }
    }
    return rep;
}

}  // namespace mchase::chase
