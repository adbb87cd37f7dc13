#include "mchase/geom/packing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mchase::geom {
namespace {

constexpr double kStrict = 1.0 + 1e-9;  // pairwise distance must exceed r
constexpr std::int64_t kCap = std::int64_t(1) << 53;

std::int64_t sat_mul(std::int64_t a, double b) {
    const double v = static_cast<double>(a) * b;
    if (v >= static_cast<double>(kCap)) return kCap;
    return static_cast<std::int64_t>(v);
}

double unit_ball_volume(int n, double radius) {
    return std::pow(M_PI, n / 2.0) / std::tgamma(n / 2.0 + 1.0) * std::pow(radius, n);
}

}  // namespace

PackingBounds packing_bounds(const Box& box, double r, const Metric& metric) {
    if (r <= 0.0) throw std::invalid_argument("packing_bounds: r > 0 required");
    const int n = box.dim();
    const Eigen::VectorXd w = box.width();

    const bool l1 = metric.kind == Metric::Kind::WeightedL1;
    auto axis_weight = [&](int i) { return l1 ? metric.weights[i] : 1.0; };

    // Lower bound: grid with per-axis spacing just above r in the metric.
    // Adjacent points differ in one axis by more than r; points differing in
    // several axes are only farther (both metrics are monotone per axis).
    std::int64_t lower = 1;
    for (int i = 0; i < n; ++i) {
        const double cw = axis_weight(i);
        if (cw <= 0.0) continue;  // zero-weight axes cannot separate points
        const double spacing = r * kStrict / cw;
        lower = sat_mul(lower, std::floor(w[i] / spacing) + 1.0);
    }

    // Upper bound 1: diameter argument.
    if (metric.box_diameter(box.lower, box.upper) <= r) return {1, 1};

    // Upper bound 2: cover by cells of metric diameter <= r; each cell holds
    // at most one point of any r-separated set.
    int n_active = 0;
    for (int i = 0; i < n; ++i)
        if (axis_weight(i) > 0.0 && w[i] > 0.0) ++n_active;
    std::int64_t cover = 1;
    for (int i = 0; i < n; ++i) {
        const double cw = axis_weight(i);
        if (cw <= 0.0 || w[i] <= 0.0) continue;
        const double side = l1 ? r / (n_active * cw) : r / std::sqrt(static_cast<double>(n_active));
        cover = sat_mul(cover, std::ceil(w[i] / side - 1e-12));
    }
    std::int64_t upper = cover;

    // Upper bound 3 (euclidean): disjoint open r/2-balls around packed points
    // all fit inside the box inflated by r/2.
    if (!l1) {
        double infl = 1.0;
        for (int i = 0; i < n; ++i) infl *= (w[i] + r);
        const double vol = infl / unit_ball_volume(n, r / 2.0);
        if (vol < static_cast<double>(upper)) upper = static_cast<std::int64_t>(std::floor(vol));
    }

    upper = std::max(upper, lower);
    return {lower, upper};
}

}  // namespace mchase::geom
