#pragma once

#include <cstdint>

#include "mchase/geom/box.hpp"
#include "mchase/geom/metric.hpp"

namespace mchase::geom {

/// Analytic bracket on the r-packing number N(box, r): the largest count of
/// points with pairwise distance strictly greater than r. Exact values are
/// out of reach; the lower bound comes from explicit grid constructions, the
/// upper bound from cell-cover and (euclidean) volume arguments.
struct PackingBounds {
    std::int64_t lower = 1;
    std::int64_t upper = 1;
};

PackingBounds packing_bounds(const Box& box, double r, const Metric& metric);

}  // namespace mchase::geom
