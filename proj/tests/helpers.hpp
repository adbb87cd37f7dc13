#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "mchase/geom/polytope.hpp"

namespace testutil {

// Deterministic test RNG (splitmix64).
struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double uniform01() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
    Eigen::VectorXd vec(int n, double lo, double hi) {
        Eigen::VectorXd v(n);
        for (int i = 0; i < n; ++i) v[i] = uniform(lo, hi);
        return v;
    }
    Eigen::VectorXd unit(int n) {
        Eigen::VectorXd v(n);
        for (;;) {
            for (int i = 0; i < n; ++i) v[i] = uniform(-1.0, 1.0);
            const double nn = v.norm();
            if (nn > 1e-3) return v / nn;
        }
    }
};

// Random nonempty polytope: unit-ish box plus halfspaces that keep a random
// interior survivor point feasible.
inline mchase::geom::Polytope random_polytope(int dim, int n_halfspaces, Rng& rng) {
    using namespace mchase::geom;
    Polytope p(Box::cube(dim, -1.0, 1.0));
    const Eigen::VectorXd survivor = rng.vec(dim, -0.6, 0.6);
    for (int k = 0; k < n_halfspaces; ++k) {
        const Eigen::VectorXd a = rng.unit(dim);
        const double b = a.dot(survivor) + rng.uniform(0.05, 0.8);
        p.append(Halfspace(a, b));
    }
    return p;
}

}  // namespace testutil
