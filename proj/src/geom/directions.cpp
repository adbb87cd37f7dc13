#include "mchase/geom/directions.hpp"

#include <cmath>
#include <stdexcept>

namespace mchase::geom {
namespace {

// splitmix64; stable across platforms, unlike <random> distributions.
struct SplitMix64 {
    std::uint64_t state;
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double uniform01() {  // in (0,1)
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }
};

}  // namespace

DirectionSet DirectionSet::make(int dim, int count, std::uint64_t seed) {
    if (dim < 1) throw std::invalid_argument("DirectionSet: dim >= 1 required");
    if (count < 2 * dim + 2) count = 2 * dim + 2;

    DirectionSet ds;
    ds.dim_ = dim;
    ds.seed_ = seed;
    ds.dirs_.reserve(static_cast<size_t>(count) + 1);

    for (int i = 0; i < dim; ++i) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(dim);
        e[i] = 1.0;
        ds.dirs_.push_back(e);
        ds.dirs_.push_back(-e);
    }

    SplitMix64 rng{seed ^ 0xd1b54a32d192ed03ULL};
    while (static_cast<int>(ds.dirs_.size()) < count) {
        Eigen::VectorXd v(dim);
        // Box-Muller spelled out so regeneration is bit-identical per seed.
        for (int i = 0; i < dim; i += 2) {
            const double u1 = rng.uniform01();
            const double u2 = rng.uniform01();
            const double r = std::sqrt(-2.0 * std::log(u1));
            v[i] = r * std::cos(2.0 * M_PI * u2);
            if (i + 1 < dim) v[i + 1] = r * std::sin(2.0 * M_PI * u2);
        }
        const double norm = v.norm();
        if (norm < 1e-12) continue;
        v /= norm;
        ds.dirs_.push_back(v);
        ds.dirs_.push_back(-v);
    }
    ds.fit_weights();
    return ds;
}

void DirectionSet::fit_weights() {
    const int m = size();
    const int n = dim_;
    const int pairs = m / 2;
    const int nc = n * (n + 1) / 2 + 1;  // moment constraints + mass constraint

    // Per-pair weights u_p; both members of a pair share the weight.
    // Constraints: sum_p 2 u_p v_p v_p' = I/n (upper triangle), sum_p 2 u_p = 1.
    Eigen::MatrixXd A(nc, pairs);
    Eigen::VectorXd rhs(nc);
    int row = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            for (int p = 0; p < pairs; ++p) {
                const Eigen::VectorXd& v = dirs_[static_cast<size_t>(2 * p)];
                A(row, p) = 2.0 * v[i] * v[j];
            }
            rhs[row] = i == j ? 1.0 / n : 0.0;
            ++row;
        }
    }
    for (int p = 0; p < pairs; ++p) A(row, p) = 2.0;
    rhs[row] = 1.0;

    const Eigen::VectorXd u0 = Eigen::VectorXd::Constant(pairs, 1.0 / m);
    // Minimum-norm correction: u = u0 + A'(AA')^-1 (rhs - A u0).
    const Eigen::MatrixXd gram = A * A.transpose();
    const Eigen::VectorXd lambda = gram.ldlt().solve(rhs - A * u0);
    Eigen::VectorXd u = u0 + A.transpose() * lambda;

    if (u.minCoeff() <= 0.0) u = u0;  // keep weights positive; uniform fallback

    weights_.resize(m);
    for (int p = 0; p < pairs; ++p) {
        weights_[2 * p] = u[p];
        weights_[2 * p + 1] = u[p];
    }
}

}  // namespace mchase::geom
