#include "mchase/plants/noise.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace mchase::plants {

RngStream::RngStream(std::uint64_t master, std::uint64_t tag) {
    state_ = master ^ (0x9e3779b97f4a7c15ULL * (tag + 0x632be59bd9b4e019ULL));
    for (int i = 0; i < 4; ++i) next_u64();  // decorrelate nearby tags
}

std::uint64_t RngStream::next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double RngStream::uniform01() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

Eigen::VectorXd RngStream::uniform_vec(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
    Eigen::VectorXd v(lo.size());
    for (Eigen::Index i = 0; i < lo.size(); ++i) v[i] = uniform(lo[i], hi[i]);
    return v;
}

Eigen::VectorXd NoiseModel::draw(RngStream& rng) const {
    Eigen::VectorXd n(bound.size());
    for (Eigen::Index i = 0; i < bound.size(); ++i) {
        n[i] = rng.uniform(-bound[i], bound[i]);
        assert(std::abs(n[i]) <= bound[i]);
    }
    return n;
}

Eigen::VectorXd observe_mechanical(const Eigen::VectorXd& state_true,
                                   const Eigen::VectorXd* prev_obs_positions,
                                   const Eigen::VectorXd& noise, double ts,
                                   bool fd_velocities) {
    const Eigen::Index n = state_true.size();
    if (n % 2 != 0) throw std::invalid_argument("observe_mechanical: need [positions; velocities]");
    const Eigen::Index k = n / 2;
    Eigen::VectorXd obs(n);
    obs.head(k) = state_true.head(k) + noise.head(k);
    if (fd_velocities && prev_obs_positions != nullptr)
        obs.tail(k) = (obs.head(k) - *prev_obs_positions) / ts;
    else if (fd_velocities)
        obs.tail(k).setZero();  // no history yet
    else
        obs.tail(k) = state_true.tail(k) + noise.tail(k);
    return obs;
}

double DisturbanceModel::draw(RngStream& rng, double x_ref) const {
    double w = 0.0;
    switch (mode) {
        case DisturbanceMode::IidUniform: w = rng.uniform(-bound, bound); break;
        case DisturbanceMode::WorstCaseSign: w = x_ref >= 0.0 ? bound : -bound; break;
        case DisturbanceMode::Constant: w = bound; break;
    }
    assert(std::abs(w) <= bound);
    return w;
}

}  // namespace mchase::plants
