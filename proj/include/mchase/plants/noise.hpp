#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace mchase::plants {

/// Deterministic per-episode random stream (splitmix64 core). Streams derive
/// from (master seed, stream tag) so parallel episodes are order-independent.
class RngStream {
public:
    RngStream(std::uint64_t master, std::uint64_t tag);

    std::uint64_t next_u64();
    double uniform01();                       // in (0,1)
    double uniform(double lo, double hi);
    Eigen::VectorXd uniform_vec(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi);

private:
    std::uint64_t state_;
};

/// Additive measurement noise, uniform on [-bound, bound] per coordinate.
struct NoiseModel {
    Eigen::VectorXd bound;

    Eigen::VectorXd draw(RngStream& rng) const;
};

enum class DisturbanceMode { IidUniform, WorstCaseSign, Constant };

/// Bounded process disturbance. WorstCaseSign plays eta * sign(x) against a
/// scalar reference, the adversarial choice for interval objectives.
struct DisturbanceModel {
    double bound = 0.0;
    DisturbanceMode mode = DisturbanceMode::IidUniform;

    double draw(RngStream& rng, double x_ref) const;
};

/// Measurement of a mechanical state [positions; velocities]: positions get
/// additive noise; velocity channels are either finite differences of the
/// noisy positions (fd mode) or directly measured with the same noise.
Eigen::VectorXd observe_mechanical(const Eigen::VectorXd& state_true,
                                   const Eigen::VectorXd* prev_obs_positions,
                                   const Eigen::VectorXd& noise, double ts,
                                   bool fd_velocities);

}  // namespace mchase::plants
