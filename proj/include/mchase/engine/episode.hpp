#pragma once

#include <cstdint>
#include <optional>

#include "mchase/engine/objective.hpp"
#include "mchase/engine/run_record.hpp"
#include "mchase/geom/box.hpp"
#include "mchase/oracles/arm_oracle.hpp"
#include "mchase/oracles/cartpole_oracle.hpp"
#include "mchase/plants/arm.hpp"
#include "mchase/plants/cartpole.hpp"
#include "mchase/plants/noise.hpp"

namespace mchase::engine {

enum class SelKind { Steiner, Greedy, WeakProjection };

/// Scalar stabilization study: x+ = a* x + b* u + w, deadbeat oracle,
/// interval objective |x| <= 1.
struct ScalarEpisodeConfig {
    double a = 2.0;             // K = [-a, a] x [1, 1 + 2 b_delta]
    double b_delta = 1.0;
    double eta = std::exp(-1.0);
    plants::DisturbanceMode disturbance = plants::DisturbanceMode::WorstCaseSign;
    int horizon = 200;
    double x0 = 0.0;
    SelKind sel = SelKind::Steiner;
    int directions = 256;
    std::uint64_t direction_seed = 20252025;
    std::optional<Eigen::Vector2d> theta_star;  // random in K when unset
    bool audit_membership = true;
};

RunRecord run_scalar_episode(const ScalarEpisodeConfig& cfg, std::uint64_t master_seed);

/// Cart-pole swing-up study under ZOH-RK4, noisy fd observations, lumped
/// consistent sets and the hybrid safety-wrapped oracle.
struct CartPoleEpisodeConfig {
    plants::CartPoleParams truth;
    oracles::CartPoleGains gains;
    double ts = 0.02;
    int substeps = 10;
    double horizon_s = 60.0;
    double noise_pos = 2e-4;   // base measurement amplitudes
    double noise_ang = 2e-4;
    double noise_mult = 1.0;
    double tau_dx = 0.05;      // true process-disturbance bounds
    double tau_dth = 0.01;
    double tau_dx_box = 0.3;   // admissible range for the bound coordinates
    double tau_dth_box = 0.1;
    bool clairvoyant = false;  // run pi[theta*] instead of the online scheme
    SelKind sel = SelKind::Steiner;
    int directions = 256;
    std::uint64_t direction_seed = 20252025;
    std::vector<int> windows = {5, 25, 75};
    double disc_floor = 0.1;
    Eigen::Vector4d target_halfwidths{0.1, 0.15, 0.5, 0.5};
    double dwell_s = 2.0;
    bool audit_membership = true;
    int probe_points = 32;
};

RunRecord run_cartpole_episode(const CartPoleEpisodeConfig& cfg, std::uint64_t master_seed);

/// One-link arm trajectory tracking with the robust oracle and exact
/// mid-interval (q, qd, qdd, tau) data rows.
struct ArmEpisodeConfig {
    plants::ArmParams truth;
    double omega_true = 0.05;
    geom::Box param_box = geom::Box((Eigen::Vector4d() << 0.5, 0.0, 0.0, 0.0).finished(),
                                    (Eigen::Vector4d() << 3.0, 1.0, 5.0, 0.5).finished());
    oracles::ArmGains gains;
    double ref_amp = 1.0;
    double ref_freq = 0.5;  // rad/s
    double eps_track = 0.15;
    double ts = 0.02;
    int substeps = 10;
    double horizon_s = 30.0;
    bool clairvoyant = false;
    SelKind sel = SelKind::Steiner;
    int directions = 256;
    std::uint64_t direction_seed = 20252025;
    Eigen::Vector2d x0{0.5, 0.0};
    bool audit_membership = true;
};

RunRecord run_arm_episode(const ArmEpisodeConfig& cfg, std::uint64_t master_seed);

}  // namespace mchase::engine
