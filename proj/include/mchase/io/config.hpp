#pragma once

#include <string>
#include <vector>

#include "mchase/engine/episode.hpp"

#include "json.hpp"

namespace mchase::io {

/// Raised on any malformed configuration; the message names the offending key.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// A single-run configuration: one plant, one selector, one seed.
struct RunConfig {
    std::string plant;  // "scalar" | "cartpole" | "arm1"
    std::uint64_t seed = 1;
    bool svg = false;

    engine::ScalarEpisodeConfig scalar;
    engine::CartPoleEpisodeConfig cartpole;
    engine::ArmEpisodeConfig arm;

    static RunConfig from_json(const nlohmann::json& j);
    static RunConfig from_file(const std::string& path);
};

/// The benchmark grid: plant-parameter axes times noise multipliers and seeds.
struct GridSpec {
    std::vector<double> M{1.0, 2.0, 4.0};
    std::vector<double> m{0.1, 0.2, 0.4};
    std::vector<double> l{0.1, 0.2, 0.4, 0.6, 1.0};
    std::vector<double> b_x{0.0, 10.0};
    std::vector<double> b_theta{0.0};
    std::vector<double> noise_multipliers{0.0, 1.0, 5.0};
    int seeds_per_noise = 1;
    double horizon_s = 60.0;
    engine::CartPoleEpisodeConfig base;  // gains / noise base / windows

    long cells() const {
        return static_cast<long>(M.size() * m.size() * l.size() * b_x.size() * b_theta.size());
    }
    long runs_per_cell() const {
        return static_cast<long>(noise_multipliers.size()) * seeds_per_noise;
    }

    static GridSpec from_json(const nlohmann::json& j);
    static GridSpec from_file(const std::string& path);
};

}  // namespace mchase::io
