#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "mchase/chase/audit.hpp"

namespace mchase::engine {

struct StepRecord {
    long t = 0;
    double time_s = 0.0;
    Eigen::VectorXd obs;
    Eigen::VectorXd true_state;
    double u = 0.0;
    Eigen::VectorXd theta;
    std::string branch;  // oracle branch tag ("-" when not applicable)
    int mistake = 0;
    double movement = 0.0;       // d(theta_t, theta_{t-1})
    double dh_increment = 0.0;   // estimated region shrink this step
    int halfspace_count = 0;
    std::uint64_t generation = 0;
    double xdd_desired = 0.0;
};

struct RunSummary {
    long mistakes = 0;
    long first_success = -1;
    long terminal_clean_run = 0;
    long terminal_fifth_mistakes = 0;   // mistakes in the last 20% of steps
    double completion_time_s = -1.0;    // swing-up dwell entry, -1 if never
    long safety_violations = 0;         // steps with |x_c| beyond the limit
    double max_abs_x = 0.0;
    double max_abs_xdd = 0.0;
    double max_state_norm = 0.0;
    long widenings = 0;
    bool diverged = false;
    bool truth_membership_ok = true;    // theta* consistent at every step
    bool nestedness_ok = true;          // probe points never re-enter
    double total_movement = 0.0;
};

struct RunRecord {
    std::uint64_t master_seed = 0;
    std::string config_tag;
    std::vector<StepRecord> steps;
    std::vector<chase::ChaseStep> chase_steps;  // for offline audits
    RunSummary summary;

    /// FNV-1a over the serialized per-step payload; replay determinism check.
    std::uint64_t record_hash() const;
};

}  // namespace mchase::engine
