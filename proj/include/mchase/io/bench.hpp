#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mchase/io/config.hpp"

namespace mchase::io {

/// One benchmark episode: a grid cell, a noise level, a seed, and whether the
/// clairvoyant oracle or the online scheme ran it.
struct BenchRun {
    long index = 0;
    plants::CartPoleParams params;
    double noise_mult = 0.0;
    int seed_index = 0;
    bool clairvoyant = false;
    std::uint64_t seed = 0;

    double completion_time_s = -1.0;
    long mistakes = 0;
    long safety_violations = 0;
    double max_abs_x = 0.0;
    double max_abs_xdd = 0.0;
    bool truth_membership_ok = true;
    bool nestedness_ok = true;
    bool diverged = false;
    long widenings = 0;

    std::vector<double> x_series;    // downsampled |x| trace
    std::vector<double> xdd_series;  // downsampled |xdd_desired| trace
    double series_dt = 0.0;

    std::uint64_t key_hash(std::uint64_t master) const;
};

struct BenchQuantiles {
    std::vector<double> time;
    std::vector<std::vector<double>> x_quantiles;    // rows: min,5%,50%,95%,max
    std::vector<std::vector<double>> xdd_quantiles;
};

struct BenchReport {
    std::vector<BenchRun> runs;
    std::vector<double> horizons{3.0, 6.0, 12.0, 30.0, 50.0};
    std::vector<double> fraction_oracle;   // completion fraction per horizon
    std::vector<double> fraction_online;
    double safety_ok_fraction = 1.0;       // online runs with |x| within the limit
    double xdd_ok_fraction = 1.0;          // online runs with |xdd| within budget
    long failures = 0;                     // episodes that threw; recorded, not fatal
    BenchQuantiles quantiles;

    nlohmann::json to_json() const;
};

/// Dispatches the grid to a bounded worker pool. When out_dir is nonempty,
/// per-run JSON files make re-running idempotent (completed runs are loaded,
/// not recomputed). Seeds derive from (master, run index), so results do not
/// depend on scheduling.
BenchReport run_bench(const GridSpec& grid, std::uint64_t master_seed, int jobs,
                      const std::string& out_dir, bool quiet = false);

void write_bench_outputs(const BenchReport& rep, const std::string& out_dir, bool svg);

}  // namespace mchase::io
