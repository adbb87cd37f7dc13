#include "mchase/io/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include "mchase/io/csv.hpp"
#include "mchase/io/svg.hpp"

namespace mchase::io {
namespace fs = std::filesystem;
namespace {

std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

nlohmann::json run_to_json(const BenchRun& r) {
    nlohmann::json j;
    j["index"] = r.index;
    j["M"] = r.params.M;
    j["m"] = r.params.m;
    j["l"] = r.params.l;
    j["b_x"] = r.params.b_x;
    j["b_theta"] = r.params.b_theta;
    j["noise_mult"] = r.noise_mult;
    j["seed_index"] = r.seed_index;
    j["clairvoyant"] = r.clairvoyant;
    j["seed"] = r.seed;
    j["completion_time_s"] = r.completion_time_s;
    j["mistakes"] = r.mistakes;
    j["safety_violations"] = r.safety_violations;
    j["max_abs_x"] = r.max_abs_x;
    j["max_abs_xdd"] = r.max_abs_xdd;
    j["truth_membership_ok"] = r.truth_membership_ok;
    j["nestedness_ok"] = r.nestedness_ok;
    j["diverged"] = r.diverged;
    j["widenings"] = r.widenings;
    j["series_dt"] = r.series_dt;
    j["x_series"] = r.x_series;
    j["xdd_series"] = r.xdd_series;
    return j;
}

bool run_from_json(const nlohmann::json& j, BenchRun& r) {
    try {
        r.completion_time_s = j.at("completion_time_s").get<double>();
        r.mistakes = j.at("mistakes").get<long>();
        r.safety_violations = j.at("safety_violations").get<long>();
        r.max_abs_x = j.at("max_abs_x").get<double>();
        r.max_abs_xdd = j.at("max_abs_xdd").get<double>();
        r.truth_membership_ok = j.at("truth_membership_ok").get<bool>();
        r.nestedness_ok = j.at("nestedness_ok").get<bool>();
        r.diverged = j.at("diverged").get<bool>();
        r.widenings = j.at("widenings").get<long>();
        r.series_dt = j.at("series_dt").get<double>();
        r.x_series = j.at("x_series").get<std::vector<double>>();
        r.xdd_series = j.at("xdd_series").get<std::vector<double>>();
        return true;
    } catch (const std::exception&) {
        return false;
    }
}

}  // namespace

std::uint64_t BenchRun::key_hash(std::uint64_t master) const {
    std::uint64_t h = master ^ 0x8f1bbcdcbfa53e0bULL;
    auto fold = [&](double v) { h = mix(h ^ std::hash<double>{}(v)); };
    fold(params.M);
    fold(params.m);
    fold(params.l);
    fold(params.b_x);
    fold(params.b_theta);
    fold(noise_mult);
    fold(static_cast<double>(seed_index));
    fold(clairvoyant ? 1.0 : 0.0);
    return h;
}

BenchReport run_bench(const GridSpec& grid, std::uint64_t master_seed, int jobs,
                      const std::string& out_dir, bool quiet) {
    BenchReport rep;

    long cell = 0;
    for (double M : grid.M)
        for (double m : grid.m)
            for (double l : grid.l)
                for (double bx : grid.b_x)
                    for (double bth : grid.b_theta) {
                        for (size_t ni = 0; ni < grid.noise_multipliers.size(); ++ni)
                            for (int si = 0; si < grid.seeds_per_noise; ++si)
                                for (bool clair : {true, false}) {
                                    BenchRun r;
                                    r.index = static_cast<long>(rep.runs.size());
                                    r.params.M = M;
                                    r.params.m = m;
                                    r.params.l = l;
                                    r.params.b_x = bx;
                                    r.params.b_theta = bth;
                                    r.noise_mult = grid.noise_multipliers[ni];
                                    r.seed_index = si;
                                    r.clairvoyant = clair;
                                    // The oracle twin shares the online run's
                                    // noise realization.
                                    r.seed = mix(master_seed ^ mix(static_cast<std::uint64_t>(cell) * 1000003ULL +
                                                                   ni * 101ULL + static_cast<std::uint64_t>(si)));
                                    rep.runs.push_back(std::move(r));
                                }
                        ++cell;
                    }

    const bool resume = !out_dir.empty();
    fs::path cells_dir;
    if (resume) {
        cells_dir = fs::path(out_dir) / "cells";
        fs::create_directories(cells_dir);
    }

    std::atomic<long> next{0};
    std::atomic<long> done{0};
    std::atomic<long> failures{0};
    std::mutex io_mutex;
    const long total = static_cast<long>(rep.runs.size());

    auto worker = [&]() {
        for (;;) {
            const long i = next.fetch_add(1);
            if (i >= total) return;
            BenchRun& r = rep.runs[static_cast<size_t>(i)];

            fs::path cache;
            if (resume) {
                char name[64];
                std::snprintf(name, sizeof name, "run_%016llx.json",
                              static_cast<unsigned long long>(r.key_hash(master_seed)));
                cache = cells_dir / name;
                if (fs::exists(cache)) {
                    std::ifstream in(cache);
                    nlohmann::json j;
                    try {
                        in >> j;
                        if (run_from_json(j, r)) {
                            ++done;
                            continue;
                        }
                    } catch (const std::exception&) {
                        // fall through and recompute
                    }
                }
            }

            try {
                engine::CartPoleEpisodeConfig cfg = grid.base;
                cfg.truth = r.params;
                cfg.noise_mult = r.noise_mult;
                cfg.clairvoyant = r.clairvoyant;
                cfg.horizon_s = grid.horizon_s;
                const auto rec = engine::run_cartpole_episode(cfg, r.seed);
                r.completion_time_s = rec.summary.completion_time_s;
                r.mistakes = rec.summary.mistakes;
                r.safety_violations = rec.summary.safety_violations;
                r.max_abs_x = rec.summary.max_abs_x;
                r.max_abs_xdd = rec.summary.max_abs_xdd;
                r.truth_membership_ok = rec.summary.truth_membership_ok;
                r.nestedness_ok = rec.summary.nestedness_ok;
                r.diverged = rec.summary.diverged;
                r.widenings = rec.summary.widenings;
                const int stride = 10;
                r.series_dt = cfg.ts * stride;
                for (size_t k = 0; k < rec.steps.size(); k += stride) {
                    r.x_series.push_back(rec.steps[k].true_state[0]);
                    r.xdd_series.push_back(std::abs(rec.steps[k].xdd_desired));
                }
            } catch (const std::exception& e) {
                ++failures;
                r.diverged = true;
                std::lock_guard<std::mutex> lk(io_mutex);
                std::fprintf(stderr, "bench: run %ld failed: %s\n", i, e.what());
            }

            if (resume) {
                std::lock_guard<std::mutex> lk(io_mutex);
                std::ofstream outf(cache);
                outf << run_to_json(r).dump() << "\n";
            }
            const long d = ++done;
            if (!quiet && d % 20 == 0) {
                std::lock_guard<std::mutex> lk(io_mutex);
                std::fprintf(stderr, "bench: %ld/%ld\r", d, total);
                std::fflush(stderr);
            }
        }
    };

    std::vector<std::thread> pool;
    for (int j = 0; j < std::max(1, jobs); ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (!quiet) std::fprintf(stderr, "bench: %ld/%ld\n", total, total);
    rep.failures = failures.load();

    // Aggregates: completion fractions per horizon, safety fractions (online
    // runs), quantile fans over the online traces.
    long n_oracle = 0, n_online = 0, safe_ok = 0, xdd_ok = 0;
    rep.fraction_oracle.assign(rep.horizons.size(), 0.0);
    rep.fraction_online.assign(rep.horizons.size(), 0.0);
    size_t series_len = 0;
    for (const auto& r : rep.runs) {
        auto& frac = r.clairvoyant ? rep.fraction_oracle : rep.fraction_online;
        (r.clairvoyant ? n_oracle : n_online) += 1;
        for (size_t h = 0; h < rep.horizons.size(); ++h)
            if (r.completion_time_s >= 0.0 && r.completion_time_s <= rep.horizons[h]) frac[h] += 1.0;
        if (!r.clairvoyant) {
            if (r.safety_violations == 0) ++safe_ok;
            if (r.max_abs_xdd <= grid.base.gains.a_max + 1e-9) ++xdd_ok;
            series_len = std::max(series_len, r.x_series.size());
        }
    }
    for (size_t h = 0; h < rep.horizons.size(); ++h) {
        if (n_oracle > 0) rep.fraction_oracle[h] /= static_cast<double>(n_oracle);
        if (n_online > 0) rep.fraction_online[h] /= static_cast<double>(n_online);
    }
    rep.safety_ok_fraction = n_online > 0 ? static_cast<double>(safe_ok) / n_online : 1.0;
    rep.xdd_ok_fraction = n_online > 0 ? static_cast<double>(xdd_ok) / n_online : 1.0;

    const std::vector<double> qs{0.0, 0.05, 0.5, 0.95, 1.0};
    rep.quantiles.x_quantiles.assign(qs.size(), {});
    rep.quantiles.xdd_quantiles.assign(qs.size(), {});
    for (size_t k = 0; k < series_len; ++k) {
        std::vector<double> xs, as;
        double dt = 0.2;
        for (const auto& r : rep.runs) {
            if (r.clairvoyant || k >= r.x_series.size()) continue;
            xs.push_back(r.x_series[k]);
            as.push_back(r.xdd_series[k]);
            dt = r.series_dt;
        }
        if (xs.empty()) break;
        std::sort(xs.begin(), xs.end());
        std::sort(as.begin(), as.end());
        rep.quantiles.time.push_back(static_cast<double>(k) * dt);
        for (size_t q = 0; q < qs.size(); ++q) {
            const auto pick = [&](const std::vector<double>& v) {
                const size_t idx = static_cast<size_t>(qs[q] * (v.size() - 1) + 0.5);
                return v[std::min(idx, v.size() - 1)];
            };
            rep.quantiles.x_quantiles[q].push_back(pick(xs));
            rep.quantiles.xdd_quantiles[q].push_back(pick(as));
        }
    }
    return rep;
}

nlohmann::json BenchReport::to_json() const {
    nlohmann::json j;
    j["horizons_s"] = horizons;
    j["fraction_complete_oracle"] = fraction_oracle;
    j["fraction_complete_online"] = fraction_online;
    j["safety_ok_fraction"] = safety_ok_fraction;
    j["xdd_ok_fraction"] = xdd_ok_fraction;
    j["failures"] = failures;
    j["runs"] = runs.size();
    long member = 0, nested = 0, online = 0;
    for (const auto& r : runs) {
        if (r.clairvoyant) continue;
        ++online;
        member += r.truth_membership_ok ? 1 : 0;
        nested += r.nestedness_ok ? 1 : 0;
    }
    j["online_runs"] = online;
    j["truth_membership_ok_runs"] = member;
    j["nestedness_ok_runs"] = nested;
    return j;
}

void write_bench_outputs(const BenchReport& rep, const std::string& out_dir, bool svg) {
    fs::create_directories(out_dir);
    {
        std::ofstream csv(fs::path(out_dir) / "bench_runs.csv");
        csv << "index,M,m,l,b_x,b_theta,noise_mult,seed_index,controller,seed,"
               "completion_time_s,mistakes,safety_violations,max_abs_x,max_abs_xdd,"
               "truth_membership_ok,nestedness_ok,diverged,widenings\n";
        for (const auto& r : rep.runs)
            csv << r.index << ',' << r.params.M << ',' << r.params.m << ',' << r.params.l << ','
                << r.params.b_x << ',' << r.params.b_theta << ',' << r.noise_mult << ','
                << r.seed_index << ',' << (r.clairvoyant ? "oracle" : "online") << ',' << r.seed
                << ',' << r.completion_time_s << ',' << r.mistakes << ',' << r.safety_violations
                << ',' << r.max_abs_x << ',' << r.max_abs_xdd << ',' << r.truth_membership_ok
                << ',' << r.nestedness_ok << ',' << r.diverged << ',' << r.widenings << "\n";
    }
    nlohmann::json agg = rep.to_json();
    agg["quantile_time_s"] = rep.quantiles.time;
    agg["x_quantiles"] = rep.quantiles.x_quantiles;
    agg["xdd_quantiles"] = rep.quantiles.xdd_quantiles;
    write_json(agg, (fs::path(out_dir) / "aggregate.json").string());

    if (svg && !rep.quantiles.time.empty()) {
        const char* names[] = {"min", "p05", "median", "p95", "max"};
        const char* colors[] = {"#bbbbbb", "#7aa6d6", "#1f6fb4", "#7aa6d6", "#bbbbbb"};
        std::vector<SvgSeries> xs, as;
        for (int q = 0; q < 5; ++q) {
            xs.push_back({names[q], colors[q], rep.quantiles.time, rep.quantiles.x_quantiles[static_cast<size_t>(q)]});
            as.push_back({names[q], colors[q], rep.quantiles.time, rep.quantiles.xdd_quantiles[static_cast<size_t>(q)]});
        }
        write_svg_chart((fs::path(out_dir) / "fan_cart_position.svg").string(),
                        "cart position quantiles over online runs", xs, {-0.6, 0.6});
        write_svg_chart((fs::path(out_dir) / "fan_desired_accel.svg").string(),
                        "desired acceleration quantiles over online runs", as,
                        {0.5 * plants::kGravity});
    }
}

}  // namespace mchase::io
