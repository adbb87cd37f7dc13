#include <cstdio>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"

#include "mchase/chase/audit.hpp"
#include "mchase/chase/consistent.hpp"
#include "mchase/engine/bounds.hpp"
#include "mchase/oracles/deadbeat.hpp"
#include "mchase/engine/episode.hpp"
#include "mchase/io/bench.hpp"
#include "mchase/io/csv.hpp"
#include "mchase/io/svg.hpp"
#include "mchase/plants/noise.hpp"

namespace fs = std::filesystem;
using namespace mchase;

namespace {

int cmd_run(const std::string& config_path, std::uint64_t seed_override, bool have_seed,
            const std::string& out_dir, bool svg_flag) {
    io::RunConfig cfg;
    try {
        cfg = io::RunConfig::from_file(config_path);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    const std::uint64_t seed = have_seed ? seed_override : cfg.seed;

    engine::RunRecord rec;
    try {
        if (cfg.plant == "scalar") rec = engine::run_scalar_episode(cfg.scalar, seed);
        else if (cfg.plant == "cartpole") rec = engine::run_cartpole_episode(cfg.cartpole, seed);
        else rec = engine::run_arm_episode(cfg.arm, seed);
    } catch (const std::exception& e) {
        std::cerr << "run failed: " << e.what() << "\n";
        return 3;
    }

    fs::create_directories(out_dir);
    io::write_run_csv(rec, (fs::path(out_dir) / "run.csv").string());
    nlohmann::json summary = io::summary_json(rec);

    if (cfg.plant == "scalar") {
        const double diam = 2.0 * (cfg.scalar.a + cfg.scalar.b_delta);
        const double rho = cfg.scalar.eta;  // the study's margin choice rho = eta
        nlohmann::json bounds;
        bounds["bound_thm4"] = engine::scalar_composed_bound(cfg.scalar.a, cfg.scalar.b_delta);
        bounds["gamma_inf"] =
            engine::gamma_inf(1.0, 1.0, diam, cfg.scalar.eta, std::abs(cfg.scalar.x0));
        if (rho > 0.0 && rho < 1.0 - cfg.scalar.eta) {
            oracles::OracleSpec spec;
            spec.rho = rho;
            spec.robustness = oracles::RobustnessClass::LocallyUniformlyRobust;
            spec.mistake_slope = 1.0 / std::log(1.0 / rho);
            spec.mistake_intercept = oracles::deadbeat_mistake_function(rho, cfg.scalar.eta, 1.0);
            spec.alpha = 1.0;
            spec.beta = cfg.scalar.eta;
            bounds["thm4_exact"] = engine::bound_thm4(spec, 1.0, diam, std::abs(cfg.scalar.x0));
        }
        summary["bounds"] = bounds;
    }
    io::write_json(summary, (fs::path(out_dir) / "summary.json").string());

    if (svg_flag || cfg.svg) {
        std::vector<double> tt, x0s, x1s;
        for (const auto& st : rec.steps) {
            tt.push_back(st.time_s);
            x0s.push_back(st.true_state[0]);
            if (st.true_state.size() > 1) x1s.push_back(std::remainder(st.true_state[1], 2 * M_PI));
        }
        std::vector<io::SvgSeries> series{{"state[0]", "#1f6fb4", tt, x0s}};
        if (!x1s.empty()) series.push_back({"angle (wrapped)", "#b46a1f", tt, x1s});
        const std::vector<double> lines =
            cfg.plant == "scalar" ? std::vector<double>{-1.0, 1.0} : std::vector<double>{-0.6, 0.6};
        io::write_svg_chart((fs::path(out_dir) / "trajectory.svg").string(), "trajectory", series,
                            lines);
    }
    std::cout << summary.dump(2) << "\n";
    return rec.summary.diverged ? 3 : 0;
}

int cmd_bench(const std::string& grid_path, std::uint64_t master, int jobs,
              const std::string& out_dir, bool svg_flag, bool full_grid) {
    io::GridSpec grid;
    try {
        if (!grid_path.empty()) grid = io::GridSpec::from_file(grid_path);
    } catch (const std::exception& e) {
        std::cerr << "grid error: " << e.what() << "\n";
        return 2;
    }
    if (full_grid) grid.seeds_per_noise = std::max(grid.seeds_per_noise, 3);  // ~10 runs per cell

    const auto rep = io::run_bench(grid, master, jobs, out_dir);
    io::write_bench_outputs(rep, out_dir, svg_flag);

    std::printf("%-22s", "T [s]");
    for (double h : rep.horizons) std::printf("%8.0f", h);
    std::printf("\n%-22s", "pi[theta*] fraction");
    for (double f : rep.fraction_oracle) std::printf("%8.3f", f);
    std::printf("\n%-22s", "A_pi(SEL) fraction");
    for (double f : rep.fraction_online) std::printf("%8.3f", f);
    std::printf("\nsafety ok fraction (online): %.4f\n", rep.safety_ok_fraction);
    std::printf("accel budget ok fraction (online): %.4f\n", rep.xdd_ok_fraction);
    if (rep.failures > 0) std::printf("failed episodes: %ld\n", rep.failures);
    return 0;
}

int cmd_chase_demo(int dim, int steps, int streams, std::uint64_t seed) {
    using chase::ChaseStep;
    const geom::Metric d2 = geom::Metric::euclidean();
    plants::RngStream rng(seed, 31);

    double worst_c_steiner = 0.0, worst_lemma = 0.0, worst_halfdiam = 0.0, worst_d_greedy = 0.0;
    int counted = 0;
    for (int s = 0; s < streams; ++s) {
        chase::RegressorSpec triv;
        triv.n_out = 1;
        triv.n_param = dim;
        triv.features = [dim](const Eigen::VectorXd&, const Eigen::VectorXd&) {
            return Eigen::MatrixXd::Zero(1, dim);
        };
        triv.target = [](const Eigen::VectorXd&, const Eigen::VectorXd&, const Eigen::VectorXd&) {
            return Eigen::VectorXd::Zero(1);
        };
        triv.noise_row_param = {-1};
        triv.fixed_noise = Eigen::VectorXd::Zero(1);

        const auto dirs = geom::DirectionSet::make(dim, 256, 20252025);
        chase::ConsistentState steiner(geom::Box::cube(dim, -1.0, 1.0), triv, dirs);
        chase::ConsistentState greedy(geom::Box::cube(dim, -1.0, 1.0), triv, dirs);
        chase::ConsistentState weak(geom::Box::cube(dim, -1.0, 1.0), triv, dirs);

        Eigen::VectorXd survivor(dim);
        for (int i = 0; i < dim; ++i) survivor[i] = rng.uniform(-0.5, 0.5);

        std::vector<ChaseStep> tr_s{{steiner.sel_steiner(), steiner.supports()}};
        std::vector<ChaseStep> tr_p{{greedy.sel_greedy(), greedy.supports()}};
        std::vector<ChaseStep> tr_w{{weak.sel_weak_projection(), weak.supports()}};
        const double diam0 = geom::diameter(steiner.polytope(), steiner.directions());

        for (int t = 0; t < steps; ++t) {
            Eigen::VectorXd a(dim);
            double nn = 0.0;
            do {
                for (int i = 0; i < dim; ++i) a[i] = rng.uniform(-1.0, 1.0);
                nn = a.norm();
            } while (nn < 1e-3);
            a /= nn;
            const double b = a.dot(survivor) + rng.uniform(0.02, 0.5);
            const std::vector<geom::Halfspace> hs{geom::Halfspace(a, b)};
            steiner.update_raw(hs);
            greedy.update_raw(hs);
            weak.update_raw(hs);
            tr_s.push_back({steiner.sel_steiner(), steiner.supports()});
            tr_p.push_back({greedy.sel_greedy(), greedy.supports()});
            tr_w.push_back({weak.sel_weak_projection(), weak.supports()});
        }

        const auto rep_s = chase::chasing_audit(tr_s, d2, 1);
        const auto rep_p = chase::chasing_audit(tr_p, d2, 1);
        if (rep_s.ratio_defined) {
            ++counted;
            worst_c_steiner = std::max(worst_c_steiner, rep_s.ratio_all_intervals);
            const double dh = (*tr_s.front().supports - *tr_s.back().supports).cwiseAbs().maxCoeff();
            if (dh > 1e-9) {
                worst_lemma = std::max(worst_lemma, rep_s.total_movement / (dim * dh));
                worst_halfdiam = std::max(worst_halfdiam, rep_s.total_movement / (0.5 * dim * diam0));
            }
            worst_d_greedy = std::max(worst_d_greedy, rep_p.ratio_windows);
        }
    }
    std::printf("chase-demo: dim=%d steps=%d streams=%d (counted %d)\n", dim, steps, streams, counted);
    std::printf("  steiner worst (C)-ratio:          %8.4f   (gamma_s = n/2 = %.1f)\n",
                worst_c_steiner, dim / 2.0);
    std::printf("  steiner path / (n d_H):           %8.4f   (Lemma cap 1)\n", worst_lemma);
    std::printf("  steiner path / (n/2 diam K_1):    %8.4f   (Lemma cap 1)\n", worst_halfdiam);
    std::printf("  greedy worst (D)-ratio (T=1):     %8.4f   (cap 1)\n", worst_d_greedy);
    std::printf("  estimator slack: 3/sqrt(M) = %.4f\n", 3.0 / std::sqrt(256.0));
    return 0;
}

int cmd_bounds(double m_rho, double gamma, double rho, double diam, double alpha, double beta,
               double x0, double T, int dim, double lo, double hi) {
    const geom::Box box = geom::Box::cube(dim, lo, hi);
    const geom::Metric metric = geom::Metric::euclidean();
    oracles::OracleSpec spec;
    spec.rho = rho;
    spec.robustness = oracles::RobustnessClass::UniformlyRobust;
    spec.mistake_intercept = m_rho;
    spec.alpha = alpha;
    spec.beta = beta;
    const auto rep = engine::make_bound_report(spec, gamma, T, box, metric, x0, -1.0, -1.0);
    nlohmann::json j = rep.to_json();
    j["diam_argument"] = diam;
    j["thm1_at_diam"] = engine::bound_thm1(m_rho, gamma, rho, diam);
    j["r_star"] = engine::thm2_r_star(rho, gamma, T, m_rho);
    std::cout << j.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"online robust control with consistent-model chasing"};
    app.require_subcommand(1);

    std::string config_path, grid_path, out_dir = "out";
    std::uint64_t seed = 1;
    bool have_seed = false, svg = false, full_grid = false;
    int jobs = 2;

    auto* run = app.add_subcommand("run", "run a single episode from a config file");
    run->add_option("--config", config_path, "JSON config")->required();
    run->add_option("--seed", seed, "master seed")->each([&](const std::string&) { have_seed = true; });
    run->add_option("--out", out_dir, "output directory");
    run->add_flag("--svg", svg, "emit trajectory.svg");

    auto* bench = app.add_subcommand("bench", "run the cart-pole benchmark grid");
    bench->add_option("--grid", grid_path, "JSON grid spec (defaults to the test grid)");
    bench->add_option("--seed", seed, "master seed");
    bench->add_option("--jobs", jobs, "worker threads");
    bench->add_option("--out", out_dir, "output directory (enables resume)");
    bench->add_flag("--svg", svg, "emit quantile-fan SVGs");
    bench->add_flag("--full-grid", full_grid, "3 seeds per noise level (~10 runs/cell)");

    int dim = 3, steps = 20, streams = 100;
    auto* demo = app.add_subcommand("chase-demo", "audit the selectors on nested polytope streams");
    demo->add_option("--dim", dim, "ambient dimension");
    demo->add_option("--steps", steps, "stream length");
    demo->add_option("--streams", streams, "number of random streams");
    demo->add_option("--seed", seed, "stream seed");

    double m_rho = 5.0, gamma = 1.0, rho = 0.5, diam = 2.0, alpha = 1.0, beta = 0.368, x0 = 0.0,
           T = 1.0, lo = 0.0, hi = 1.0;
    int bdim = 2;
    auto* bounds = app.add_subcommand("bounds", "print the guarantee values for given constants");
    bounds->add_option("--m", m_rho, "mistake constant M");
    bounds->add_option("--gamma", gamma, "competitive ratio");
    bounds->add_option("--rho", rho, "robustness margin");
    bounds->add_option("--diam", diam, "parameter-space diameter");
    bounds->add_option("--alpha", alpha, "single-step alpha");
    bounds->add_option("--beta", beta, "single-step beta");
    bounds->add_option("--x0", x0, "initial state norm");
    bounds->add_option("--T", T, "weak-competitiveness window");
    bounds->add_option("--dim", bdim, "packing box dimension");
    bounds->add_option("--lo", lo, "packing box lower bound");
    bounds->add_option("--hi", hi, "packing box upper bound");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(config_path, seed, have_seed, out_dir, svg);
        if (bench->parsed()) return cmd_bench(grid_path, seed, jobs, out_dir, svg, full_grid);
        if (demo->parsed()) return cmd_chase_demo(dim, steps, streams, seed);
        if (bounds->parsed())
            return cmd_bounds(m_rho, gamma, rho, diam, alpha, beta, x0, T, bdim, lo, hi);
    } catch (const io::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
