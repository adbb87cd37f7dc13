// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line with
// the numbers that decided it; the process exits nonzero if any failed.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <string>
#include <thread>
#include <vector>

#include "mchase/chase/consistent.hpp"
#include "mchase/engine/bounds.hpp"
#include "mchase/engine/episode.hpp"
#include "mchase/geom/polytope.hpp"
#include "mchase/io/bench.hpp"
#include "mchase/oracles/cartpole_oracle.hpp"
#include "mchase/oracles/lqr.hpp"
#include "mchase/plants/cartpole.hpp"
#include "mchase/plants/noise.hpp"
#include "mchase/plants/rk4.hpp"

using namespace mchase;
using Eigen::VectorXd;

namespace {

int g_failures = 0;

void verdict(const char* name, bool ok, const std::string& detail) {
    std::printf("[%s] %s: %s\n", ok ? "PASS" : "FAIL", name, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

// ---------------------------------------------------------------- criterion 1
void criterion_scalar_bound() {
    const double bound = engine::scalar_composed_bound(2.0, 1.0);  // ~201.7
    long worst = 0;
    long tail_bad = 0, member_bad = 0, over = 0;
    const auto t0 = std::chrono::steady_clock::now();
    for (std::uint64_t seed = 1; seed <= 500; ++seed) {
        engine::ScalarEpisodeConfig cfg;  // K = [-2,2]x[1,3], eta = rho = 1/e,
        cfg.horizon = 200;                // Steiner SEL, adversarial sign w
        const auto rec = engine::run_scalar_episode(cfg, seed);
        worst = std::max(worst, rec.summary.mistakes);
        if (static_cast<double>(rec.summary.mistakes) > bound) ++over;
        if (rec.summary.terminal_fifth_mistakes != 0) ++tail_bad;
        if (!rec.summary.truth_membership_ok) ++member_bad;
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    verdict("C1 scalar mistake bound", over == 0 && tail_bad == 0,
            fmt("500 runs x 200 steps: worst mistakes %ld <= %.4f, runs over bound %ld, "
                "runs with nonclean terminal fifth %ld (%.1f s)",
                worst, bound, over, tail_bad, secs));
    verdict("C6a scalar truth membership", member_bad == 0,
            fmt("runs with theta* falsified: %ld / 500", member_bad));
}

// ------------------------------------------------------------ criteria 2 + 3
void criterion_bench(const io::BenchReport& rep) {
    const size_t i12 = 2, i50 = 4;  // horizons {3, 6, 12, 30, 50}
    verdict("C2a complete by 50 s",
            rep.fraction_oracle[i50] == 1.0 && rep.fraction_online[i50] == 1.0,
            fmt("oracle %.4f, online %.4f (required 1.0 for both, tolerance 0)",
                rep.fraction_oracle[i50], rep.fraction_online[i50]));
    verdict("C2b online by-12 s fraction", std::abs(rep.fraction_online[i12] - 0.8) <= 0.15,
            fmt("online %.4f (target 0.8 +/- 0.15)", rep.fraction_online[i12]));
    verdict("C2c online <= oracle + 0.05 at 12 s",
            rep.fraction_online[i12] <= rep.fraction_oracle[i12] + 0.05,
            fmt("online %.4f vs oracle %.4f", rep.fraction_online[i12], rep.fraction_oracle[i12]));

    double worst_xdd = 0.0;
    long unsafe = 0, online = 0, member_bad = 0, nested_bad = 0;
    for (const auto& r : rep.runs) {
        worst_xdd = std::max(worst_xdd, r.max_abs_xdd);
        if (!r.clairvoyant) {
            ++online;
            if (r.safety_violations > 0) ++unsafe;
            if (!r.truth_membership_ok) ++member_bad;
            if (!r.nestedness_ok) ++nested_bad;
        }
    }
    (void)unsafe;
    verdict("C3 safety",
            rep.safety_ok_fraction >= 0.98 && worst_xdd <= 0.5 * plants::kGravity + 1e-9,
            fmt("|x| within 0.6 in %.4f of online runs (>= 0.98); max |xdd_d| %.6f <= %.6f over "
                "every step of every run",
                rep.safety_ok_fraction, worst_xdd, 0.5 * plants::kGravity));
    verdict("C6b cart-pole truth membership & nestedness", member_bad == 0 && nested_bad == 0,
            fmt("online runs: membership falsified %ld, nestedness broken %ld (of %ld)",
                member_bad, nested_bad, online));
}

// ---------------------------------------------------------------- criterion 4
void criterion_steiner_competitiveness() {
    const int dim = 3;
    plants::RngStream rng(424242, 31);
    const auto dirs = geom::DirectionSet::make(dim, 256, 20252025);
    int bad_dh = 0, bad_diam = 0;
    double worst_ratio_dh = 0.0, worst_ratio_diam = 0.0;
    const auto t0 = std::chrono::steady_clock::now();

    chase::RegressorSpec triv;
    triv.n_out = 1;
    triv.n_param = dim;
    triv.features = [](const VectorXd&, const VectorXd&) { return Eigen::MatrixXd::Zero(1, 3); };
    triv.target = [](const VectorXd&, const VectorXd&, const VectorXd&) {
        return VectorXd::Zero(1);
    };
    triv.noise_row_param = {-1};
    triv.fixed_noise = VectorXd::Zero(1);

    for (int stream = 0; stream < 100; ++stream) {
        chase::ConsistentState cs(geom::Box::cube(dim, -1.0, 1.0), triv, dirs);
        VectorXd survivor(dim);
        for (int i = 0; i < dim; ++i) survivor[i] = rng.uniform(-0.5, 0.5);

        const VectorXd h_first = *cs.supports();
        const double diam0 = geom::diameter_from_supports(dirs, h_first);
        VectorXd prev = cs.sel_steiner();
        double path = 0.0;
        for (int t = 0; t < 20; ++t) {
            VectorXd a(dim);
            double nn = 0.0;
            do {
                for (int i = 0; i < dim; ++i) a[i] = rng.uniform(-1.0, 1.0);
                nn = a.norm();
            } while (nn < 1e-3);
            a /= nn;
            cs.update_raw({geom::Halfspace(a, a.dot(survivor) + rng.uniform(0.02, 0.5))});
            const VectorXd now = cs.sel_steiner();
            path += (now - prev).norm();
            prev = now;
        }
        const double dh = (h_first - *cs.supports()).cwiseAbs().maxCoeff();
        if (dh > 1e-12) {
            const double r1 = path / (dim * dh);
            worst_ratio_dh = std::max(worst_ratio_dh, r1);
            if (r1 > 1.05) ++bad_dh;
        }
        const double r2 = path / (0.5 * dim * diam0);
        worst_ratio_diam = std::max(worst_ratio_diam, r2);
        if (r2 > 1.05) ++bad_diam;
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    verdict("C4 Steiner competitiveness", bad_dh == 0 && bad_diam == 0,
            fmt("100 nested streams in R^3, len 20: worst path/(n d_H) %.4f, worst "
                "path/((n/2) diam) %.4f, cap 1.05 (%.1f s)",
                worst_ratio_dh, worst_ratio_diam, secs));
}

// ---------------------------------------------------------------- criterion 5
void criterion_weak_projection() {
    // Scalar benchmark streams driven through the projection selector, with
    // the set distance recomputed independently (tight tolerance) per step.
    double worst_gap = -1e9;
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        engine::ScalarEpisodeConfig cfg;
        chase::RegressorSpec spec;
        spec.n_out = 1;
        spec.n_param = 2;
        spec.features = [](const VectorXd& x, const VectorXd& u) {
            Eigen::MatrixXd psi(1, 2);
            psi << x[0], u[0];
            return psi;
        };
        spec.target = [](const VectorXd& xn, const VectorXd&, const VectorXd&) {
            return VectorXd::Constant(1, xn[0]);
        };
        spec.noise_row_param = {-1};
        spec.fixed_noise = VectorXd::Constant(1, cfg.eta);
        chase::ConsistentState cs(geom::Box(Eigen::Vector2d(-2, 1), Eigen::Vector2d(2, 3)), spec,
                                  geom::DirectionSet::make(2, 256, 20252025));

        plants::RngStream prng(seed, 1);
        const Eigen::Vector2d truth(prng.uniform(-2, 2), prng.uniform(1, 3));
        double x = 0.0;
        VectorXd prev = cs.sel_weak_projection();
        for (int t = 0; t < 200; ++t) {
            const double u = -(prev[0] / prev[1]) * x;
            const double w = x >= 0.0 ? cfg.eta : -cfg.eta;
            const double xn = truth[0] * x + truth[1] * u + w;
            chase::DataPoint d;
            d.t = t;
            d.x = VectorXd::Constant(1, x);
            d.u = VectorXd::Constant(1, u);
            d.x_next = VectorXd::Constant(1, xn);
            cs.update(d);
            const double dist = (geom::project(cs.polytope(), prev, 1e-10) - prev).norm();
            const VectorXd sel = cs.sel_weak_projection();
            worst_gap = std::max(worst_gap, (sel - prev).norm() - dist);
            prev = sel;
            x = xn;
        }
    }
    verdict("C5 weak-projection contract", worst_gap <= 1e-6,
            fmt("60 scalar benchmark streams x 200 steps: worst movement - set distance = %.3e "
                "(cap 1e-6)",
                worst_gap));
}

// ---------------------------------------------------------------- criterion 7
void criterion_numerics() {
    // RK4 order
    plants::CartPoleParams p;
    p.M = 1.2;
    p.m = 0.3;
    p.l = 0.6;
    plants::RngStream rng(5, 9);
    std::vector<double> ratios;
    for (int i = 0; i < 24; ++i) {
        VectorXd st(4);
        st << rng.uniform(-0.3, 0.3), rng.uniform(-3, 3), rng.uniform(-1, 1), rng.uniform(-3, 3);
        const double F = rng.uniform(-10, 10);
        auto ode = [&](const VectorXd& s) { return plants::cartpole_ode(s, F, p); };
        const VectorXd ref = plants::rk4_zoh_step(ode, st, 0.08, 512);
        const double e1 = (plants::rk4_zoh_step(ode, st, 0.08, 2) - ref).norm();
        const double e2 = (plants::rk4_zoh_step(ode, st, 0.08, 4) - ref).norm();
        if (e1 > 1e-13 && e2 > 1e-14) ratios.push_back(e1 / e2);
    }
    std::sort(ratios.begin(), ratios.end());
    const double med = ratios[ratios.size() / 2];
    const bool rk4_ok = med > 16.0 * 0.7 && med < 16.0 * 1.3;

    // energy conservation over 10 s
    plants::CartPoleParams nom;
    auto ode = [&](const VectorXd& s) { return plants::cartpole_ode(s, 0.0, nom); };
    VectorXd st(4);
    st << 0.0, 2.6, 0.3, 0.0;
    auto energy = [&](const VectorXd& s) {
        const double ke = 0.5 * (nom.M + nom.m) * s[2] * s[2] +
                          0.5 * nom.m * nom.l * nom.l * s[3] * s[3] -
                          nom.m * nom.l * s[2] * s[3] * std::cos(s[1]);
        return ke + nom.m * nom.g * nom.l * std::cos(s[1]);
    };
    const double e0 = energy(st);
    double drift = 0.0;
    for (int t = 0; t < 500; ++t) {
        st = plants::rk4_zoh_step(ode, st, 0.02, 10);
        drift = std::max(drift, std::abs(energy(st) - e0));
    }
    const double rel_drift = drift / std::max(std::abs(e0), nom.m * nom.g * nom.l);
    const bool energy_ok = rel_drift < 1e-5;

    // LQR spectral abscissa over the full grid
    double worst_absc = -1e9;
    oracles::CartPoleGains g;
    for (double M : {1.0, 2.0, 4.0})
        for (double m : {0.1, 0.2, 0.4})
            for (double l : {0.1, 0.2, 0.4, 0.6, 1.0})
                for (double bx : {0.0, 10.0}) {
                    plants::CartPoleParams q;
                    q.M = M;
                    q.m = m;
                    q.l = l;
                    q.b_x = bx;
                    Eigen::Matrix4d a;
                    Eigen::Vector4d b;
                    oracles::CartPoleOracle::upright_linearization(q, a, b);
                    const Eigen::MatrixXd k = oracles::lqr_gain(
                        a, b, g.lqr_q.asDiagonal(), Eigen::MatrixXd::Constant(1, 1, g.lqr_r));
                    worst_absc = std::max(worst_absc, oracles::spectral_abscissa(a - b * k));
                }
    const bool lqr_ok = worst_absc < -1e-6;

    // Steiner of the triangle
    geom::Polytope tri(geom::Box::cube(2, 0.0, 1.0));
    tri.append(geom::Halfspace(Eigen::Vector2d(1, 1), 1.0));
    const auto dirs = geom::DirectionSet::make(2, 256, 20252025);
    const VectorXd s2 = geom::steiner(tri, dirs);
    const double tol = 3.0 / std::sqrt(256.0);
    const bool steiner_ok = std::abs(s2[0] - 0.375) < tol && std::abs(s2[1] - 0.375) < tol;

    // Hausdorff of nested boxes
    const auto d2k = geom::DirectionSet::make(2, 2000, 5);
    geom::Polytope big(geom::Box::cube(2, -2.0, 2.0));
    geom::Polytope small_box(geom::Box::cube(2, -1.0, 1.0));
    const double dh = geom::hausdorff(big, small_box, d2k);
    const bool dh_ok = std::abs(dh - std::sqrt(2.0)) / std::sqrt(2.0) < 0.02;

    verdict("C7 numerics suite", rk4_ok && energy_ok && lqr_ok && steiner_ok && dh_ok,
            fmt("rk4 median ratio %.2f (16 +/- 30%%); energy drift %.2e (< 1e-5); grid LQR "
                "abscissa %.4f (< -1e-6); steiner (%.4f, %.4f) within %.4f of (0.375, 0.375); "
                "hausdorff %.4f vs sqrt(2) within 2%%",
                med, rel_drift, worst_absc, s2[0], s2[1], tol, dh));
}

// ---------------------------------------------------------------- criterion 8
void criterion_bound_values() {
    const double b1 = engine::bound_thm1(5.0, 1.0, 0.5, 2.0);
    const double r = engine::thm2_r_star(0.5, 1.0, 1.0, 4.0);
    const double sb = engine::scalar_composed_bound(2.0, 1.0);
    const double expect = 8.0 * std::exp(1.0) * 9.0 + 6.0;
    const bool ok = b1 == 45.0 && r == 0.05 && std::abs(sb - expect) <= 1e-9;
    verdict("C8 bound calculators", ok,
            fmt("thm1(5,1,0.5,2) = %.17g (45 exact); r*(0.5,1,1,4) = %.17g (0.05 exact); "
                "composed scalar bound %.12f vs 8e*9+6 = %.12f (|diff| <= 1e-9)",
                b1, r, sb, expect));
}

}  // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    std::printf("acceptance suite\n================\n");

    criterion_bound_values();
    criterion_numerics();
    criterion_scalar_bound();
    criterion_steiner_competitiveness();
    criterion_weak_projection();

    const int jobs = std::max(2u, std::thread::hardware_concurrency());
    io::GridSpec grid;  // Table-4 test grid x noise multipliers {0, 1, 5}
    std::printf("running the 90-cell benchmark grid x %ld runs/cell x {oracle, online} "
                "(%d workers)...\n",
                grid.runs_per_cell(), jobs);
    std::fflush(stdout);
    const auto rep = io::run_bench(grid, 2025, jobs, "", true);
    std::printf("T [s]              ");
    for (double h : rep.horizons) std::printf("%8.0f", h);
    std::printf("\npi[theta*]         ");
    for (double f : rep.fraction_oracle) std::printf("%8.3f", f);
    std::printf("\nA_pi(SEL)          ");
    for (double f : rep.fraction_online) std::printf("%8.3f", f);
    std::printf("\n");
    criterion_bench(rep);

    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("================\n%s (%d failed) in %.1f s\n",
                g_failures == 0 ? "ALL CRITERIA PASSED" : "CRITERIA FAILED", g_failures, secs);
    return g_failures == 0 ? 0 : 1;
}
