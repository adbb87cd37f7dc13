#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "helpers.hpp"
#include "mchase/engine/bounds.hpp"
#include "mchase/engine/episode.hpp"
#include "mchase/engine/probes.hpp"

using namespace mchase;
using namespace mchase::engine;
using Eigen::Vector2d;
using Eigen::VectorXd;

namespace {
const double kE = std::exp(1.0);
}

TEST_CASE("bound_thm1: arithmetic and the degenerate diameter") {
    CHECK(bound_thm1(5.0, 1.0, 0.5, 2.0) == doctest::Approx(45.0).epsilon(1e-15));
    CHECK(bound_thm1(7.0, 1.0, 0.5, 0.0) == doctest::Approx(7.0));
    CHECK_THROWS(bound_thm1(0.0, 1.0, 0.5, 1.0));
}

TEST_CASE("thm2: r* arithmetic, singleton and interval brackets") {
    CHECK(thm2_r_star(0.5, 1.0, 1.0, 4.0) == doctest::Approx(0.05).epsilon(1e-15));

    const geom::Metric eu = geom::Metric::euclidean();
    const geom::Box point(VectorXd::Constant(1, 0.3), VectorXd::Constant(1, 0.3));
    const auto b_point = bound_thm2(3.0, 1.0, 0.5, 1.0, point, eu);
    CHECK(b_point.first == doctest::Approx(6.0));   // N = 1 exactly
    CHECK(b_point.second == doctest::Approx(6.0));

    // 1-D K = [0,1] with r* = 0.3: grid packing gives N >= 3.
    const geom::Box seg(VectorXd::Constant(1, 0.0), VectorXd::Constant(1, 1.0));
    const auto n = geom::packing_bounds(seg, 0.3, eu);
    CHECK(n.lower >= 3);
    double m = 4.0;
    // pick rho, gamma, T so that r* lands at 0.3 for this m
    const double rho = 0.3 * 2.0 * (m + 1.0) / 1.0;
    const auto br = bound_thm2(m, 1.0, rho, 1.0, seg, eu);
    CHECK(thm2_r_star(rho, 1.0, 1.0, m) == doctest::Approx(0.3));
    CHECK(br.first >= m * 4.0);
    CHECK(br.first <= br.second);
}

TEST_CASE("thm3 envelope: collapse, limit, and the scalar gamma_inf") {
    CHECK(thm3_envelope(1.0, 1.0, 0.0, 0.0, 3.0, 2.0) == doctest::Approx(3.0 * std::exp(-2.0)));
    CHECK(thm3_envelope_limit(1.0, 1.0, 0.0, 1.0) == doctest::Approx(kE / (kE - 1.0)));
    for (double phi : {2.0, 6.0}) {
        const double gi = gamma_inf(1.0, 1.0, phi, 1.0 / kE, 0.0);
        CHECK(gi == doctest::Approx((kE / (kE - 1.0)) * std::exp(phi - 1.0)).epsilon(1e-12));
    }
}

TEST_CASE("thm4 composition and the published scalar closed form") {
    CHECK(scalar_composed_bound(2.0, 1.0) == doctest::Approx(8.0 * kE * 9.0 + 6.0).epsilon(1e-12));

    // Exact composition for the deadbeat oracle at rho = eta = 1/e, x0 = 0:
    // M(gamma_inf) = phi - log(e-2), times (2 e phi + 1).
    oracles::OracleSpec spec;
    spec.rho = 1.0 / kE;
    spec.mistake_slope = 1.0;  // 1 / log(1/rho)
    spec.mistake_intercept = std::log((kE - 1.0) / (kE - 2.0));
    spec.alpha = 1.0;
    spec.beta = 1.0 / kE;
    const double phi = 6.0;
    const double expect = (phi - std::log(kE - 2.0)) * (2.0 * kE * phi + 1.0);
    CHECK(bound_thm4(spec, 1.0, phi, 0.0) == doctest::Approx(expect).epsilon(1e-12));

    // diam = 0, x0 = 0 collapses to the mistake function at beta e/(e-1).
    const double collapse = spec.mistake_at(spec.beta * kE / (kE - 1.0));
    CHECK(bound_thm4(spec, 1.0, 0.0, 0.0) == doctest::Approx(collapse));
}

TEST_CASE("bound report: certified hypotheses flag violations") {
    oracles::OracleSpec spec;
    spec.rho = 0.5;
    spec.robustness = oracles::RobustnessClass::UniformlyRobust;
    spec.mistake_intercept = 3.0;
    spec.alpha = 1.0;
    spec.beta = 0.2;
    spec.cost_invariant = true;
    const geom::Box box = geom::Box::cube(2, -1.0, 1.0);
    const auto rep = make_bound_report(spec, 1.0, 1.0, box, geom::Metric::euclidean(),
                                       0.0, 10.0, 2.0);
    CHECK(rep.hypotheses_certified);
    CHECK(rep.thm1 == doctest::Approx(3.0 * (8.0 * std::sqrt(2.0) + 1.0)));
    CHECK_FALSE(rep.violated_thm1);
    const auto bad = make_bound_report(spec, 1.0, 1.0, box, geom::Metric::euclidean(),
                                       0.0, 1e6, 2.0);
    CHECK(bad.violated_thm1);
}

TEST_CASE("scalar episode: zero horizon, immediate satisfaction, determinism") {
    ScalarEpisodeConfig cfg;
    cfg.horizon = 0;
    auto rec = run_scalar_episode(cfg, 7);
    CHECK(rec.steps.empty());
    CHECK(rec.summary.mistakes == 0);

    cfg.horizon = 1;
    cfg.x0 = 0.5;
    rec = run_scalar_episode(cfg, 7);
    CHECK(rec.summary.mistakes == 0);

    cfg.horizon = 120;
    const auto r1 = run_scalar_episode(cfg, 99);
    const auto r2 = run_scalar_episode(cfg, 99);
    CHECK(r1.record_hash() == r2.record_hash());
    const auto r3 = run_scalar_episode(cfg, 100);
    CHECK(r1.record_hash() != r3.record_hash());
}

TEST_CASE("scalar episodes: bound, tail, membership, selection validity, envelope") {
    const double bound = scalar_composed_bound(2.0, 1.0);
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        ScalarEpisodeConfig cfg;
        auto rec = run_scalar_episode(cfg, seed);
        CHECK_FALSE(rec.summary.diverged);
        CHECK(rec.summary.mistakes <= static_cast<long>(bound));
        CHECK(rec.summary.terminal_fifth_mistakes == 0);
        CHECK(rec.summary.truth_membership_ok);
        // Thm 3(i) envelope with alpha=1, beta=eta, gamma=1, phi(K)=2(a+b_D).
        const double env_limit = thm3_envelope_limit(1.0, 1.0, 6.0, cfg.eta);
        for (const auto& st : rec.steps) {
            CHECK(std::abs(st.true_state[0]) <=
                  thm3_envelope(1.0, 1.0, 6.0, cfg.eta, 0.0, static_cast<double>(st.t)) + 1e-9);
        }
        CHECK(rec.summary.max_state_norm <= env_limit + 1e-9);
    }
}

TEST_CASE("weak-projection selector satisfies the per-step contract on scalar runs") {
    ScalarEpisodeConfig cfg;
    cfg.sel = SelKind::WeakProjection;
    cfg.horizon = 150;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto rec = run_scalar_episode(cfg, seed);
        CHECK_FALSE(rec.summary.diverged);
        CHECK(rec.summary.terminal_fifth_mistakes == 0);
    }
}

TEST_CASE("scalar probe: deadbeat baseline, margin overrun, cost invariance") {
    ScalarProbeConfig cfg;
    cfg.rho = 0.0;
    cfg.eta = 0.0;
    cfg.x0 = 5.0;
    cfg.horizon = 50;
    auto rep = robustness_probe_scalar(cfg, 50, 3);
    CHECK(rep.worst_mistakes == 1);  // one mistake at t = 0, then deadbeat
    CHECK_FALSE(rep.divergence);

    ScalarProbeConfig wide;
    wide.eta = 1.0 / kE;
    wide.rho = 1.4 * (1.0 - wide.eta);  // beyond the contraction margin
    wide.adversarial_params = true;
    wide.horizon = 400;
    rep = robustness_probe_scalar(wide, 60, 4);
    CHECK((rep.divergence || rep.worst_mistakes > 100));

    ScalarProbeConfig inside;  // same adversary inside the margin stays finite
    inside.eta = 1.0 / kE;
    inside.rho = 0.8 * (1.0 - inside.eta);
    inside.adversarial_params = true;
    inside.horizon = 400;
    rep = robustness_probe_scalar(inside, 60, 4);
    CHECK_FALSE(rep.divergence);
    CHECK(rep.worst_mistakes < 100);

    ScalarProbeConfig inv;
    inv.eta = 1.0 / kE;
    inv.rho = 1.0 / kE;  // rho + eta < 1: the target interval is invariant
    inv.x0_in_target = true;
    inv.declared_cost_invariant = true;
    inv.horizon = 200;
    rep = robustness_probe_scalar(inv, 100, 5);
    CHECK_FALSE(rep.cost_invariance_falsified);
    CHECK(rep.worst_mistakes == 0);
}

TEST_CASE("interval audit: zero-information and full-run endpoints") {
    ScalarEpisodeConfig cfg;
    cfg.horizon = 150;
    const auto rec = run_scalar_episode(cfg, 12);
    const double m_val = 6.0 - std::log(kE - 2.0);  // M(gamma_inf) at phi = 6
    const auto checks = competitive_audit_bind(rec, m_val, 1.0, 1.0 / kE, 20, 8);
    REQUIRE(!checks.empty());
    for (const auto& c : checks) {
        CHECK(c.bound >= m_val - 1e-12);  // d_H = 0 floor is exactly M
        CHECK(c.margin >= 0.0);           // hypotheses hold on this benchmark
    }
}

TEST_CASE("cartpole episode: nominal clairvoyant completes fast and clean") {
    CartPoleEpisodeConfig cfg;
    cfg.clairvoyant = true;
    cfg.noise_mult = 0.0;
    cfg.tau_dx = 0.0;
    cfg.tau_dth = 0.0;
    cfg.horizon_s = 20.0;
    const auto rec = run_cartpole_episode(cfg, 42);
    CHECK_FALSE(rec.summary.diverged);
    CHECK(rec.summary.completion_time_s >= 0.0);
    CHECK(rec.summary.completion_time_s < 12.0);
    CHECK(rec.summary.safety_violations == 0);
    CHECK(rec.summary.max_abs_xdd <= cfg.gains.a_max + 1e-9);

    const auto rec2 = run_cartpole_episode(cfg, 42);
    CHECK(rec.record_hash() == rec2.record_hash());
}

TEST_CASE("cartpole episode: online learner completes on the nominal plant") {
    CartPoleEpisodeConfig cfg;
    cfg.horizon_s = 30.0;
    const auto rec = run_cartpole_episode(cfg, 5);
    CHECK_FALSE(rec.summary.diverged);
    CHECK(rec.summary.completion_time_s >= 0.0);
    CHECK(rec.summary.truth_membership_ok);
    CHECK(rec.summary.nestedness_ok);
    CHECK(rec.summary.safety_violations == 0);
    CHECK(rec.summary.max_abs_xdd <= cfg.gains.a_max + 1e-9);
    // selection remained inside the consistent set by construction; spot-check
    // the chase trace is present and finite
    REQUIRE(rec.chase_steps.size() == rec.steps.size());
    CHECK(rec.summary.total_movement < 20.0);
}

TEST_CASE("arm episode: robust tracking settles for oracle and learner") {
    ArmEpisodeConfig cfg;
    cfg.clairvoyant = true;
    cfg.horizon_s = 20.0;
    const auto orc = run_arm_episode(cfg, 9);
    CHECK_FALSE(orc.summary.diverged);
    CHECK(orc.summary.terminal_fifth_mistakes == 0);

    ArmEpisodeConfig on = cfg;
    on.clairvoyant = false;
    const auto run = run_arm_episode(on, 9);
    CHECK_FALSE(run.summary.diverged);
    CHECK(run.summary.truth_membership_ok);
    CHECK(run.summary.terminal_fifth_mistakes == 0);
    CHECK(run.summary.mistakes <= orc.summary.mistakes + 200);
}
