#include "mchase/engine/episode.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "mchase/chase/consistent.hpp"
#include "mchase/geom/metric.hpp"
#include "mchase/oracles/deadbeat.hpp"
#include "mchase/plants/rk4.hpp"
#include "mchase/plants/scalar.hpp"

namespace mchase::engine {

using chase::ConsistentState;
using chase::DataPoint;
using Eigen::VectorXd;
using plants::RngStream;

namespace {

std::uint64_t fnv1a(std::uint64_t h, const char* data, size_t n) {
    for (size_t i = 0; i < n; ++i) {
        h ^= static_cast<unsigned char>(data[i]);
        h *= 1099511628211ULL;
    }
    return h;
}

std::uint64_t hash_double(std::uint64_t h, double v) {
    char buf[32];
    const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
    return fnv1a(h, buf, static_cast<size_t>(n));
}

VectorXd select(ConsistentState& cs, SelKind kind) {
    switch (kind) {
        case SelKind::Steiner: return cs.sel_steiner();
        case SelKind::Greedy: return cs.sel_greedy();
        case SelKind::WeakProjection: return cs.sel_weak_projection();
    }
    throw std::logic_error("select: unknown kind");
}

// Nestedness audit: points sampled from the initial box must never re-enter
// the region after leaving it (valid between widenings).
struct ProbeSet {
    std::vector<VectorXd> points;
    std::vector<bool> inside;

    void init(const geom::Box& box, int count, RngStream& rng) {
        points.clear();
        inside.clear();
        for (int i = 0; i < count; ++i) {
            points.push_back(rng.uniform_vec(box.lower, box.upper));
            inside.push_back(true);
        }
    }
    bool check(const geom::Polytope& p) {
        bool ok = true;
        for (size_t i = 0; i < points.size(); ++i) {
            const bool now = geom::contains(p, points[i], 1e-9);
            if (now && !inside[i]) ok = false;
            inside[i] = now;
        }
        return ok;
    }
    void reset_flags(const geom::Polytope& p) {
        for (size_t i = 0; i < points.size(); ++i)
            inside[i] = geom::contains(p, points[i], 1e-9);
    }
};

void finalize_mistakes(RunSummary& s, const MistakeLedger& ledger) {
    s.mistakes = ledger.total;
    s.first_success = ledger.first_success;
    s.terminal_clean_run = ledger.terminal_clean_run();
    s.terminal_fifth_mistakes = ledger.mistakes_in_terminal_fraction(0.2);
}

}  // namespace

std::uint64_t RunRecord::record_hash() const {
    std::uint64_t h = 1469598103934665603ULL;
    for (const auto& st : steps) {
        h = hash_double(h, static_cast<double>(st.t));
        for (Eigen::Index i = 0; i < st.true_state.size(); ++i) h = hash_double(h, st.true_state[i]);
        for (Eigen::Index i = 0; i < st.obs.size(); ++i) h = hash_double(h, st.obs[i]);
        for (Eigen::Index i = 0; i < st.theta.size(); ++i) h = hash_double(h, st.theta[i]);
        h = hash_double(h, st.u);
        h = hash_double(h, static_cast<double>(st.mistake));
    }
    return h;
}

RunRecord run_scalar_episode(const ScalarEpisodeConfig& cfg, std::uint64_t master_seed) {
    RunRecord rec;
    rec.master_seed = master_seed;
    rec.config_tag = "scalar";

    const geom::Box box(Eigen::Vector2d(-cfg.a, 1.0), Eigen::Vector2d(cfg.a, 1.0 + 2.0 * cfg.b_delta));
    const geom::Metric metric = geom::Metric::weighted_l1(Eigen::Vector2d(1.0, cfg.a));

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

    ConsistentState cs(box, spec, geom::DirectionSet::make(2, cfg.directions, cfg.direction_seed));

    RngStream par_rng(master_seed, 1);
    RngStream dist_rng(master_seed, 2);
    const Eigen::Vector2d truth = cfg.theta_star
        ? *cfg.theta_star
        : Eigen::Vector2d(par_rng.uniform(-cfg.a, cfg.a), par_rng.uniform(1.0, 1.0 + 2.0 * cfg.b_delta));

    const plants::DisturbanceModel dist{cfg.eta, cfg.disturbance};
    Objective obj;
    obj.kind = Objective::Kind::Interval;

    MistakeLedger ledger;
    double x = cfg.x0;
    double u_prev = 0.0;
    VectorXd theta_prev;

    for (long t = 0; t < cfg.horizon; ++t) {
        if (t >= 1) {
            DataPoint d;
            d.t = t;
            d.x_next = VectorXd::Constant(1, x);
            d.x = rec.steps.back().true_state;
            d.u = VectorXd::Constant(1, u_prev);
            auto out = cs.update(d);
            while (out.inconsistent) {
                ++rec.summary.widenings;
                if (cs.widen_and_rebuild()) break;
                if (rec.summary.widenings > 60)
                    throw std::runtime_error("run_scalar_episode: widening runaway");
            }
        }
        const VectorXd theta = select(cs, cfg.sel);
        const double u = oracles::deadbeat_control(theta[0], theta[1], x);
        const VectorXd xvec = VectorXd::Constant(1, x);
        const int mistake = obj.evaluate(xvec, VectorXd::Constant(1, u), t);
        ledger.add(mistake);

        StepRecord st;
        st.t = t;
        st.time_s = static_cast<double>(t);
        st.obs = xvec;
        st.true_state = xvec;
        st.u = u;
        st.theta = theta;
        st.branch = "-";
        st.mistake = mistake;
        st.movement = theta_prev.size() ? metric(theta, theta_prev) : 0.0;
        st.dh_increment = 0.0;
        st.halfspace_count = cs.halfspace_count();
        st.generation = cs.generation();
        rec.steps.push_back(std::move(st));
        rec.chase_steps.push_back({theta, cs.supports()});
        rec.summary.total_movement += rec.steps.back().movement;
        rec.summary.max_state_norm = std::max(rec.summary.max_state_norm, std::abs(x));
        rec.summary.max_abs_x = rec.summary.max_state_norm;

        if (cfg.audit_membership && !geom::contains(cs.polytope(), truth, 1e-7))
            rec.summary.truth_membership_ok = false;

        theta_prev = theta;
        u_prev = u;
        const double w = dist.draw(dist_rng, x);
        x = plants::scalar_step(truth[0], truth[1], x, u, w, cfg.eta);
        if (!std::isfinite(x) || std::abs(x) > 1e12) {
            rec.summary.diverged = true;
            break;
        }
    }
    finalize_mistakes(rec.summary, ledger);
    return rec;
}

RunRecord run_cartpole_episode(const CartPoleEpisodeConfig& cfg, std::uint64_t master_seed) {
    using plants::CartPoleMeasurement;
    using plants::CartPoleParams;

    if (cfg.tau_dx > cfg.tau_dx_box || cfg.tau_dth > cfg.tau_dth_box)
        throw std::invalid_argument("run_cartpole_episode: true disturbance bound outside the declared range");

    RunRecord rec;
    rec.master_seed = master_seed;
    rec.config_tag = cfg.clairvoyant ? "cartpole-oracle" : "cartpole-online";

    const geom::Box box = plants::lumped_uncertainty_box(cfg.tau_dx_box, cfg.tau_dth_box);
    const geom::Metric metric = geom::Metric::euclidean();
    const VectorXd truth_lumped = plants::lumped_params(cfg.truth, cfg.tau_dx, cfg.tau_dth);

    plants::CartPoleRegressorConfig rcfg;
    rcfg.ts = cfg.ts;
    rcfg.windows = cfg.windows;
    rcfg.noise_pos = cfg.noise_pos * cfg.noise_mult;
    rcfg.noise_ang = cfg.noise_ang * cfg.noise_mult;
    rcfg.disc_floor = cfg.disc_floor;

    ConsistentState cs(box, plants::cartpole_regressor_spec(),
                       geom::DirectionSet::make(7, cfg.directions, cfg.direction_seed));

    RngStream noise_rng(master_seed, 3);
    RngStream dist_rng(master_seed, 4);
    RngStream probe_rng(master_seed, 5);
    ProbeSet probes;
    if (cfg.audit_membership && !cfg.clairvoyant) probes.init(box, cfg.probe_points, probe_rng);

    Objective obj;
    obj.kind = Objective::Kind::TargetSet;
    obj.target_halfwidths = cfg.target_halfwidths;
    obj.wrap_index = 1;

    const long horizon = static_cast<long>(std::llround(cfg.horizon_s / cfg.ts));
    MistakeLedger ledger;

    VectorXd x_true(4);
    x_true << 0.0, M_PI, 0.0, 0.0;
    std::vector<CartPoleMeasurement> meas;
    meas.reserve(static_cast<size_t>(horizon));

    VectorXd theta_prev;
    std::optional<oracles::CartPoleOracle> oracle;
    Eigen::VectorXd prev_obs_pos;
    double dwell_enter = -1.0;

    for (long t = 0; t < horizon; ++t) {
        Eigen::VectorXd nz(4);
        const double npos = rcfg.noise_pos, nang = rcfg.noise_ang;
        nz << noise_rng.uniform(-npos, npos), noise_rng.uniform(-nang, nang), 0.0, 0.0;
        const VectorXd obs = plants::observe_mechanical(
            x_true, prev_obs_pos.size() ? &prev_obs_pos : nullptr, nz, cfg.ts, true);
        prev_obs_pos = obs.head(2);

        CartPoleMeasurement m;
        m.x = obs[0];
        m.phi = obs[1];
        m.vx = obs[2];
        m.vphi = obs[3];
        meas.push_back(m);

        if (!cfg.clairvoyant && t >= 1) {
            bool changed = false;
            for (int h : cfg.windows) {
                const auto row = plants::cartpole_window_row(meas, static_cast<int>(t), h, rcfg, box);
                if (!row) continue;
                auto out = cs.update(*row);
                changed = changed || out.region_changed;
                while (out.inconsistent) {
                    ++rec.summary.widenings;
                    if (cs.widen_and_rebuild()) {
                        probes.reset_flags(cs.polytope());
                        out.inconsistent = false;
                    } else if (rec.summary.widenings > 60) {
                        throw std::runtime_error("run_cartpole_episode: widening runaway");
                    }
                }
            }
            if (cfg.audit_membership) {
                if (!geom::contains(cs.polytope(), truth_lumped, 1e-7))
                    rec.summary.truth_membership_ok = false;
                if (changed && !probes.check(cs.polytope())) rec.summary.nestedness_ok = false;
            }
        }

        const VectorXd theta = cfg.clairvoyant ? truth_lumped : select(cs, cfg.sel);
        if (!oracle || theta_prev.size() == 0 || theta != theta_prev) {
            const CartPoleParams posited = cfg.clairvoyant ? cfg.truth : plants::unlump_params(theta);
            oracle.emplace(posited, cfg.gains);
        }
        const auto act = oracle->act(obs);
        meas.back().force = act.force;

        const int mistake = obj.evaluate(x_true, VectorXd::Constant(1, act.force), t);
        ledger.add(mistake);

        StepRecord st;
        st.t = t;
        st.time_s = static_cast<double>(t) * cfg.ts;
        st.obs = obs;
        st.true_state = x_true;
        st.u = act.force;
        st.theta = theta;
        st.branch = oracles::branch_name(act.branch);
        st.mistake = mistake;
        st.movement = theta_prev.size() ? metric(theta, theta_prev) : 0.0;
        st.dh_increment = 0.0;
        st.halfspace_count = cs.halfspace_count();
        st.generation = cs.generation();
        st.xdd_desired = act.xdd_desired;
        rec.summary.total_movement += st.movement;
        rec.steps.push_back(std::move(st));
        if (!cfg.clairvoyant) rec.chase_steps.push_back({theta, cs.supports()});

        rec.summary.max_abs_x = std::max(rec.summary.max_abs_x, std::abs(x_true[0]));
        rec.summary.max_abs_xdd = std::max(rec.summary.max_abs_xdd, std::abs(act.xdd_desired));
        rec.summary.max_state_norm = std::max(rec.summary.max_state_norm, x_true.norm());
        if (std::abs(x_true[0]) > cfg.gains.d_max) ++rec.summary.safety_violations;

        const double now = (static_cast<double>(t) + 1.0) * cfg.ts;
        if (mistake == 0) {
            if (dwell_enter < 0.0) dwell_enter = static_cast<double>(t) * cfg.ts;
            if (rec.summary.completion_time_s < 0.0 && now - dwell_enter >= cfg.dwell_s)
                rec.summary.completion_time_s = dwell_enter;
        } else {
            dwell_enter = -1.0;
        }

        const double wx = dist_rng.uniform(-cfg.tau_dx, cfg.tau_dx);
        const double wth = dist_rng.uniform(-cfg.tau_dth, cfg.tau_dth);
        auto ode = [&](const VectorXd& s) {
            return plants::cartpole_ode(s, act.force, cfg.truth, wx, wth);
        };
        x_true = plants::rk4_zoh_step(ode, x_true, cfg.ts, cfg.substeps);
        theta_prev = theta;
        if (!x_true.allFinite() || std::abs(x_true[0]) > 100.0) {
            rec.summary.diverged = true;
            break;
        }
    }
    finalize_mistakes(rec.summary, ledger);
    return rec;
}

RunRecord run_arm_episode(const ArmEpisodeConfig& cfg, std::uint64_t master_seed) {
    RunRecord rec;
    rec.master_seed = master_seed;
    rec.config_tag = cfg.clairvoyant ? "arm-oracle" : "arm-online";

    const geom::Metric metric = geom::Metric::euclidean();

    chase::RegressorSpec spec;
    spec.n_out = 1;
    spec.n_param = 4;
    spec.features = [](const VectorXd& x, const VectorXd&) {
        Eigen::MatrixXd psi(1, 4);
        psi << x[2], x[1], std::sin(x[0]), 0.0;  // x packs (q, qd, qdd)
        return psi;
    };
    spec.target = [](const VectorXd&, const VectorXd&, const VectorXd& u) {
        return VectorXd::Constant(1, u[0]);
    };
    spec.noise_row_param = {3};
    spec.fixed_noise = VectorXd::Zero(1);

    ConsistentState cs(cfg.param_box, spec,
                       geom::DirectionSet::make(4, cfg.directions, cfg.direction_seed));

    const Eigen::Vector4d truth(cfg.truth.a, cfg.truth.b, cfg.truth.c, cfg.omega_true);
    const oracles::ArmReference ref{
        [&cfg](double t) { return cfg.ref_amp * std::sin(cfg.ref_freq * t); },
        [&cfg](double t) { return cfg.ref_amp * cfg.ref_freq * std::cos(cfg.ref_freq * t); },
        [&cfg](double t) { return -cfg.ref_amp * cfg.ref_freq * cfg.ref_freq * std::sin(cfg.ref_freq * t); }};

    Objective obj;
    obj.kind = Objective::Kind::Tracking;
    obj.tracking_eps = cfg.eps_track;
    obj.ts = cfg.ts;
    obj.reference = [&](double time) {
        return Eigen::Vector2d(ref.q(time), ref.qd(time));
    };

    RngStream dist_rng(master_seed, 6);
    MistakeLedger ledger;
    const long horizon = static_cast<long>(std::llround(cfg.horizon_s / cfg.ts));

    VectorXd x = cfg.x0;
    VectorXd theta_prev;
    std::optional<oracles::ArmOracle> oracle;

    for (long t = 0; t < horizon; ++t) {
        const double time = static_cast<double>(t) * cfg.ts;
        const VectorXd theta = cfg.clairvoyant ? VectorXd(truth) : select(cs, cfg.sel);
        if (!oracle || theta_prev.size() == 0 || theta != theta_prev)
            oracle.emplace(theta, cfg.gains, ref);

        const auto act = oracle->act(time, Eigen::Vector2d(x[0], x[1]));
        const int mistake = obj.evaluate(x, VectorXd::Constant(1, act.torque), t);
        ledger.add(mistake);

        StepRecord st;
        st.t = t;
        st.time_s = time;
        st.obs = x;
        st.true_state = x;
        st.u = act.torque;
        st.theta = theta;
        st.branch = "-";
        st.mistake = mistake;
        st.movement = theta_prev.size() ? metric(theta, theta_prev) : 0.0;
        st.halfspace_count = cs.halfspace_count();
        st.generation = cs.generation();
        rec.summary.total_movement += st.movement;
        rec.steps.push_back(std::move(st));
        if (!cfg.clairvoyant) rec.chase_steps.push_back({theta, cs.supports()});
        rec.summary.max_state_norm = std::max(rec.summary.max_state_norm, x.norm());

        // ZOH interval with a held disturbance; the data row is the exact
        // mid-interval sample of the equation of motion.
        const double tau_d = dist_rng.uniform(-cfg.omega_true, cfg.omega_true);
        auto ode = [&](const VectorXd& s) { return plants::arm_ode(s, act.torque, cfg.truth, tau_d, cfg.omega_true); };
        const VectorXd mid = plants::rk4_zoh_step(ode, x, cfg.ts / 2.0, std::max(1, cfg.substeps / 2));
        const VectorXd mid_dx = ode(mid);
        x = plants::rk4_zoh_step(ode, mid, cfg.ts / 2.0, std::max(1, cfg.substeps / 2));

        if (!cfg.clairvoyant) {
            DataPoint d;
            d.t = t;
            d.x.resize(3);
            d.x << mid[0], mid[1], mid_dx[1];
            d.u = VectorXd::Constant(1, act.torque);
            d.x_next = VectorXd();
            auto out = cs.update(d);
            while (out.inconsistent) {
                ++rec.summary.widenings;
                if (cs.widen_and_rebuild()) break;
                if (rec.summary.widenings > 60)
                    throw std::runtime_error("run_arm_episode: widening runaway");
            }
            if (cfg.audit_membership && !geom::contains(cs.polytope(), truth, 1e-7))
                rec.summary.truth_membership_ok = false;
        }

        theta_prev = theta;
        if (!x.allFinite()) {
            rec.summary.diverged = true;
            break;
        }
    }
    finalize_mistakes(rec.summary, ledger);
    return rec;
}

}  // namespace mchase::engine
