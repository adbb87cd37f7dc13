#include "mchase/io/config.hpp"

#include <fstream>
#include <set>

namespace mchase::io {
namespace {

using nlohmann::json;

void expect_keys(const json& j, const std::string& scope, const std::set<std::string>& allowed) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError("unknown key '" + scope + it.key() + "'");
}

double num(const json& j, const std::string& scope, const std::string& key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number()) throw ConfigError("key '" + scope + key + "' must be a number");
    return j[key].get<double>();
}

bool flag(const json& j, const std::string& scope, const std::string& key, bool fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_boolean()) throw ConfigError("key '" + scope + key + "' must be a boolean");
    return j[key].get<bool>();
}

engine::SelKind sel_kind(const json& j, const std::string& scope) {
    if (!j.contains("sel")) return engine::SelKind::Steiner;
    const std::string s = j["sel"].get<std::string>();
    if (s == "steiner") return engine::SelKind::Steiner;
    if (s == "greedy") return engine::SelKind::Greedy;
    if (s == "weak-projection") return engine::SelKind::WeakProjection;
    throw ConfigError("key '" + scope + "sel' must be steiner|greedy|weak-projection");
}

plants::DisturbanceMode dist_mode(const json& j, const std::string& scope) {
    if (!j.contains("disturbance")) return plants::DisturbanceMode::WorstCaseSign;
    const std::string s = j["disturbance"].get<std::string>();
    if (s == "adversarial") return plants::DisturbanceMode::WorstCaseSign;
    if (s == "iid") return plants::DisturbanceMode::IidUniform;
    if (s == "constant") return plants::DisturbanceMode::Constant;
    throw ConfigError("key '" + scope + "disturbance' must be adversarial|iid|constant");
}

void parse_gains(const json& j, const std::string& scope, oracles::CartPoleGains& g) {
    expect_keys(j, scope, {"swing_gain", "lqr_q", "lqr_r", "a_max", "d_max", "eps_safe",
                           "force_limit", "safety_kp", "safety_kd"});
    g.swing_gain = num(j, scope, "swing_gain", g.swing_gain);
    g.lqr_r = num(j, scope, "lqr_r", g.lqr_r);
    g.a_max = num(j, scope, "a_max", g.a_max);
    g.d_max = num(j, scope, "d_max", g.d_max);
    g.eps_safe = num(j, scope, "eps_safe", g.eps_safe);
    g.force_limit = num(j, scope, "force_limit", g.force_limit);
    g.safety_kp = num(j, scope, "safety_kp", g.safety_kp);
    g.safety_kd = num(j, scope, "safety_kd", g.safety_kd);
    if (j.contains("lqr_q")) {
        if (!j["lqr_q"].is_array() || j["lqr_q"].size() != 4)
            throw ConfigError("key '" + scope + "lqr_q' must be an array of 4 weights");
        for (int i = 0; i < 4; ++i) g.lqr_q[i] = j["lqr_q"][static_cast<size_t>(i)].get<double>();
    }
}

}  // namespace

RunConfig RunConfig::from_json(const json& j) {
    RunConfig c;
    expect_keys(j, "", {"plant", "seed", "svg", "sel", "scalar", "cartpole", "arm"});
    if (!j.contains("plant")) throw ConfigError("missing key 'plant'");
    c.plant = j["plant"].get<std::string>();
    if (c.plant != "scalar" && c.plant != "cartpole" && c.plant != "arm1")
        throw ConfigError("key 'plant' must be scalar|cartpole|arm1");
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    c.svg = flag(j, "", "svg", false);
    const engine::SelKind sel = sel_kind(j, "");

    if (j.contains("scalar")) {
        const json& s = j["scalar"];
        const std::string sc = "scalar.";
        expect_keys(s, sc, {"a", "b_delta", "eta", "horizon", "x0", "disturbance", "directions"});
        c.scalar.a = num(s, sc, "a", c.scalar.a);
        c.scalar.b_delta = num(s, sc, "b_delta", c.scalar.b_delta);
        c.scalar.eta = num(s, sc, "eta", c.scalar.eta);
        c.scalar.horizon = static_cast<int>(num(s, sc, "horizon", c.scalar.horizon));
        c.scalar.x0 = num(s, sc, "x0", c.scalar.x0);
        c.scalar.disturbance = dist_mode(s, sc);
        c.scalar.directions = static_cast<int>(num(s, sc, "directions", c.scalar.directions));
        if (c.scalar.horizon < 0) throw ConfigError("key 'scalar.horizon' must be >= 0");
        if (c.scalar.eta < 0.0 || c.scalar.eta >= 1.0)
            throw ConfigError("key 'scalar.eta' must lie in [0, 1)");
    }
    c.scalar.sel = sel;

    if (j.contains("cartpole")) {
        const json& s = j["cartpole"];
        const std::string sc = "cartpole.";
        expect_keys(s, sc, {"M", "m", "l", "b_x", "b_theta", "noise_mult", "noise_pos", "noise_ang",
                            "tau_dx", "tau_dth", "horizon_s", "clairvoyant", "gains", "directions",
                            "disc_floor"});
        auto& p = c.cartpole.truth;
        p.M = num(s, sc, "M", p.M);
        p.m = num(s, sc, "m", p.m);
        p.l = num(s, sc, "l", p.l);
        p.b_x = num(s, sc, "b_x", p.b_x);
        p.b_theta = num(s, sc, "b_theta", p.b_theta);
        if (p.M < 0.1 || p.M > 5.0) throw ConfigError("key 'cartpole.M' outside [0.1, 5]");
        if (p.m < 0.1 || p.m > 1.0) throw ConfigError("key 'cartpole.m' outside [0.1, 1]");
        if (p.l < 0.05 || p.l > 1.0) throw ConfigError("key 'cartpole.l' outside [0.05, 1]");
        if (p.b_x < 0.0 || p.b_x > 20.0) throw ConfigError("key 'cartpole.b_x' outside [0, 20]");
        if (p.b_theta < 0.0 || p.b_theta > 2.0) throw ConfigError("key 'cartpole.b_theta' outside [0, 2]");
        c.cartpole.noise_mult = num(s, sc, "noise_mult", c.cartpole.noise_mult);
        c.cartpole.noise_pos = num(s, sc, "noise_pos", c.cartpole.noise_pos);
        c.cartpole.noise_ang = num(s, sc, "noise_ang", c.cartpole.noise_ang);
        c.cartpole.tau_dx = num(s, sc, "tau_dx", c.cartpole.tau_dx);
        c.cartpole.tau_dth = num(s, sc, "tau_dth", c.cartpole.tau_dth);
        c.cartpole.horizon_s = num(s, sc, "horizon_s", c.cartpole.horizon_s);
        c.cartpole.clairvoyant = flag(s, sc, "clairvoyant", false);
        c.cartpole.directions = static_cast<int>(num(s, sc, "directions", c.cartpole.directions));
        c.cartpole.disc_floor = num(s, sc, "disc_floor", c.cartpole.disc_floor);
        if (s.contains("gains")) parse_gains(s["gains"], sc + "gains.", c.cartpole.gains);
    }
    c.cartpole.sel = sel;

    if (j.contains("arm")) {
        const json& s = j["arm"];
        const std::string sc = "arm.";
        expect_keys(s, sc, {"a", "b", "c", "omega", "horizon_s", "ref_amp", "ref_freq",
                            "eps_track", "clairvoyant"});
        c.arm.truth.a = num(s, sc, "a", c.arm.truth.a);
        c.arm.truth.b = num(s, sc, "b", c.arm.truth.b);
        c.arm.truth.c = num(s, sc, "c", c.arm.truth.c);
        c.arm.omega_true = num(s, sc, "omega", c.arm.omega_true);
        c.arm.horizon_s = num(s, sc, "horizon_s", c.arm.horizon_s);
        c.arm.ref_amp = num(s, sc, "ref_amp", c.arm.ref_amp);
        c.arm.ref_freq = num(s, sc, "ref_freq", c.arm.ref_freq);
        c.arm.eps_track = num(s, sc, "eps_track", c.arm.eps_track);
        c.arm.clairvoyant = flag(s, sc, "clairvoyant", false);
        if (c.arm.truth.a <= 0.0) throw ConfigError("key 'arm.a' must be positive");
    }
    c.arm.sel = sel;
    return c;
}

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return from_json(j);
}

GridSpec GridSpec::from_json(const json& j) {
    GridSpec g;
    expect_keys(j, "", {"M", "m", "l", "b_x", "b_theta", "noise_multipliers", "seeds_per_noise",
                        "horizon_s", "gains", "noise_pos", "noise_ang"});
    auto axis = [&](const char* key, std::vector<double>& out) {
        if (!j.contains(key)) return;
        if (!j[key].is_array() || j[key].empty())
            throw ConfigError(std::string("key '") + key + "' must be a nonempty array");
        out = j[key].get<std::vector<double>>();
    };
    axis("M", g.M);
    axis("m", g.m);
    axis("l", g.l);
    axis("b_x", g.b_x);
    axis("b_theta", g.b_theta);
    axis("noise_multipliers", g.noise_multipliers);
    if (j.contains("seeds_per_noise")) g.seeds_per_noise = j["seeds_per_noise"].get<int>();
    if (g.seeds_per_noise < 1) throw ConfigError("key 'seeds_per_noise' must be >= 1");
    g.horizon_s = num(j, "", "horizon_s", g.horizon_s);
    g.base.noise_pos = num(j, "", "noise_pos", g.base.noise_pos);
    g.base.noise_ang = num(j, "", "noise_ang", g.base.noise_ang);
    if (j.contains("gains")) parse_gains(j["gains"], "gains.", g.base.gains);
    return g;
}

GridSpec GridSpec::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open grid file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("grid is not valid JSON: ") + e.what());
    }
    return from_json(j);
}

}  // namespace mchase::io
