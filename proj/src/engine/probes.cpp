#include "mchase/engine/probes.hpp"

#include <algorithm>
#include <cmath>

#include "mchase/oracles/deadbeat.hpp"
#include "mchase/plants/noise.hpp"
#include "mchase/plants/scalar.hpp"

namespace mchase::engine {

using plants::RngStream;

ProbeReport robustness_probe_scalar(const ScalarProbeConfig& cfg, long trials,
                                    std::uint64_t seed) {
    ProbeReport rep;
    rep.trials = trials;
    RngStream rng(seed, 11);
    for (long trial = 0; trial < trials; ++trial) {
        const double a1 = cfg.adversarial_params ? rng.uniform(-cfg.a + cfg.rho, cfg.a)
                                                 : rng.uniform(-cfg.a, cfg.a);
        const double a2 = rng.uniform(1.0, 1.0 + 2.0 * cfg.b_delta);
        double x = cfg.x0_in_target ? rng.uniform(-1.0, 1.0) : cfg.x0;
        long mistakes = 0;
        bool first = true;
        for (int t = 0; t < cfg.horizon; ++t) {
            // posited parameters inside the weighted-metric rho-ball; either
            // random draws or the tight worst case theta1 - rho, which makes
            // the closed-loop factor exactly rho.
            double p1, p2;
            if (cfg.adversarial_params) {
                p1 = a1 - cfg.rho;
                p2 = a2;
            } else {
                do {
                    p1 = a1 + rng.uniform(-cfg.rho, cfg.rho);
                    p2 = a2 + rng.uniform(-cfg.rho / cfg.a, cfg.rho / cfg.a);
                } while (std::abs(p1 - a1) + cfg.a * std::abs(p2 - a2) > cfg.rho);
                p1 = std::clamp(p1, -cfg.a, cfg.a);
                p2 = std::clamp(p2, 1.0, 1.0 + 2.0 * cfg.b_delta);
            }

            const double u = oracles::deadbeat_control(p1, p2, x);
            const int mistake = std::abs(x) <= 1.0 ? 0 : 1;
            mistakes += mistake;
            if (cfg.declared_cost_invariant && cfg.x0_in_target && first && mistake)
                rep.cost_invariance_falsified = true;
            first = false;

            const double w = cfg.adversarial ? (x >= 0.0 ? cfg.eta : -cfg.eta)
                                             : rng.uniform(-cfg.eta, cfg.eta);
            x = plants::scalar_step(a1, a2, x, u, w, cfg.eta);
            if (!std::isfinite(x) || std::abs(x) > 1e9) {
                rep.divergence = true;
                break;
            }
        }
        rep.worst_mistakes = std::max(rep.worst_mistakes, mistakes);
    }
    return rep;
}

std::vector<IntervalCheck> competitive_audit_bind(const RunRecord& run, double m_value,
                                                  double gamma, double rho, int samples,
                                                  std::uint64_t seed) {
    std::vector<IntervalCheck> checks;
    const long T = static_cast<long>(run.steps.size());
    if (T < 2 || run.chase_steps.size() != run.steps.size()) return checks;

    std::vector<long> cum(static_cast<size_t>(T) + 1, 0);
    for (long t = 0; t < T; ++t)
        cum[static_cast<size_t>(t) + 1] = cum[static_cast<size_t>(t)] + run.steps[static_cast<size_t>(t)].mistake;

    RngStream rng(seed, 12);
    auto eval = [&](long lo, long hi) {
        IntervalCheck c;
        c.t_lo = lo;
        c.t_hi = hi;
        c.observed = static_cast<double>(cum[static_cast<size_t>(hi) + 1] - cum[static_cast<size_t>(lo)]);
        const auto& s_lo = run.chase_steps[static_cast<size_t>(lo)].supports;
        const auto& s_hi = run.chase_steps[static_cast<size_t>(hi)].supports;
        const double dh = (s_lo && s_hi) ? (*s_lo - *s_hi).cwiseAbs().maxCoeff() : 0.0;
        c.bound = m_value * (2.0 * gamma / rho * dh + 1.0);
        c.margin = c.bound - c.observed;
        return c;
    };

    checks.push_back(eval(0, T - 1));
    for (int k = 0; k < samples; ++k) {
        const long lo = static_cast<long>(rng.next_u64() % static_cast<std::uint64_t>(T - 1));
        const long hi = lo + 1 + static_cast<long>(rng.next_u64() % static_cast<std::uint64_t>(T - 1 - lo));
        checks.push_back(eval(lo, hi));
    }
    return checks;
}

}  // namespace mchase::engine
