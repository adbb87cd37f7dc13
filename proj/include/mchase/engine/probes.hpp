#pragma once

#include <cstdint>
#include <vector>

#include "mchase/engine/run_record.hpp"
#include "mchase/oracles/oracle_spec.hpp"

namespace mchase::engine {

/// Monte-Carlo probe of the idealized setting: random truth in K, per-step
/// posited parameters inside the rho-ball, adversarial disturbance. The worst
/// observed mistake count is an empirical lower bound on M_rho; divergence
/// flags a margin that exceeds what the oracle tolerates.
struct ProbeReport {
    long worst_mistakes = 0;
    bool divergence = false;
    bool cost_invariance_falsified = false;
    long trials = 0;
};

struct ScalarProbeConfig {
    double a = 2.0;
    double b_delta = 1.0;
    double eta = std::exp(-1.0);
    double rho = std::exp(-1.0);
    int horizon = 200;
    double x0 = 5.0;
    bool x0_in_target = false;  // start inside |x| <= 1 (cost-invariance check)
    bool adversarial = true;
    bool adversarial_params = false;  // posit theta1 - rho (tight worst case)
    bool declared_cost_invariant = false;
};

ProbeReport robustness_probe_scalar(const ScalarProbeConfig& cfg, long trials,
                                    std::uint64_t seed);

/// Interval refinement audit: mistakes in [tau, tau_bar] against
/// M(2 gamma / rho * d_H(P_tau, P_tau_bar) + 1), sampled intervals plus the
/// full run. Margins (bound - observed) are reported; negative margin means
/// a violation of the refined inequality.
struct IntervalCheck {
    long t_lo = 0;
    long t_hi = 0;
    double observed = 0.0;
    double bound = 0.0;
    double margin = 0.0;
};

std::vector<IntervalCheck> competitive_audit_bind(const RunRecord& run, double m_value,
                                                  double gamma, double rho, int samples,
                                                  std::uint64_t seed);

}  // namespace mchase::engine
