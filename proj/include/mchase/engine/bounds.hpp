#pragma once

#include <utility>

#include "mchase/geom/box.hpp"
#include "mchase/geom/metric.hpp"
#include "mchase/geom/packing.hpp"
#include "mchase/oracles/oracle_spec.hpp"

#include "json.hpp"

namespace mchase::engine {

/// Mistake bound for a uniformly robust oracle with a competitive selection:
/// M * (2 gamma / rho * diam + 1).
double bound_thm1(double m_rho, double gamma, double rho, double diam);

/// Critical packing radius of the weakly-competitive bound:
/// r* = (rho / 2 gamma) * T / (M + T).
double thm2_r_star(double rho, double gamma, double T, double m_rho);

/// Weakly-competitive mistake bracket M * (N(K, r*) + 1) with the packing
/// number bracketed analytically.
std::pair<double, double> bound_thm2(double m_rho, double gamma, double rho, double T,
                                     const geom::Box& box, const geom::Metric& metric);

/// State envelope e^{alpha gamma diam} (e^{-t} ||x0|| + beta e/(e-1)).
double thm3_envelope(double alpha, double gamma, double diam, double beta,
                     double x0_norm, double t);
double thm3_envelope_limit(double alpha, double gamma, double diam, double beta);

/// The envelope at t = 0 horizon start, i.e. the local-oracle gamma_inf.
double gamma_inf(double alpha, double gamma, double diam, double beta, double x0_norm);

/// Weakly-competitive state bound bracket: inf over mu in (0,1) of
/// (1 + (alpha diam)^{n*}) max{beta/(1-mu), ||x0||} + beta sum_k (alpha diam)^k,
/// n* = N(K, mu / (alpha gamma)), evaluated at both ends of the packing
/// bracket. Values can be astronomically large; they are informational.
std::pair<double, double> bound_thm3_weak(double alpha, double gamma, double beta,
                                          double x0_norm, const geom::Box& box,
                                          const geom::Metric& metric);

/// Locally robust composition: M(gamma_inf) * (2 gamma / rho * diam + 1).
double bound_thm4(const oracles::OracleSpec& spec, double gamma, double diam,
                  double x0_norm);

/// The published closed form of the scalar study, 8e(a+b_D)^2 + 2(a+b_D).
double scalar_composed_bound(double a, double b_delta);

/// Evaluated guarantees against observed counts. Violations are only
/// asserted when the oracle declares the hypotheses the theorem needs;
/// otherwise the numbers are reported as informational.
struct BoundReport {
    double thm1 = 0.0;
    std::pair<double, double> thm2{0.0, 0.0};
    double thm3_limit = 0.0;
    std::pair<double, double> thm3_weak{0.0, 0.0};
    double thm4 = 0.0;
    double gamma_inf_value = 0.0;
    std::pair<double, double> gamma_weak_inf{0.0, 0.0};
    double observed_mistakes = -1.0;
    double observed_max_state_norm = -1.0;
    bool hypotheses_certified = false;
    bool violated_thm1 = false;
    bool violated_thm4 = false;

    nlohmann::json to_json() const;
};

BoundReport make_bound_report(const oracles::OracleSpec& spec, double gamma, double T_weak,
                              const geom::Box& box, const geom::Metric& metric,
                              double x0_norm, double observed_mistakes,
                              double observed_max_norm);

}  // namespace mchase::engine
