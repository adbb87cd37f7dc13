#include "mchase/engine/bounds.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mchase::engine {
namespace {

const double kE = std::exp(1.0);

// (1 + q^n) * head + beta * sum_{k=0}^{n} q^k, guarded against overflow.
double weak_expression(double q, double n, double head, double beta) {
    const double huge = 1e300;
    double qn;
    if (q <= 0.0) qn = n == 0 ? 1.0 : 0.0;
    else {
        const double lg = n * std::log(q);
        qn = lg > 690.0 ? huge : std::exp(lg);
    }
    double geo;
    if (std::abs(q - 1.0) < 1e-12) geo = n + 1.0;
    else if (qn >= huge) geo = huge;
    else geo = (std::pow(q, n + 1.0) - 1.0) / (q - 1.0);
    const double v = (1.0 + qn) * head + beta * geo;
    return std::min(v, huge);
}

}  // namespace

double bound_thm1(double m_rho, double gamma, double rho, double diam) {
    if (m_rho <= 0.0 || gamma <= 0.0 || rho <= 0.0 || diam < 0.0)
        throw std::invalid_argument("bound_thm1: positive arguments required");
    return m_rho * (2.0 * gamma / rho * diam + 1.0);
}

double thm2_r_star(double rho, double gamma, double T, double m_rho) {
    if (rho <= 0.0 || gamma <= 0.0 || T <= 0.0 || m_rho <= 0.0)
        throw std::invalid_argument("thm2_r_star: positive arguments required");
    return 0.5 * (rho / gamma) * (T / (m_rho + T));
}

std::pair<double, double> bound_thm2(double m_rho, double gamma, double rho, double T,
                                     const geom::Box& box, const geom::Metric& metric) {
    const double r = thm2_r_star(rho, gamma, T, m_rho);
    const auto n = geom::packing_bounds(box, r, metric);
    return {m_rho * (static_cast<double>(n.lower) + 1.0),
            m_rho * (static_cast<double>(n.upper) + 1.0)};
}

double thm3_envelope(double alpha, double gamma, double diam, double beta,
                     double x0_norm, double t) {
    return std::exp(alpha * gamma * diam) * (std::exp(-t) * x0_norm + beta * kE / (kE - 1.0));
}

double thm3_envelope_limit(double alpha, double gamma, double diam, double beta) {
    return std::exp(alpha * gamma * diam) * beta * kE / (kE - 1.0);
}

double gamma_inf(double alpha, double gamma, double diam, double beta, double x0_norm) {
    return std::exp(alpha * gamma * diam) * (x0_norm + beta * kE / (kE - 1.0));
}

std::pair<double, double> bound_thm3_weak(double alpha, double gamma, double beta,
                                          double x0_norm, const geom::Box& box,
                                          const geom::Metric& metric) {
    const double diam = metric.box_diameter(box.lower, box.upper);
    const double q = alpha * diam;
    double best_lo = std::numeric_limits<double>::infinity();
    double best_hi = std::numeric_limits<double>::infinity();
    for (double mu = 0.01; mu < 1.0; mu += 0.01) {
        const double r = mu / (alpha * gamma);
        const auto n = geom::packing_bounds(box, r, metric);
        const double head = std::max(beta / (1.0 - mu), x0_norm);
        best_lo = std::min(best_lo, weak_expression(q, static_cast<double>(n.lower), head, beta));
        best_hi = std::min(best_hi, weak_expression(q, static_cast<double>(n.upper), head, beta));
    }
    if (best_lo > best_hi) std::swap(best_lo, best_hi);
    return {best_lo, best_hi};
}

double bound_thm4(const oracles::OracleSpec& spec, double gamma, double diam,
                  double x0_norm) {
    const double g_inf = gamma_inf(spec.alpha, gamma, diam, spec.beta, x0_norm);
    return spec.mistake_at(g_inf) * (2.0 * gamma / spec.rho * diam + 1.0);
}

double scalar_composed_bound(double a, double b_delta) {
    const double s = a + b_delta;
    return 8.0 * kE * s * s + 2.0 * s;
}

nlohmann::json BoundReport::to_json() const {
    nlohmann::json j;
    j["thm1"] = thm1;
    j["thm2_lower"] = thm2.first;
    j["thm2_upper"] = thm2.second;
    j["thm3_limit"] = thm3_limit;
    j["thm3_weak_lower"] = thm3_weak.first;
    j["thm3_weak_upper"] = thm3_weak.second;
    j["thm4"] = thm4;
    j["gamma_inf"] = gamma_inf_value;
    j["gamma_weak_inf_lower"] = gamma_weak_inf.first;
    j["gamma_weak_inf_upper"] = gamma_weak_inf.second;
    j["observed_mistakes"] = observed_mistakes;
    j["observed_max_state_norm"] = observed_max_state_norm;
    j["hypotheses_certified"] = hypotheses_certified;
    j["violated_thm1"] = violated_thm1;
    j["violated_thm4"] = violated_thm4;
    return j;
}

BoundReport make_bound_report(const oracles::OracleSpec& spec, double gamma, double T_weak,
                              const geom::Box& box, const geom::Metric& metric,
                              double x0_norm, double observed_mistakes,
                              double observed_max_norm) {
    BoundReport r;
    const double diam = metric.box_diameter(box.lower, box.upper);
    const double m_const = spec.mistake_at(1.0);
    if (spec.rho > 0.0 && m_const > 0.0) {
        r.thm1 = bound_thm1(m_const, gamma, spec.rho, diam);
        r.thm2 = bound_thm2(m_const, gamma, spec.rho, T_weak, box, metric);
        r.thm4 = bound_thm4(spec, gamma, diam, x0_norm);
    }
    if (spec.alpha > 0.0) {
        r.thm3_limit = thm3_envelope_limit(spec.alpha, gamma, diam, spec.beta);
        r.thm3_weak = bound_thm3_weak(spec.alpha, gamma, spec.beta, x0_norm, box, metric);
        r.gamma_inf_value = gamma_inf(spec.alpha, gamma, diam, spec.beta, x0_norm);
        r.gamma_weak_inf = r.thm3_weak;
    }
    r.observed_mistakes = observed_mistakes;
    r.observed_max_state_norm = observed_max_norm;
    r.hypotheses_certified = spec.certified();
    if (r.hypotheses_certified && observed_mistakes >= 0.0) {
        if (spec.robustness == oracles::RobustnessClass::UniformlyRobust && r.thm1 > 0.0)
            r.violated_thm1 = observed_mistakes > r.thm1;
        if (r.thm4 > 0.0) r.violated_thm4 = observed_mistakes > r.thm4;
    }
    return r;
}

}  // namespace mchase::engine
