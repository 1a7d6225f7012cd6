#include "kickfid/analytic.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace kickfid {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

OscModelParams OscModelParams::coherent(double omega1, double omega2, double rho,
                                        double tau, double m) {
    OscModelParams p;
    p.m = m;
    p.omega1 = omega1;
    p.omega2 = omega2;
    p.rho = rho;
    p.hbar_eff = tau;
    const double omega = 0.5 * (omega1 + omega2);
    p.sigma_x2 = tau / (2.0 * m * omega);
    p.sigma_p2 = m * omega * tau / 2.0;
    return p;
}

void OscModelParams::validate() const {
    if (!(hbar_eff > 0.0)) throw ConfigError("hbar_eff (tau) must be positive");
    if (!(m > 0.0)) throw ConfigError("m must be positive");
    if (!(sigma_x2 > 0.0) || !(sigma_p2 > 0.0))
        throw ConfigError("squared widths must be positive");
    const double floor = hbar_eff * hbar_eff / 4.0;
    if (sigma_x2 * sigma_p2 < floor - 1e-12)
        throw ConfigError("sigma_x2 * sigma_p2 below the uncertainty floor");
    if (std::abs(gamma_x / (2.0 * sigma_x2)) > 0.2 ||
        std::abs(gamma_p / (2.0 * sigma_p2)) > 0.2)
        throw ConfigError("width modulation outside the expansion validity domain");
}

double gaussian_overlap_prefactor(double sx1, double sx2, double sp1, double sp2) {
    return 1.0 / (kTwoPi * std::sqrt((sx1 + sx2) * (sp1 + sp2)));
}

double fidelity_free(double t, const OscModelParams& params) {
    if (params.gamma_x != 0.0 || params.gamma_p != 0.0)
        throw ConfigError("fidelity_free requires zero width-oscillation amplitudes");
    const double tau = params.hbar_eff;
    const double m = params.m;
    const double sx1 = tau / (2.0 * m * params.omega1);
    const double sx2 = tau / (2.0 * m * params.omega2);
    const double sp1 = m * params.omega1 * tau / 2.0;
    const double sp2 = m * params.omega2 * tau / 2.0;
    const double x1 = params.rho * std::cos(params.omega1 * t);
    const double x2 = params.rho * std::cos(params.omega2 * t);
    const double p1 = -m * params.rho * params.omega1 * std::sin(params.omega1 * t);
    const double p2 = -m * params.rho * params.omega2 * std::sin(params.omega2 * t);
    const double s_x = (x1 - x2) * (x1 - x2) / (sx1 + sx2);
    const double s_p = (p1 - p2) * (p1 - p2) / (sp1 + sp2);
    const double c = gaussian_overlap_prefactor(sx1, sx2, sp1, sp2);
    return kTwoPi * tau * c * std::exp(-0.5 * (s_x + s_p));
}

namespace {

struct Widths {
    double sx1, sx2, sp1, sp2;
};

Widths widths_at(double t, const OscModelParams& p) {
    return {p.sigma_x2 + p.gamma_x * std::cos(p.Omega1 * t + p.phi_x),
            p.sigma_x2 + p.gamma_x * std::cos(p.Omega2 * t + p.phi_x),
            p.sigma_p2 + p.gamma_p * std::cos(p.Omega1 * t + p.phi_p),
            p.sigma_p2 + p.gamma_p * std::cos(p.Omega2 * t + p.phi_p)};
}

} // namespace

STerms s_terms_exact(double t, const OscModelParams& p) {
    const Widths w = widths_at(t, p);
    const double dx = p.rho * (std::cos(p.omega1 * t) - std::cos(p.omega2 * t));
    const double dp = -p.m * p.rho *
                      (p.omega1 * std::sin(p.omega1 * t) - p.omega2 * std::sin(p.omega2 * t));
    return {dx * dx / (w.sx1 + w.sx2), dp * dp / (w.sp1 + w.sp2)};
}

double correlation_prefactor_exact(double t, const OscModelParams& p) {
    const Widths w = widths_at(t, p);
    return kTwoPi * p.hbar_eff * gaussian_overlap_prefactor(w.sx1, w.sx2, w.sp1, w.sp2);
}

double fidelity_exact(double t, const OscModelParams& p) {
    const STerms s = s_terms_exact(t, p);
    return correlation_prefactor_exact(t, p) * std::exp(-0.5 * (s.s_x + s.s_p));
}

std::array<double, 8> a_terms(double t, const OscModelParams& p) {
    const double w1 = p.omega1, w2 = p.omega2;
    const double ws = w1 + w2, dw = w1 - w2;
    const double px = p.rho * p.rho / (2.0 * p.sigma_x2);
    const double pp = p.m * p.m * p.rho * p.rho / (2.0 * p.sigma_p2);
    const double cx = p.gamma_x / (2.0 * p.sigma_x2);
    const double cp = p.gamma_p / (2.0 * p.sigma_p2);
    const double Om[2] = {p.Omega1, p.Omega2};
    const double wi[2] = {w1, w2};

    std::array<double, 8> a{};
    // gamma-free part of T_x + T_p (difference-form trajectories).
    a[0] = px + pp * (w1 * w1 + w2 * w2) / 2.0;
    a[1] = -(px + pp * w1 * w2) * std::cos(dw * t);
    a[2] = (-px + pp * w1 * w2) * std::cos(ws * t);
    for (int i = 0; i < 2; ++i) {
        const double c2 = std::cos(2.0 * wi[i] * t);
        a[2] += (px / 2.0) * c2 - (pp / 2.0) * wi[i] * wi[i] * c2;
    }
    // First order in the width modulation: -T_x g_x - T_p g_p, grouped by the
    // frequency each product lands on.
    for (int j = 0; j < 2; ++j) {
        const double ox = Om[j] * t + p.phi_x;
        const double op = Om[j] * t + p.phi_p;
        // constant pieces of T
        a[3] += -px * cx * std::cos(ox) - pp * cp * ((w1 * w1 + w2 * w2) / 2.0) * std::cos(op);
        // cos(dw t) pieces
        a[4] += (px * cx / 2.0) * std::cos((Om[j] - dw) * t + p.phi_x) +
                (pp * cp * w1 * w2 / 2.0) * std::cos((Om[j] - dw) * t + p.phi_p);
        a[5] += (px * cx / 2.0) * std::cos((Om[j] + dw) * t + p.phi_x) +
                (pp * cp * w1 * w2 / 2.0) * std::cos((Om[j] + dw) * t + p.phi_p);
        // cos(ws t) pieces -> (ws -/+ Omega) groups
        a[6] += (px * cx / 2.0) * std::cos((ws - Om[j]) * t - p.phi_x) -
                (pp * cp * w1 * w2 / 2.0) * std::cos((ws - Om[j]) * t - p.phi_p);
        a[7] += (px * cx / 2.0) * std::cos((ws + Om[j]) * t + p.phi_x) -
                (pp * cp * w1 * w2 / 2.0) * std::cos((ws + Om[j]) * t + p.phi_p);
        // cos(2 w_i t) pieces -> (2 w_i -/+ Omega) groups
        for (int i = 0; i < 2; ++i) {
            a[6] += -(px * cx / 4.0) * std::cos((2.0 * wi[i] - Om[j]) * t - p.phi_x) +
                    (pp * cp / 4.0) * wi[i] * wi[i] *
                        std::cos((2.0 * wi[i] - Om[j]) * t - p.phi_p);
            a[7] += -(px * cx / 4.0) * std::cos((2.0 * wi[i] + Om[j]) * t + p.phi_x) +
                    (pp * cp / 4.0) * wi[i] * wi[i] *
                        std::cos((2.0 * wi[i] + Om[j]) * t + p.phi_p);
        }
    }
    return a;
}

double s_sum_expanded(double t, const OscModelParams& p) {
    const auto a = a_terms(t, p);
    double s = 0.0;
    for (double v : a) s += v;
    return s;
}

double a7_printed(double t, const OscModelParams& p) {
    const double omega = p.omega_mean();
    const double coeff = p.rho * p.rho * p.m * p.m * p.gamma_p * omega * omega /
                         (2.0 * p.sigma_p2 * p.sigma_p2);
    const double Dw = 2.0 * omega - p.Omega_mean();
    const double arg = p.a7_time_dependent ? (Dw * t - p.phi_p) : (Dw - p.phi_p);
    return coeff * std::cos(arg);
}

FrequencyPrediction predicted_frequencies(const OscModelParams& p) {
    FrequencyPrediction f;
    f.omega_s = p.omega1 + p.omega2;
    f.delta_omega = p.omega1 - p.omega2;
    f.Delta_omega = f.omega_s - p.Omega_mean();
    if (!(f.Delta_omega > 0.0))
        throw RegimeError("predicted_frequencies: width frequency exceeds 2 omega");
    f.T1 = kTwoPi / f.omega_s;
    f.T2 = kTwoPi / f.Delta_omega;
    f.T3 = (f.delta_omega == 0.0) ? std::numeric_limits<double>::infinity()
                                  : kTwoPi / std::abs(f.delta_omega);
    return f;
}

double wigner_correlation_analytic(double t, double delta_t, const OscModelParams& p) {
    if (!(delta_t > 0.0)) throw ConfigError("wigner_correlation_analytic: delta_t must be > 0");
    const double w = p.omega1;
    const double Om = p.Omega1;
    const double phi = w * delta_t;
    const double dphi = Om * delta_t;
    const double sx1 = p.sigma_x2 + p.gamma_x * std::cos(Om * t + p.phi_x);
    const double sx2 = p.sigma_x2 + p.gamma_x * std::cos(Om * t + p.phi_x - dphi);
    const double sp1 = p.sigma_p2 + p.gamma_p * std::cos(Om * t + p.phi_p);
    const double sp2 = p.sigma_p2 + p.gamma_p * std::cos(Om * t + p.phi_p - dphi);
    const double dx = p.rho * (std::cos(w * t) - std::cos(w * t - phi));
    const double dp = -p.m * p.rho * w * (std::sin(w * t) - std::sin(w * t - phi));
    const double s_x = dx * dx / (sx1 + sx2);
    const double s_p = dp * dp / (sp1 + sp2);
    const double c = gaussian_overlap_prefactor(sx1, sx2, sp1, sp2);
    return kTwoPi * p.hbar_eff * c * std::exp(-0.5 * (s_x + s_p));
}

} // namespace kickfid
