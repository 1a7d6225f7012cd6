#pragma once

#include <array>

#include "kickfid/errors.hpp"

namespace kickfid {

/// Parameters of the closed-form harmonic-oscillator model: two oscillators
/// with nearby frequencies, coherent-state widths, and a slow periodic
/// modulation of the squared widths,
///   sigma_x_i^2(t) = sigma_x2 + gamma_x cos(Omega_i t + phi_x)   (same for p).
struct OscModelParams {
    double m = 1.0;
    double omega1 = 0.0; // rad/kick
    double omega2 = 0.0;
    double rho = 0.0; // orbit radius, x(0)
    double sigma_x2 = 0.0; // shared unperturbed squared widths (width-modulated ops)
    double sigma_p2 = 0.0;
    double gamma_x = 0.0;
    double gamma_p = 0.0;
    double Omega1 = 0.0; // width-oscillation frequencies, rad/kick
    double Omega2 = 0.0;
    double phi_x = 0.0;
    double phi_p = 0.0;
    double hbar_eff = 0.0; // tau
    bool a7_time_dependent = true; // reading of the printed Delta-omega term

    double omega_mean() const { return 0.5 * (omega1 + omega2); }
    double Omega_mean() const { return 0.5 * (Omega1 + Omega2); }

    // Coherent widths sigma_x2 = tau/(2 m omega), sigma_p2 = m omega tau / 2
    // at the mean frequency.
    static OscModelParams coherent(double omega1, double omega2, double rho,
                                   double tau, double m = 1.0);

    // Uncertainty floor and expansion validity |gamma/(2 sigma^2)| <= 0.2.
    void validate() const;
};

// Overlap prefactor of two Gaussian Wigner functions with squared widths
// (sx1, sp1), (sx2, sp2): 1 / (2 pi sqrt((sx1+sx2)(sp1+sp2))).
double gaussian_overlap_prefactor(double sx1, double sx2, double sp1, double sp2);

// Fidelity of two coherent states launched from (rho, 0) and evolved by their
// own oscillators, widths fixed at the per-oscillator coherent values:
//   F = 2 pi tau * C * exp(-(s_x + s_p)/2).
// Normalized so omega1 = omega2 gives F = 1. Requires gamma_x = gamma_p = 0.
double fidelity_free(double t, const OscModelParams& params);

struct STerms {
    double s_x = 0.0;
    double s_p = 0.0;
};

// Displacement terms with oscillating widths:
//   s_x = rho^2 (cos w1 t - cos w2 t)^2 / (sigma_x1^2(t) + sigma_x2^2(t)),
//   s_p = m^2 rho^2 (w1 sin w1 t - w2 sin w2 t)^2 / (sigma_p1^2(t) + sigma_p2^2(t)).
// The momentum difference follows the trajectories p_i = -m rho w_i sin(w_i t).
STerms s_terms_exact(double t, const OscModelParams& params);

// 2 pi tau * C(t) with the time-dependent widths.
double correlation_prefactor_exact(double t, const OscModelParams& params);

// 2 pi tau * C(t) * exp(-(s_x + s_p)/2) from s_terms_exact.
double fidelity_exact(double t, const OscModelParams& params);

// First order in gamma/(2 sigma^2): s_x + s_p = sum of the eight groups below.
double s_sum_expanded(double t, const OscModelParams& params);

// The eight-term decomposition of s_sum_expanded: constant, delta-omega,
// fast (omega_s and 2 omega_i), Omega, Omega -/+ delta-omega, and the
// (2 omega - Omega) / (2 omega + Omega) groups. Frequencies are kept
// per-oscillator; the terms collapse to the usual single-frequency forms when
// omega1 = omega2 and Omega1 = Omega2.
std::array<double, 8> a_terms(double t, const OscModelParams& params);

// The printed slow term rho^2 m^2 gamma_p w^2/(2 sigma_p^4) cos(Dw t - phi_p),
// with the time argument controlled by params.a7_time_dependent (false reads
// the phase as the constant cos(Dw - phi_p)).
double a7_printed(double t, const OscModelParams& params);

struct FrequencyPrediction {
    double omega_s = 0.0;     // omega1 + omega2
    double delta_omega = 0.0; // omega1 - omega2
    double Delta_omega = 0.0; // omega_s - Omega_mean
    double T1 = 0.0;          // 2 pi / omega_s
    double T2 = 0.0;          // 2 pi / Delta_omega
    double T3 = 0.0;          // 2 pi / |delta_omega|
};

// Throws RegimeError when Delta_omega <= 0.
FrequencyPrediction predicted_frequencies(const OscModelParams& params);

// Lagged self-overlap of one oscillator (omega1, Omega1) with width modulation
// dephased by Delta-phi = Omega1 * delta_t:
//   G(t) = 2 pi tau * C(t) * exp(-(s_x + s_p)/2).
double wigner_correlation_analytic(double t, double delta_t, const OscModelParams& params);

} // namespace kickfid
