#pragma once

#include <complex>
#include <vector>

namespace kickfid {

struct PhasePoint {
    double x = 0.0;
    double p = 0.0;
};

struct Orbit {
    PhasePoint initial;
    std::vector<PhasePoint> points; // points[0] == initial, size n+1
};

/// Linearization of the kicked map at the origin, [[1-K, 1], [-K, 1]].
struct TangentMatrix {
    double a, b, c, d;
    static TangentMatrix at_origin(double K) { return {1.0 - K, 1.0, -K, 1.0}; }
    double det() const { return a * d - b * c; }
};

struct TangentEigen {
    std::complex<double> alpha_plus;
    std::complex<double> alpha_minus;
    double omega; // rotation angle per kick around the origin, in (0, pi)
};

// One iteration of the kicked map:
//   p' = p - K x exp(-x^2/2),  x' = x + p'.
PhasePoint map_step(PhasePoint pt, double K);

Orbit iterate(PhasePoint pt, double K, int n);

// Eigenvalues (2-K)/2 +/- i sqrt(K(4-K))/2 = exp(+/- i omega). The branch is
// chosen with atan2 so that cos(omega) = (2-K)/2 holds for all K in (0,4).
// Throws RegimeError outside the elliptic range.
TangentEigen tangent_eigen(double K);

// omega(K1) - omega(K2); antisymmetric in its arguments.
double delta_omega(double K1, double K2);

std::vector<Orbit> phase_portrait(double K, const std::vector<PhasePoint>& seeds, int n);

// 14 seeds at x0 = 0.1 ... 1.4, p0 = 0; reproduces the island structure.
std::vector<PhasePoint> default_portrait_seeds();

} // namespace kickfid
