#include "kickfid/classical.hpp"

#include <cmath>

#include "kickfid/errors.hpp"

namespace kickfid {

PhasePoint map_step(PhasePoint pt, double K) {
    const double p_next = pt.p - K * pt.x * std::exp(-pt.x * pt.x / 2.0);
    return {pt.x + p_next, p_next};
}

Orbit iterate(PhasePoint pt, double K, int n) {
    Orbit orbit;
    orbit.initial = pt;
    orbit.points.reserve(n + 1);
    orbit.points.push_back(pt);
    for (int i = 0; i < n; ++i) {
        pt = map_step(pt, K);
        orbit.points.push_back(pt);
    }
    return orbit;
}

TangentEigen tangent_eigen(double K) {
    if (!(K > 0.0) || !(K < 4.0))
        throw RegimeError("tangent_eigen: K must lie in (0,4), got " + std::to_string(K));
    const double re = (2.0 - K) / 2.0;
    const double im = std::sqrt(K * (4.0 - K)) / 2.0;
    TangentEigen e;
    e.alpha_plus = {re, im};
    e.alpha_minus = {re, -im};
    e.omega = std::atan2(im, re);
    return e;
}

double delta_omega(double K1, double K2) {
    return tangent_eigen(K1).omega - tangent_eigen(K2).omega;
}

std::vector<Orbit> phase_portrait(double K, const std::vector<PhasePoint>& seeds, int n) {
    std::vector<Orbit> orbits;
    orbits.reserve(seeds.size());
    for (const PhasePoint& seed : seeds) orbits.push_back(iterate(seed, K, n));
    return orbits;
}

std::vector<PhasePoint> default_portrait_seeds() {
    std::vector<PhasePoint> seeds;
    for (int j = 1; j <= 14; ++j) seeds.push_back({0.1 * j, 0.0});
    return seeds;
}

} // namespace kickfid
