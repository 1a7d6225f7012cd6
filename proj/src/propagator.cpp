#include "kickfid/propagator.hpp"

#include <cmath>

#include "kickfid/fft.hpp"

namespace kickfid {

void LeakMonitor::record(int kick, double amplitude) {
    ++count;
    if (amplitude > max_amplitude) max_amplitude = amplitude;
    if (first_events.size() < 16) first_events.push_back({kick, amplitude});
}

KickPotentialCache::KickPotentialCache(const SpatialGrid& grid, double K, double tau)
    : grid_(grid), K_(K), tau_(tau) {
    if (!(tau > 0.0)) throw ConfigError("tau must be positive");
    gauss_.resize(grid.n);
    kick_phase_.resize(grid.n);
    for (int j = 0; j < grid.n; ++j) {
        const double x = grid.x(j);
        gauss_[j] = std::exp(-x * x / 2.0);
        kick_phase_[j] = std::polar(1.0, K * gauss_[j] / tau);
    }
    free_phase_.resize(grid.n);
    const auto ks = grid.wavenumbers();
    for (int m = 0; m < grid.n; ++m)
        free_phase_[m] = std::polar(1.0, -tau * ks[m] * ks[m] / 2.0);
}

namespace {

void kick_in_place(WaveFunction& psi, const KickPotentialCache& cache, double beta) {
    const int n = psi.grid.n;
    if (beta == 0.0) {
        const auto& ph = cache.kick_phase_beta0();
        for (int j = 0; j < n; ++j) psi.amps[j] *= ph[j];
        return;
    }
    const double inv_tau = 1.0 / cache.tau();
    const double K = cache.K();
    const auto& gauss = cache.gauss();
    for (int j = 0; j < n; ++j) {
        const double density = std::norm(psi.amps[j]);
        const double arg = (K * gauss[j] + beta * density) * inv_tau;
        psi.amps[j] *= std::polar(1.0, arg);
    }
}

void free_flight_in_place(WaveFunction& psi, const KickPotentialCache& cache) {
    fft::forward(psi.amps);
    const auto& ph = cache.free_flight_phase();
    const int n = psi.grid.n;
    for (int m = 0; m < n; ++m) psi.amps[m] *= ph[m];
    fft::backward(psi.amps);
    const double scale = 1.0 / n;
    for (cplx& a : psi.amps) a *= scale;
}

} // namespace

WaveFunction apply_kick(const WaveFunction& psi, double K, double beta, double tau) {
    KickPotentialCache cache(psi.grid, K, tau);
    WaveFunction out = psi;
    kick_in_place(out, cache, beta);
    return out;
}

WaveFunction apply_free_flight(const WaveFunction& psi, double tau) {
    KickPotentialCache cache(psi.grid, 0.0, tau);
    WaveFunction out = psi;
    free_flight_in_place(out, cache);
    return out;
}

Propagator::Propagator(const SpatialGrid& grid, double K, double beta, double tau)
    : cache_(grid, K, tau), beta_(beta) {}

void Propagator::step_in_place(WaveFunction& psi, int kick_index) {
    kick_in_place(psi, cache_, beta_);
    free_flight_in_place(psi, cache_);
    const double boundary = psi.boundary_amplitude();
    if (boundary > kLeakThreshold) leaks_.record(kick_index, boundary);
}

WaveFunction step(const WaveFunction& psi, const SimParams& params) {
    Propagator prop(psi.grid, params.K, params.beta, params.tau);
    WaveFunction out = psi;
    prop.step_in_place(out, 1);
    return out;
}

EvolveResult evolve(const WaveFunction& psi0, const SimParams& params,
                    std::span<const KickObserver> observers) {
    EvolveResult result;
    result.state = psi0;
    if (params.n_kicks == 0) return result;
    params.validate();
    Propagator prop(psi0.grid, params.K, params.beta, params.tau);
    for (int kick = 1; kick <= params.n_kicks; ++kick) {
        prop.step_in_place(result.state, kick);
        for (const KickObserver& obs : observers) obs(kick, result.state);
    }
    result.leaks = prop.leaks();
    return result;
}

TwinResult evolve_twins(const WaveFunction& psi0, const SimParams& params1,
                        const SimParams& params2, const TwinObserver& observer) {
    if (params1.grid != params2.grid || params1.tau != params2.tau ||
        params1.n_kicks != params2.n_kicks)
        throw ConfigError("evolve_twins: twins must share grid, tau and n_kicks");
    params1.validate();
    params2.validate();
    TwinResult result;
    result.state1 = psi0;
    result.state2 = psi0;
    Propagator prop1(psi0.grid, params1.K, params1.beta, params1.tau);
    Propagator prop2(psi0.grid, params2.K, params2.beta, params2.tau);
    for (int kick = 1; kick <= params1.n_kicks; ++kick) {
        prop1.step_in_place(result.state1, kick);
        prop2.step_in_place(result.state2, kick);
        if (observer) observer(kick, result.state1, result.state2);
    }
    result.leaks1 = prop1.leaks();
    result.leaks2 = prop2.leaks();
    return result;
}

} // namespace kickfid
