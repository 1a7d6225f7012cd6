#pragma once

#include <functional>
#include <span>
#include <vector>

#include "kickfid/grid.hpp"

namespace kickfid {

// Boundary amplitude above this after a step is recorded as a leak warning.
inline constexpr double kLeakThreshold = 1e-6;

struct LeakWarning {
    int kick = 0;
    double amplitude = 0.0;
};

/// Accumulated leak diagnostics for one evolution. Only the first few events
/// are kept verbatim; count and max cover the rest.
struct LeakMonitor {
    std::vector<LeakWarning> first_events;
    int count = 0;
    double max_amplitude = 0.0;

    void record(int kick, double amplitude);
    bool any() const { return count > 0; }
};

/// Grid-aligned tables shared by kick and free-flight applications.
class KickPotentialCache {
public:
    KickPotentialCache(const SpatialGrid& grid, double K, double tau);

    const SpatialGrid& grid() const { return grid_; }
    double K() const { return K_; }
    double tau() const { return tau_; }
    const std::vector<double>& gauss() const { return gauss_; }
    // exp((i/tau) K exp(-x^2/2)): the beta = 0 fast path.
    const std::vector<cplx>& kick_phase_beta0() const { return kick_phase_; }
    // exp(-i tau k^2 / 2) in FFT index order.
    const std::vector<cplx>& free_flight_phase() const { return free_phase_; }

private:
    SpatialGrid grid_;
    double K_;
    double tau_;
    std::vector<double> gauss_;
    std::vector<cplx> kick_phase_;
    std::vector<cplx> free_phase_;
};

// Pointwise phase imprint exp((i/tau)(K e^{-x^2/2} + beta |psi(x)|^2)) with
// |psi|^2 the continuum density. Norm and density are unchanged.
WaveFunction apply_kick(const WaveFunction& psi, double K, double beta, double tau);

// Momentum-space multiplication by exp(-i tau k^2 / 2).
WaveFunction apply_free_flight(const WaveFunction& psi, double tau);

/// One-kick evolution U = (free flight) * (kick); the kick acts first.
/// Reusable across kicks: holds the phase tables and FFT buffers.
class Propagator {
public:
    Propagator(const SpatialGrid& grid, double K, double beta, double tau);

    void step_in_place(WaveFunction& psi, int kick_index);
    const LeakMonitor& leaks() const { return leaks_; }

private:
    KickPotentialCache cache_;
    double beta_;
    LeakMonitor leaks_;
};

// One full kick period. Convenience wrapper over Propagator.
WaveFunction step(const WaveFunction& psi, const SimParams& params);

using KickObserver = std::function<void(int kick, const WaveFunction& psi)>;

struct EvolveResult {
    WaveFunction state;
    LeakMonitor leaks;
};

// Applies step() n_kicks times; after each kick every observer receives
// (kick_index, state) in order, kick_index starting at 1. n_kicks = 0 returns
// psi0 untouched.
EvolveResult evolve(const WaveFunction& psi0, const SimParams& params,
                    std::span<const KickObserver> observers = {});

using TwinObserver =
    std::function<void(int kick, const WaveFunction& psi1, const WaveFunction& psi2)>;

struct TwinResult {
    WaveFunction state1;
    WaveFunction state2;
    LeakMonitor leaks1;
    LeakMonitor leaks2;
};

// Evolves the same initial state under two parameter sets in lockstep.
// Both SimParams must share grid, tau and n_kicks.
TwinResult evolve_twins(const WaveFunction& psi0, const SimParams& params1,
                        const SimParams& params2, const TwinObserver& observer = {});

} // namespace kickfid
