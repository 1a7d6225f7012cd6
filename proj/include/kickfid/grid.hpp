#pragma once

#include <complex>
#include <vector>

#include "kickfid/errors.hpp"

namespace kickfid {

using cplx = std::complex<double>;

/// Uniform spatial grid on [x_min, x_max), n a power of two.
/// Momentum samples are p = tau * k with k the discrete Fourier wavenumbers
/// for period x_max - x_min; tau is supplied by the operations that need it.
struct SpatialGrid {
    int n = 0;
    double x_min = 0.0;
    double x_max = 0.0;
    double dx = 0.0;

    // Symmetric grid on [-x_max, x_max). Throws ConfigError unless n_points is
    // a power of two >= 2 and x_max > 0.
    static SpatialGrid symmetric(int n_points, double x_max);

    double x(int j) const { return x_min + dx * j; }
    double length() const { return x_max - x_min; }
    std::vector<double> x_values() const;
    // k_m = 2*pi*m/length in FFT index order, signed m in [-n/2, n/2).
    std::vector<double> wavenumbers() const;

    bool operator==(const SpatialGrid&) const = default;
};

/// Complex amplitudes on a SpatialGrid, continuum-normalized:
/// sum |psi_j|^2 dx = 1.
struct WaveFunction {
    SpatialGrid grid;
    std::vector<cplx> amps;

    double norm() const; // sqrt(sum |psi|^2 dx)
    void normalize();
    double boundary_amplitude() const; // max(|psi_0|, |psi_{n-1}|)
};

// Gaussian coherent state
//   psi(x) = (omega/(pi tau))^{1/4} exp(i p0 x / tau - omega (x-x0)^2 / (2 tau)),
// renormalized on the grid. Global phases are dropped (all observables here are
// phase-invariant). Throws ConfigError when the 6-sigma support does not fit.
WaveFunction coherent_state(const SpatialGrid& grid, double tau, double omega,
                            double x0, double p0);

// sum conj(a_j) b_j dx. Throws ShapeError on mismatched grids.
cplx inner_product(const WaveFunction& a, const WaveFunction& b);

double mean_x(const WaveFunction& psi);
double var_x(const WaveFunction& psi);
double mean_p(const WaveFunction& psi, double tau);
double var_p(const WaveFunction& psi, double tau);

struct GridSpec {
    int n_points = 2048;
    double x_max = 8.0;
    bool operator==(const GridSpec&) const = default;
};

/// Everything that determines a single evolution.
struct SimParams {
    double K = 1.0;
    double beta = 0.0;
    double tau = 0.01;
    double x0 = 0.0;
    double p0 = 0.0;
    int n_kicks = 1;
    GridSpec grid;

    void validate() const; // tau > 0, 0 < K < 4, n_kicks >= 1
    SpatialGrid make_spatial_grid() const {
        return SpatialGrid::symmetric(grid.n_points, grid.x_max);
    }
};

} // namespace kickfid
