#pragma once

#include <deque>
#include <span>
#include <string>
#include <vector>

#include "kickfid/grid.hpp"

namespace kickfid {

/// Per-kick record of a scalar observable; dt = 1 kick.
struct TimeSeries {
    std::vector<double> values;
    int start_kick = 0;
    std::string label;

    int size() const { return static_cast<int>(values.size()); }
};

// |<psi1|psi2>|^2, clamped to [0, 1]. Throws ShapeError on mismatched grids.
double fidelity(const WaveFunction& psi1, const WaveFunction& psi2);

// <(x - <x>)^2>
double width(const WaveFunction& psi);

/// Discrete Wigner function W(x_i, p_j) on the spatial grid and the n_points
/// momenta p = tau * k spanning [-tau*pi/dx, tau*pi/dx), ascending.
struct WignerGrid {
    std::vector<double> x;
    std::vector<double> p;
    std::vector<double> w; // row-major, w[i * n + j] = W(x_i, p_j)
    double dx = 0.0;
    double dp = 0.0;
    double tau = 0.0;
    double imag_residue = 0.0; // max |imaginary part| discarded by the transform

    int n() const { return static_cast<int>(x.size()); }
    double value(int i, int j) const { return w[static_cast<size_t>(i) * p.size() + j]; }
    bool compatible(const WignerGrid& other) const;
};

// W(x,p) = (1/ pi tau) Int dxi conj(psi(x+xi)) psi(x-xi) e^{2 i p xi / tau},
// discretized per row by a length-2N transform over xi on the half-step
// lattice (spectral interpolation supplies the midpoints); psi is treated as
// zero outside the grid. Throws LeakError when the boundary amplitude exceeds
// leak_tolerance; the default bound keeps aliasing below the 1e-6 level the
// overlap identities are tested at. Long interacting runs shed a faint
// ballistic tail, so qualitative snapshot pipelines may pass a looser bound.
WignerGrid wigner(const WaveFunction& psi, double tau, double leak_tolerance = 1e-6);

// 2 pi tau * sum W1 W2 dx dp; equals fidelity(psi1, psi2) for states meeting
// the leak bounds. Throws ShapeError on mismatched Wigner grids.
double wigner_overlap(const WignerGrid& a, const WignerGrid& b);

struct PhaseSpaceMoments {
    double mean_x = 0.0, mean_p = 0.0;
    double var_x = 0.0, var_p = 0.0, cov_xp = 0.0;
    double covariance_det() const { return var_x * var_p - cov_xp * cov_xp; }
};

PhaseSpaceMoments wigner_moments(const WignerGrid& w);

/// Lagged overlap G(n) = 2 pi tau * Int W_n W_{n - delta_n} dx dp, accumulated
/// from a per-kick state stream through a ring buffer of delta_n + 1 states.
/// For pure states the overlap is evaluated through the equivalent bra-ket
/// form |<psi_n|psi_{n-delta_n}>|^2.
class GCorrelationAccumulator {
public:
    explicit GCorrelationAccumulator(int delta_n); // throws ConfigError if < 1

    void observe(int kick, const WaveFunction& psi);
    const TimeSeries& series() const { return series_; }

private:
    int delta_n_;
    std::deque<WaveFunction> ring_;
    TimeSeries series_;
};

// G over an in-memory stream; stream[0] is the state at kick 0. The series
// starts at kick delta_n. Throws ConfigError when the stream is too short.
TimeSeries g_correlation(std::span<const WaveFunction> stream, int delta_n);

} // namespace kickfid
