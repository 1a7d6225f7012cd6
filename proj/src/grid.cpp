#include "kickfid/grid.hpp"

#include <cmath>
#include <numbers>

#include "kickfid/fft.hpp"

namespace kickfid {

namespace {
bool is_power_of_two(int n) { return n >= 1 && (n & (n - 1)) == 0; }
} // namespace

SpatialGrid SpatialGrid::symmetric(int n_points, double x_max) {
    if (n_points < 2 || !is_power_of_two(n_points))
        throw ConfigError("grid n_points must be a power of two >= 2, got " +
                          std::to_string(n_points));
    if (!(x_max > 0.0))
        throw ConfigError("grid x_max must be positive");
    SpatialGrid g;
    g.n = n_points;
    g.x_min = -x_max;
    g.x_max = x_max;
    g.dx = (g.x_max - g.x_min) / n_points;
    return g;
}

std::vector<double> SpatialGrid::x_values() const {
    std::vector<double> xs(n);
    for (int j = 0; j < n; ++j) xs[j] = x(j);
    return xs;
}

std::vector<double> SpatialGrid::wavenumbers() const {
    std::vector<double> ks(n);
    const double dk = 2.0 * std::numbers::pi / length();
    for (int m = 0; m < n; ++m) {
        const int signed_m = (m < n / 2) ? m : m - n;
        ks[m] = dk * signed_m;
    }
    return ks;
}

double WaveFunction::norm() const {
    double s = 0.0;
    for (const cplx& a : amps) s += std::norm(a);
    return std::sqrt(s * grid.dx);
}

void WaveFunction::normalize() {
    const double nrm = norm();
    if (nrm <= 0.0) throw NumericError("cannot normalize a zero wavefunction");
    for (cplx& a : amps) a /= nrm;
}

double WaveFunction::boundary_amplitude() const {
    if (amps.empty()) return 0.0;
    return std::max(std::abs(amps.front()), std::abs(amps.back()));
}

WaveFunction coherent_state(const SpatialGrid& grid, double tau, double omega,
                            double x0, double p0) {
    if (!(omega > 0.0)) throw ConfigError("coherent state omega must be positive");
    if (!(tau > 0.0)) throw ConfigError("tau must be positive");
    const double sigma_x = std::sqrt(tau / (2.0 * omega));
    if (6.0 * sigma_x + std::abs(x0) > grid.x_max)
        throw ConfigError("coherent state support exceeds the grid domain");

    WaveFunction psi;
    psi.grid = grid;
    psi.amps.resize(grid.n);
    const double amp = std::pow(omega / (std::numbers::pi * tau), 0.25);
    for (int j = 0; j < grid.n; ++j) {
        const double x = grid.x(j);
        const double d = x - x0;
        psi.amps[j] = std::polar(amp * std::exp(-omega * d * d / (2.0 * tau)),
                                 p0 * x / tau);
    }
    psi.normalize();
    return psi;
}

cplx inner_product(const WaveFunction& a, const WaveFunction& b) {
    if (a.grid != b.grid) throw ShapeError("inner_product: mismatched grids");
    cplx s = 0.0;
    for (int j = 0; j < a.grid.n; ++j) s += std::conj(a.amps[j]) * b.amps[j];
    return s * a.grid.dx;
}

double mean_x(const WaveFunction& psi) {
    double s = 0.0;
    for (int j = 0; j < psi.grid.n; ++j) s += psi.grid.x(j) * std::norm(psi.amps[j]);
    return s * psi.grid.dx;
}

double var_x(const WaveFunction& psi) {
    const double mu = mean_x(psi);
    double s = 0.0;
    for (int j = 0; j < psi.grid.n; ++j) {
        const double d = psi.grid.x(j) - mu;
        s += d * d * std::norm(psi.amps[j]);
    }
    return s * psi.grid.dx;
}

namespace {
// Momentum-space probability weights |psi_tilde(p_m)|^2 dp, normalized to the
// state's norm. Plancherel on the DFT: sum |PSI_m|^2 dx / n plays the role of
// sum |psi_j|^2 dx.
std::vector<double> momentum_weights(const WaveFunction& psi) {
    std::vector<cplx> spec = fft::forward_copy(psi.amps);
    std::vector<double> w(spec.size());
    const double scale = psi.grid.dx / psi.grid.n;
    for (size_t m = 0; m < spec.size(); ++m) w[m] = std::norm(spec[m]) * scale;
    return w;
}
} // namespace

double mean_p(const WaveFunction& psi, double tau) {
    const auto ks = psi.grid.wavenumbers();
    const auto w = momentum_weights(psi);
    double s = 0.0, tot = 0.0;
    for (int m = 0; m < psi.grid.n; ++m) {
        s += tau * ks[m] * w[m];
        tot += w[m];
    }
    return s / tot;
}

double var_p(const WaveFunction& psi, double tau) {
    const auto ks = psi.grid.wavenumbers();
    const auto w = momentum_weights(psi);
    double mu = 0.0, tot = 0.0;
    for (int m = 0; m < psi.grid.n; ++m) {
        mu += tau * ks[m] * w[m];
        tot += w[m];
    }
    mu /= tot;
    double s = 0.0;
    for (int m = 0; m < psi.grid.n; ++m) {
        const double d = tau * ks[m] - mu;
        s += d * d * w[m];
    }
    return s / tot;
}

void SimParams::validate() const {
    if (!(tau > 0.0)) throw ConfigError("tau must be positive");
    if (!(K > 0.0) || !(K < 4.0))
        throw ConfigError("K must lie in (0,4) for an elliptic central fixed point");
    if (n_kicks < 1) throw ConfigError("n_kicks must be >= 1");
    (void)SpatialGrid::symmetric(grid.n_points, grid.x_max);
}

} // namespace kickfid
