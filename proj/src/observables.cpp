#include "kickfid/observables.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kickfid/fft.hpp"

namespace kickfid {

double fidelity(const WaveFunction& psi1, const WaveFunction& psi2) {
    const double f = std::norm(inner_product(psi1, psi2));
    if (f > 1.0 + 1e-9)
        throw NumericError("fidelity exceeded 1 beyond tolerance: " + std::to_string(f));
    return std::clamp(f, 0.0, 1.0);
}

double width(const WaveFunction& psi) { return var_x(psi); }

bool WignerGrid::compatible(const WignerGrid& other) const {
    return x.size() == other.x.size() && p.size() == other.p.size() &&
           dx == other.dx && dp == other.dp && tau == other.tau &&
           (x.empty() || (x.front() == other.x.front() && p.front() == other.p.front()));
}

namespace {

// Band-limited interpolation onto the half-step lattice: 2n samples with
// spacing dx/2 over the same domain. Exact for states with negligible
// amplitude at the Nyquist edge.
std::vector<cplx> refine_twofold(const WaveFunction& psi) {
    const int n = psi.grid.n;
    std::vector<cplx> spec = fft::forward_copy(psi.amps);
    std::vector<cplx> spec2(2 * n, cplx{0.0, 0.0});
    for (int m = 0; m < n / 2; ++m) spec2[m] = spec[m];
    for (int m = n / 2; m < n; ++m) spec2[m + n] = spec[m];
    fft::backward(spec2);
    const double scale = 1.0 / n;
    for (cplx& a : spec2) a *= scale;
    return spec2;
}

} // namespace

WignerGrid wigner(const WaveFunction& psi, double tau, double leak_tolerance) {
    if (!(tau > 0.0)) throw ConfigError("tau must be positive");
    const double boundary = psi.boundary_amplitude();
    if (boundary > leak_tolerance)
        throw LeakError("wigner: boundary amplitude " + std::to_string(boundary) +
                        " would alias the transform");

    const int n = psi.grid.n;
    const int n2 = 2 * n;
    const std::vector<cplx> fine = refine_twofold(psi);

    WignerGrid wg;
    wg.tau = tau;
    wg.dx = psi.grid.dx;
    wg.x = psi.grid.x_values();
    wg.p.resize(n);
    const double dk = 2.0 * std::numbers::pi / psi.grid.length();
    for (int j = 0; j < n; ++j) wg.p[j] = tau * dk * (j - n / 2);
    wg.dp = tau * dk;
    wg.w.assign(static_cast<size_t>(n) * n, 0.0);

    const double prefactor = (psi.grid.dx / 2.0) / (std::numbers::pi * tau);
    std::vector<cplx> corr(n2);
    for (int i = 0; i < n; ++i) {
        const int c = 2 * i;
        for (int l = 0; l < n2; ++l) {
            const int eta = (l < n) ? l : l - n2;
            const int a = c + eta;
            const int b = c - eta;
            corr[l] = (a >= 0 && a < n2 && b >= 0 && b < n2)
                          ? std::conj(fine[a]) * fine[b]
                          : cplx{0.0, 0.0};
        }
        fft::backward(corr); // sum_l corr[l] e^{+2 pi i m l / (2n)}
        for (int j = 0; j < n; ++j) {
            const int m_signed = j - n / 2;
            const int bin = ((2 * m_signed) % n2 + n2) % n2;
            wg.w[static_cast<size_t>(i) * n + j] = prefactor * corr[bin].real();
            wg.imag_residue =
                std::max(wg.imag_residue, std::abs(prefactor * corr[bin].imag()));
        }
    }
    return wg;
}

double wigner_overlap(const WignerGrid& a, const WignerGrid& b) {
    if (!a.compatible(b)) throw ShapeError("wigner_overlap: mismatched Wigner grids");
    double s = 0.0;
    for (size_t i = 0; i < a.w.size(); ++i) s += a.w[i] * b.w[i];
    return 2.0 * std::numbers::pi * a.tau * s * a.dx * a.dp;
}

PhaseSpaceMoments wigner_moments(const WignerGrid& wg) {
    const int n = wg.n();
    double tot = 0.0, mx = 0.0, mp = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double v = wg.value(i, j);
            tot += v;
            mx += v * wg.x[i];
            mp += v * wg.p[j];
        }
    mx /= tot;
    mp /= tot;
    PhaseSpaceMoments m;
    m.mean_x = mx;
    m.mean_p = mp;
    double vxx = 0.0, vpp = 0.0, vxp = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double v = wg.value(i, j);
            const double ddx = wg.x[i] - mx;
            const double ddp = wg.p[j] - mp;
            vxx += v * ddx * ddx;
            vpp += v * ddp * ddp;
            vxp += v * ddx * ddp;
        }
    m.var_x = vxx / tot;
    m.var_p = vpp / tot;
    m.cov_xp = vxp / tot;
    return m;
}

GCorrelationAccumulator::GCorrelationAccumulator(int delta_n) : delta_n_(delta_n) {
    if (delta_n < 1) throw ConfigError("g_correlation: delta_n must be >= 1");
    series_.start_kick = delta_n;
    series_.label = "g_correlation";
}

void GCorrelationAccumulator::observe(int kick, const WaveFunction& psi) {
    (void)kick;
    ring_.push_back(psi);
    if (static_cast<int>(ring_.size()) > delta_n_ + 1) ring_.pop_front();
    if (static_cast<int>(ring_.size()) == delta_n_ + 1)
        series_.values.push_back(fidelity(ring_.back(), ring_.front()));
}

TimeSeries g_correlation(std::span<const WaveFunction> stream, int delta_n) {
    GCorrelationAccumulator acc(delta_n);
    if (static_cast<int>(stream.size()) <= delta_n)
        throw ConfigError("g_correlation: stream shorter than delta_n + 1");
    for (size_t i = 0; i < stream.size(); ++i)
        acc.observe(static_cast<int>(i), stream[i]);
    return acc.series();
}

} // namespace kickfid
