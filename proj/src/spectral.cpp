#include "kickfid/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kickfid/fft.hpp"

namespace kickfid {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<double> windowed_samples(const TimeSeries& series, const SpectrumOptions& opt) {
    const int n = series.size();
    std::vector<double> x(series.values.begin(), series.values.end());
    if (opt.detrend) {
        double mean = 0.0;
        for (double v : x) mean += v;
        mean /= n;
        for (double& v : x) v -= mean;
    }
    if (opt.window == Window::hann) {
        for (int i = 0; i < n; ++i)
            x[i] *= 0.5 * (1.0 - std::cos(kTwoPi * i / n));
    }
    return x;
}
} // namespace

double PeakReport::angular_frequency() const { return kTwoPi * nu; }

Spectrum periodogram(const TimeSeries& series, const SpectrumOptions& options) {
    if (series.size() < 16)
        throw ConfigError("periodogram: series must hold at least 16 samples");
    if (options.pad_factor < 1)
        throw ConfigError("periodogram: pad_factor must be >= 1");

    const int n = series.size();
    const int m = options.pad_factor * n;
    const std::vector<double> x = windowed_samples(series, options);
    std::vector<cplx> buf(m, cplx{0.0, 0.0});
    for (int i = 0; i < n; ++i) buf[i] = x[i];
    fft::forward(buf);

    Spectrum spec;
    spec.options = options;
    spec.n_samples = n;
    const int half = m / 2;
    spec.frequencies.resize(half + 1);
    spec.magnitudes.resize(half + 1);
    for (int j = 0; j <= half; ++j) {
        spec.frequencies[j] = static_cast<double>(j) / m;
        spec.magnitudes[j] = std::abs(buf[j]);
    }
    return spec;
}

double parseval_residual(const TimeSeries& series, const SpectrumOptions& options) {
    SpectrumOptions opt = options;
    opt.window = Window::rectangular;
    const int n = series.size();
    const int m = opt.pad_factor * n;
    const std::vector<double> x = windowed_samples(series, opt);
    std::vector<cplx> buf(m, cplx{0.0, 0.0});
    for (int i = 0; i < n; ++i) buf[i] = x[i];
    fft::forward(buf);
    double time_sum = 0.0;
    for (double v : x) time_sum += v * v;
    double freq_sum = 0.0;
    for (const cplx& c : buf) freq_sum += std::norm(c);
    return std::abs(time_sum - freq_sum / m);
}

PeakReport find_band_peak(const Spectrum& spec, const Band& band) {
    if (band.lo >= band.hi || band.lo < 0.0 || band.hi > 0.5)
        throw ConfigError("find_band_peak: band must satisfy 0 <= lo < hi <= 0.5");
    const auto& nu = spec.frequencies;
    const auto& mag = spec.magnitudes;
    const int size = static_cast<int>(nu.size());

    int first = 0;
    while (first < size && nu[first] < band.lo) ++first;
    int last = size - 1;
    while (last >= 0 && nu[last] > band.hi) --last;
    if (last - first + 1 < 3)
        throw ResolutionError("find_band_peak: band '" + band.label +
                              "' narrower than 3 bins");

    int best = -1;
    for (int i = std::max(first, 1); i <= std::min(last, size - 2); ++i) {
        if (i == first || i == last) continue; // edges do not count as interior maxima
        if (mag[i] > mag[i - 1] && mag[i] >= mag[i + 1] &&
            (best < 0 || mag[i] > mag[best]))
            best = i;
    }
    if (best < 0)
        throw NoPeakError("find_band_peak: no local maximum inside band '" +
                          band.label + "'");

    PeakReport report;
    report.band = band.label;
    report.interpolated = false;
    double nu_star = nu[best];
    double amp_star = mag[best];
    if (mag[best - 1] > 0.0 && mag[best] > 0.0 && mag[best + 1] > 0.0) {
        const double a = std::log(mag[best - 1]);
        const double b = std::log(mag[best]);
        const double c = std::log(mag[best + 1]);
        const double denom = a - 2.0 * b + c;
        if (denom < 0.0) {
            double delta = 0.5 * (a - c) / denom;
            delta = std::clamp(delta, -0.5, 0.5);
            nu_star = nu[best] + delta * spec.bin_width();
            amp_star = std::exp(b - 0.25 * (a - c) * delta);
            report.interpolated = true;
        }
    }
    report.nu = nu_star;
    report.period = 1.0 / nu_star;
    report.amplitude = amp_star;
    return report;
}

double band_max_magnitude(const Spectrum& spec, const Band& band) {
    double best = 0.0;
    for (size_t i = 0; i < spec.frequencies.size(); ++i)
        if (spec.frequencies[i] >= band.lo && spec.frequencies[i] <= band.hi)
            best = std::max(best, spec.magnitudes[i]);
    return best;
}

namespace {
BandOutcome classify(const Spectrum& spec, const Band& band) {
    BandOutcome out;
    try {
        out.report = find_band_peak(spec, band);
        out.status = BandOutcome::Status::peak;
    } catch (const NoPeakError& e) {
        out.status = BandOutcome::Status::no_peak;
        out.detail = e.what();
    } catch (const ResolutionError& e) {
        out.status = BandOutcome::Status::resolution_error;
        out.detail = e.what();
    }
    return out;
}
} // namespace

PeriodExtraction extract_periods(const TimeSeries& fidelity_series, int n_kicks,
                                 const SpectrumOptions& options) {
    const Spectrum spec = periodogram(fidelity_series, options);
    PeriodExtraction ex;
    ex.t1 = classify(spec, kHighBand);
    ex.t2 = classify(spec, kMidBand);
    const Band low = low_band(n_kicks);
    if (low.lo >= low.hi) {
        ex.t3.status = BandOutcome::Status::resolution_error;
        ex.t3.detail = "low band empty: n_kicks too small to resolve the slow period";
    } else {
        ex.t3 = classify(spec, low);
    }
    return ex;
}

PeakReport width_frequency(const TimeSeries& width_series, const SpectrumOptions& options) {
    const Spectrum spec = periodogram(width_series, options);
    return find_band_peak(spec, Band{0.25, 0.45, "width"});
}

double predict_t2(double omega, double omega_width) {
    const double delta = 2.0 * omega - omega_width;
    if (!(delta > 0.0))
        throw RegimeError("predict_t2: width frequency is not below 2 omega");
    return kTwoPi / delta;
}

} // namespace kickfid
