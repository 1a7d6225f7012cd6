#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kickfid/observables.hpp"

namespace kickfid {

enum class Window { rectangular, hann };

struct SpectrumOptions {
    Window window = Window::rectangular;
    int pad_factor = 4;
    bool detrend = true; // subtract the series mean
};

/// One-sided magnitude spectrum on [0, 0.5] cycles/kick with spacing
/// 1/(pad_factor * n_samples).
struct Spectrum {
    std::vector<double> frequencies;
    std::vector<double> magnitudes;
    SpectrumOptions options;
    int n_samples = 0;

    double bin_width() const {
        return frequencies.size() > 1 ? frequencies[1] - frequencies[0] : 0.0;
    }
};

// Throws ConfigError when the series is shorter than 16 samples.
Spectrum periodogram(const TimeSeries& series, const SpectrumOptions& options = {});

// | sum_j |x_j - mean|^2 - (1/M) sum_m |X_m|^2 | for the rectangular window;
// a test hook for the transform normalization.
double parseval_residual(const TimeSeries& series, const SpectrumOptions& options = {});

struct Band {
    double lo = 0.0;
    double hi = 0.0;
    std::string label;
};

inline const Band kHighBand{0.2, 0.45, "high"};
inline const Band kMidBand{0.004, 0.1, "mid"};
inline Band low_band(int n_kicks) { return {3.0 / n_kicks, 0.004, "low"}; }

struct PeakReport {
    std::string band;
    double nu = 0.0;     // cycles/kick
    double period = 0.0; // kicks, = 1/nu
    double amplitude = 0.0;
    bool interpolated = false;

    double angular_frequency() const; // 2 pi nu, rad/kick
};

// Dominant interior local maximum of the band, refined by quadratic
// three-point interpolation on the log magnitudes. Throws ResolutionError when
// the band holds fewer than 3 bins, NoPeakError when no interior local
// maximum exists.
PeakReport find_band_peak(const Spectrum& spec, const Band& band);

// Largest magnitude over the band regardless of peak structure (for
// absence-of-peak amplitude comparisons).
double band_max_magnitude(const Spectrum& spec, const Band& band);

struct BandOutcome {
    enum class Status { peak, no_peak, resolution_error };
    Status status = Status::no_peak;
    std::optional<PeakReport> report;
    std::string detail;

    bool has_peak() const { return status == Status::peak; }
};

struct PeriodExtraction {
    BandOutcome t1, t2, t3;
};

// Band-classified dominant peaks: high [0.2, 0.45], mid [0.004, 0.1],
// low [3/n_kicks, 0.004]. A missing mid peak is an outcome, not an error.
PeriodExtraction extract_periods(const TimeSeries& fidelity_series, int n_kicks,
                                 const SpectrumOptions& options = {});

// Dominant peak of the width series in [0.25, 0.45] cycles/kick.
PeakReport width_frequency(const TimeSeries& width_series,
                           const SpectrumOptions& options = {});

// T2 = 2 pi / (2 omega - Omega_width). Throws RegimeError when
// 2 omega <= Omega_width.
double predict_t2(double omega, double omega_width);

} // namespace kickfid
