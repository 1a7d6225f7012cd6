#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "kickfid/grid.hpp"
#include "kickfid/observables.hpp"
#include "kickfid/propagator.hpp"
#include "kickfid/spectral.hpp"

#include <json.hpp>

namespace kickfid {

inline constexpr const char* kSoftwareVersion = "kickfid 0.1.0";

/// K1/K2 twins sharing beta, tau, grid, initial condition and kick count.
struct TwinConfig {
    double K1 = 1.0;
    double K2 = 1.01;
    double beta = 6e-5;
    double tau = 0.01;
    double x0 = 0.18;
    double p0 = 0.0;
    int n_kicks = 8192;
    GridSpec grid;
    // 0 selects the island rotation frequency omega(K1).
    double coherent_omega = 0.0;

    SimParams params1() const;
    SimParams params2() const;
    double resolved_coherent_omega() const;
    WaveFunction initial_state() const;

    bool operator==(const TwinConfig&) const = default;
};

struct ExperimentConfig {
    std::string scenario = "fidelity";
    TwinConfig twin;
    std::vector<double> beta_list;
    std::vector<double> x0_list;
    SpectrumOptions spectral;
    std::filesystem::path out_dir = ".";
    int g_delta_n = 1;
    std::vector<int> wigner_kicks;
};

struct PeakRecord {
    std::string band;
    std::string status; // "peak", "no_peak", "resolution_error"
    double nu = 0.0;
    double period = 0.0;
    double amplitude = 0.0;
    bool operator==(const PeakRecord&) const = default;
};

PeakRecord to_record(const BandOutcome& outcome, const std::string& band);
PeakRecord to_record(const PeakReport& report);

/// Everything a run leaves behind besides its CSVs; serialized as
/// manifest.json next to them.
struct RunManifest {
    int format_version = 1;
    std::string software = kSoftwareVersion;
    std::string scenario;
    TwinConfig config;
    SpectrumOptions spectral;
    double omega1 = 0.0;
    double omega2 = 0.0;
    double delta_omega_value = 0.0;
    double coherent_omega = 0.0;
    double coherent_sigma_x2 = 0.0;
    std::vector<PeakRecord> peaks;
    int leak_count1 = 0;
    int leak_count2 = 0;
    double leak_max1 = 0.0;
    double leak_max2 = 0.0;
    std::vector<std::string> outputs;
    std::vector<std::string> notes;
    double wall_time_s = 0.0;

    void save(const std::filesystem::path& path) const;
    static RunManifest load(const std::filesystem::path& path);
};

nlohmann::json to_json(const RunManifest& m);
RunManifest manifest_from_json(const nlohmann::json& j);

struct FidelityExperimentResult {
    TimeSeries fidelity_series;
    TimeSeries width_series;
    Spectrum spectrum;
    PeriodExtraction periods;
    RunManifest manifest;
};

// Twin evolution, per-kick fidelity and width, transform, period extraction.
// Writes fidelity.csv, width.csv, spectrum.csv, manifest.json under out_dir.
FidelityExperimentResult run_fidelity_experiment(const ExperimentConfig& config);

struct SweepRow {
    double value = 0.0; // the swept parameter
    std::optional<double> T1, T2, T3, amp_T2, Omega_width, T2_pred;
    std::string reason; // non-empty when the point degraded or failed
};

// One row per beta; writes beta_sweep.csv (+ per-point subdirectories).
std::vector<SweepRow> sweep_beta(const ExperimentConfig& config);

// One row per x0 (p0 = 0); writes x0_sweep.csv.
std::vector<SweepRow> sweep_x0(const ExperimentConfig& config);

struct WignerSequenceResult {
    std::vector<int> kicks;
    std::vector<double> covariance_dets;
    RunManifest manifest;
};

// Single evolution under K1; Wigner snapshot CSV per requested kick.
WignerSequenceResult run_wigner_sequence(const ExperimentConfig& config,
                                         const std::vector<int>& kicks);

struct GCorrelationResult {
    TimeSeries g_series;
    BandOutcome g_mid_peak;
    BandOutcome fidelity_mid_peak;
    RunManifest manifest;
};

// Twin evolution; G(n) of the K1 state at lag delta_n alongside the fidelity
// mid-band peak for comparison. Writes gcorr.csv, fidelity.csv, manifest.json.
GCorrelationResult run_g_correlation(const ExperimentConfig& config, int delta_n);

// Named figure scenarios fig1..fig9. Throws ConfigError for unknown names.
void reproduce_figure(const std::string& name, ExperimentConfig config);

int worker_count(); // KICKFID_WORKERS or hardware concurrency

} // namespace kickfid
