#include "kickfid/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <thread>

#include "kickfid/classical.hpp"
#include "kickfid/csv.hpp"

namespace kickfid {

namespace fs = std::filesystem;
using nlohmann::json;

SimParams TwinConfig::params1() const {
    return {K1, beta, tau, x0, p0, n_kicks, grid};
}

SimParams TwinConfig::params2() const {
    return {K2, beta, tau, x0, p0, n_kicks, grid};
}

double TwinConfig::resolved_coherent_omega() const {
    return coherent_omega > 0.0 ? coherent_omega : tangent_eigen(K1).omega;
}

WaveFunction TwinConfig::initial_state() const {
    const SpatialGrid g = SpatialGrid::symmetric(grid.n_points, grid.x_max);
    return coherent_state(g, tau, resolved_coherent_omega(), x0, p0);
}

PeakRecord to_record(const PeakReport& report) {
    return {report.band, "peak", report.nu, report.period, report.amplitude};
}

PeakRecord to_record(const BandOutcome& outcome, const std::string& band) {
    if (outcome.has_peak()) return to_record(*outcome.report);
    PeakRecord rec;
    rec.band = band;
    rec.status = outcome.status == BandOutcome::Status::no_peak ? "no_peak"
                                                                : "resolution_error";
    return rec;
}

namespace {

json to_json(const GridSpec& g) {
    return {{"n_points", g.n_points}, {"x_max", g.x_max}};
}

GridSpec grid_from_json(const json& j) {
    return {j.at("n_points").get<int>(), j.at("x_max").get<double>()};
}

json to_json(const TwinConfig& c) {
    return {{"K1", c.K1},     {"K2", c.K2},
            {"beta", c.beta}, {"tau", c.tau},
            {"x0", c.x0},     {"p0", c.p0},
            {"n_kicks", c.n_kicks}, {"grid", to_json(c.grid)},
            {"coherent_omega", c.coherent_omega}};
}

TwinConfig twin_from_json(const json& j) {
    TwinConfig c;
    c.K1 = j.at("K1").get<double>();
    c.K2 = j.at("K2").get<double>();
    c.beta = j.at("beta").get<double>();
    c.tau = j.at("tau").get<double>();
    c.x0 = j.at("x0").get<double>();
    c.p0 = j.at("p0").get<double>();
    c.n_kicks = j.at("n_kicks").get<int>();
    c.grid = grid_from_json(j.at("grid"));
    c.coherent_omega = j.at("coherent_omega").get<double>();
    return c;
}

json to_json(const SpectrumOptions& o) {
    return {{"window", o.window == Window::hann ? "hann" : "rect"},
            {"pad_factor", o.pad_factor},
            {"detrend", o.detrend}};
}

SpectrumOptions spectral_from_json(const json& j) {
    SpectrumOptions o;
    o.window = j.at("window").get<std::string>() == "hann" ? Window::hann
                                                           : Window::rectangular;
    o.pad_factor = j.at("pad_factor").get<int>();
    o.detrend = j.at("detrend").get<bool>();
    return o;
}

json to_json(const PeakRecord& r) {
    return {{"band", r.band},
            {"status", r.status},
            {"nu", r.nu},
            {"period", r.period},
            {"amplitude", r.amplitude}};
}

PeakRecord peak_from_json(const json& j) {
    return {j.at("band").get<std::string>(), j.at("status").get<std::string>(),
            j.at("nu").get<double>(), j.at("period").get<double>(),
            j.at("amplitude").get<double>()};
}

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(Clock::now() - start_).count();
    }

private:
    using Clock = std::chrono::steady_clock;
    Clock::time_point start_ = Clock::now();
};

} // namespace

json to_json(const RunManifest& m) {
    json peaks = json::array();
    for (const PeakRecord& r : m.peaks) peaks.push_back(to_json(r));
    return {{"format_version", m.format_version},
            {"software", m.software},
            {"scenario", m.scenario},
            {"config", to_json(m.config)},
            {"spectral", to_json(m.spectral)},
            {"derived",
             {{"omega1", m.omega1},
              {"omega2", m.omega2},
              {"delta_omega", m.delta_omega_value},
              {"coherent_omega", m.coherent_omega},
              {"coherent_sigma_x2", m.coherent_sigma_x2}}},
            {"peaks", peaks},
            {"leaks",
             {{"count1", m.leak_count1},
              {"count2", m.leak_count2},
              {"max1", m.leak_max1},
              {"max2", m.leak_max2}}},
            {"outputs", m.outputs},
            {"notes", m.notes},
            {"wall_time_s", m.wall_time_s}};
}

RunManifest manifest_from_json(const json& j) {
    RunManifest m;
    m.format_version = j.at("format_version").get<int>();
    m.software = j.at("software").get<std::string>();
    m.scenario = j.at("scenario").get<std::string>();
    m.config = twin_from_json(j.at("config"));
    m.spectral = spectral_from_json(j.at("spectral"));
    const json& d = j.at("derived");
    m.omega1 = d.at("omega1").get<double>();
    m.omega2 = d.at("omega2").get<double>();
    m.delta_omega_value = d.at("delta_omega").get<double>();
    m.coherent_omega = d.at("coherent_omega").get<double>();
    m.coherent_sigma_x2 = d.at("coherent_sigma_x2").get<double>();
    for (const json& p : j.at("peaks")) m.peaks.push_back(peak_from_json(p));
    const json& l = j.at("leaks");
    m.leak_count1 = l.at("count1").get<int>();
    m.leak_count2 = l.at("count2").get<int>();
    m.leak_max1 = l.at("max1").get<double>();
    m.leak_max2 = l.at("max2").get<double>();
    m.outputs = j.at("outputs").get<std::vector<std::string>>();
    m.notes = j.at("notes").get<std::vector<std::string>>();
    m.wall_time_s = j.at("wall_time_s").get<double>();
    return m;
}

void RunManifest::save(const fs::path& path) const {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write manifest: " + path.string());
    out << to_json(*this).dump(2) << "\n";
}

RunManifest RunManifest::load(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read manifest: " + path.string());
    json j;
    in >> j;
    return manifest_from_json(j);
}

namespace {

RunManifest base_manifest(const ExperimentConfig& config) {
    RunManifest m;
    m.scenario = config.scenario;
    m.config = config.twin;
    m.spectral = config.spectral;
    m.omega1 = tangent_eigen(config.twin.K1).omega;
    m.omega2 = tangent_eigen(config.twin.K2).omega;
    m.delta_omega_value = m.omega1 - m.omega2;
    m.coherent_omega = config.twin.resolved_coherent_omega();
    m.coherent_sigma_x2 = config.twin.tau / (2.0 * m.coherent_omega);
    return m;
}

void append_periods(RunManifest& m, const PeriodExtraction& periods) {
    m.peaks.push_back(to_record(periods.t1, "high"));
    m.peaks.push_back(to_record(periods.t2, "mid"));
    m.peaks.push_back(to_record(periods.t3, "low"));
}

} // namespace

FidelityExperimentResult run_fidelity_experiment(const ExperimentConfig& config) {
    Stopwatch watch;
    const TwinConfig& twin = config.twin;
    const WaveFunction psi0 = twin.initial_state();

    FidelityExperimentResult result;
    result.fidelity_series.label = "fidelity";
    result.fidelity_series.start_kick = 1;
    result.width_series.label = "width";
    result.width_series.start_kick = 1;
    result.fidelity_series.values.reserve(twin.n_kicks);
    result.width_series.values.reserve(twin.n_kicks);

    const TwinResult twins = evolve_twins(
        psi0, twin.params1(), twin.params2(),
        [&result](int, const WaveFunction& a, const WaveFunction& b) {
            result.fidelity_series.values.push_back(fidelity(a, b));
            result.width_series.values.push_back(width(a));
        });

    result.spectrum = periodogram(result.fidelity_series, config.spectral);
    result.periods = extract_periods(result.fidelity_series, twin.n_kicks, config.spectral);

    RunManifest m = base_manifest(config);
    append_periods(m, result.periods);
    m.leak_count1 = twins.leaks1.count;
    m.leak_count2 = twins.leaks2.count;
    m.leak_max1 = twins.leaks1.max_amplitude;
    m.leak_max2 = twins.leaks2.max_amplitude;
    m.outputs = {"fidelity.csv", "width.csv", "spectrum.csv"};

    const fs::path dir = config.out_dir;
    csv::write_series(dir / "fidelity.csv", result.fidelity_series, "manifest.json");
    csv::write_series(dir / "width.csv", result.width_series, "manifest.json");
    csv::write_spectrum(dir / "spectrum.csv", result.spectrum, "manifest.json");
    m.wall_time_s = watch.seconds();
    m.save(dir / "manifest.json");
    result.manifest = m;
    return result;
}

int worker_count() {
    if (const char* env = std::getenv("KICKFID_WORKERS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

namespace {

template <typename Fn>
void parallel_for(int n, Fn&& fn) {
    const int workers = std::min(worker_count(), n);
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    for (std::thread& t : pool) t.join();
}

std::string opt_cell(const std::optional<double>& v) {
    return v ? csv::format_double(*v) : std::string{};
}

void write_sweep_csv(const fs::path& path, const std::string& param_name,
                     const std::vector<SweepRow>& rows, bool wide) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open for writing: " + path.string());
    out << "# manifest: manifest.json\n";
    out << param_name << ",T1,T2,T3";
    if (wide) out << ",amp_T2,Omega_width,T2_pred";
    out << ",reason\n";
    for (const SweepRow& r : rows) {
        out << csv::format_double(r.value) << "," << opt_cell(r.T1) << ","
            << opt_cell(r.T2) << "," << opt_cell(r.T3);
        if (wide)
            out << "," << opt_cell(r.amp_T2) << "," << opt_cell(r.Omega_width) << ","
                << opt_cell(r.T2_pred);
        out << "," << r.reason << "\n";
    }
}

// One sweep point: full fidelity pipeline plus the width-frequency/T2
// prediction leg. Failures land in row.reason and never abort the sweep.
SweepRow sweep_point(const ExperimentConfig& point_config) {
    SweepRow row;
    try {
        const FidelityExperimentResult res = run_fidelity_experiment(point_config);
        if (res.periods.t1.has_peak()) row.T1 = res.periods.t1.report->period;
        if (res.periods.t2.has_peak()) {
            row.T2 = res.periods.t2.report->period;
            row.amp_T2 = res.periods.t2.report->amplitude;
        }
        if (res.periods.t3.has_peak()) row.T3 = res.periods.t3.report->period;
        try {
            const PeakReport wf = width_frequency(res.width_series, point_config.spectral);
            row.Omega_width = wf.angular_frequency();
            // 2 omega from the fidelity fast line when present, else from the
            // tangent map.
            const double two_omega = res.periods.t1.has_peak()
                                         ? res.periods.t1.report->angular_frequency()
                                         : 2.0 * res.manifest.omega1;
            row.T2_pred = predict_t2(two_omega / 2.0, *row.Omega_width);
        } catch (const NumericError& e) {
            row.reason = e.what();
        }
    } catch (const std::exception& e) {
        row.reason = e.what();
    }
    return row;
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& config,
                                const std::vector<double>& values,
                                const std::string& param_name, bool wide) {
    if (values.size() < 2)
        throw ConfigError("sweep over " + param_name + " needs at least 2 values");
    std::vector<SweepRow> rows(values.size());
    parallel_for(static_cast<int>(values.size()), [&](int i) {
        ExperimentConfig point = config;
        point.scenario = config.scenario + "/" + param_name + "=" +
                         csv::format_double(values[i]);
        if (param_name == "beta")
            point.twin.beta = values[i];
        else
            point.twin.x0 = values[i];
        point.out_dir = config.out_dir /
                        (param_name + "_" + csv::format_double(values[i]));
        rows[i] = sweep_point(point);
        rows[i].value = values[i];
    });

    RunManifest m = base_manifest(config);
    m.outputs.push_back(param_name + "_sweep.csv");
    write_sweep_csv(config.out_dir / (param_name + "_sweep.csv"), param_name, rows, wide);
    m.save(config.out_dir / "manifest.json");
    return rows;
}

} // namespace

std::vector<SweepRow> sweep_beta(const ExperimentConfig& config) {
    return run_sweep(config, config.beta_list, "beta", true);
}

std::vector<SweepRow> sweep_x0(const ExperimentConfig& config) {
    ExperimentConfig c = config;
    c.twin.p0 = 0.0;
    return run_sweep(c, c.x0_list, "x0", false);
}

WignerSequenceResult run_wigner_sequence(const ExperimentConfig& config,
                                         const std::vector<int>& kicks) {
    Stopwatch watch;
    const TwinConfig& twin = config.twin;
    for (int k : kicks)
        if (k < 0 || k > twin.n_kicks)
            throw ConfigError("wigner sequence kick " + std::to_string(k) +
                              " outside [0, n_kicks]");

    WignerSequenceResult result;
    result.kicks = kicks;
    RunManifest m = base_manifest(config);

    const WaveFunction psi0 = twin.initial_state();
    std::vector<std::pair<int, WignerGrid>> snapshots;
    // Snapshots are qualitative; accept the faint ballistic tail long
    // interacting runs shed, and record the boundary level alongside.
    constexpr double kSnapshotLeakTolerance = 1e-3;
    auto snapshot = [&](int kick, const WaveFunction& psi) {
        for (int want : kicks)
            if (want == kick) {
                snapshots.emplace_back(kick,
                                       wigner(psi, twin.tau, kSnapshotLeakTolerance));
                if (psi.boundary_amplitude() > kLeakThreshold)
                    m.notes.push_back("boundary amplitude at kick " +
                                      std::to_string(kick) + ": " +
                                      csv::format_double(psi.boundary_amplitude()));
                return;
            }
    };
    snapshot(0, psi0);
    const KickObserver observer = snapshot;
    const EvolveResult evo = evolve(psi0, twin.params1(), {&observer, 1});
    m.leak_count1 = evo.leaks.count;
    m.leak_max1 = evo.leaks.max_amplitude;

    json dets = json::array();
    for (const auto& [kick, wg] : snapshots) {
        const std::string name = "wigner_" + std::to_string(kick) + ".csv";
        csv::write_wigner(config.out_dir / name, wg, "manifest.json");
        m.outputs.push_back(name);
        const double det = wigner_moments(wg).covariance_det();
        result.covariance_dets.push_back(det);
        m.notes.push_back("covariance_det kick " + std::to_string(kick) + ": " +
                          csv::format_double(det));
    }
    m.wall_time_s = watch.seconds();
    m.save(config.out_dir / "manifest.json");
    result.manifest = m;
    return result;
}

GCorrelationResult run_g_correlation(const ExperimentConfig& config, int delta_n) {
    Stopwatch watch;
    if (delta_n < 1) throw ConfigError("g correlation: delta_n must be >= 1");
    const TwinConfig& twin = config.twin;
    if (twin.n_kicks <= delta_n)
        throw ConfigError("g correlation: n_kicks must exceed delta_n");

    const WaveFunction psi0 = twin.initial_state();
    GCorrelationAccumulator acc(delta_n);
    acc.observe(0, psi0);
    TimeSeries fidelity_series;
    fidelity_series.label = "fidelity";
    fidelity_series.start_kick = 1;

    evolve_twins(psi0, twin.params1(), twin.params2(),
                 [&](int kick, const WaveFunction& a, const WaveFunction& b) {
                     acc.observe(kick, a);
                     fidelity_series.values.push_back(fidelity(a, b));
                 });

    GCorrelationResult result;
    result.g_series = acc.series();

    const Spectrum g_spec = periodogram(result.g_series, config.spectral);
    try {
        result.g_mid_peak.report = find_band_peak(g_spec, kMidBand);
        result.g_mid_peak.status = BandOutcome::Status::peak;
    } catch (const NoPeakError& e) {
        result.g_mid_peak.status = BandOutcome::Status::no_peak;
        result.g_mid_peak.detail = e.what();
    }
    const PeriodExtraction fp =
        extract_periods(fidelity_series, twin.n_kicks, config.spectral);
    result.fidelity_mid_peak = fp.t2;

    RunManifest m = base_manifest(config);
    m.peaks.push_back(to_record(result.g_mid_peak, "g_mid"));
    m.peaks.push_back(to_record(result.fidelity_mid_peak, "fidelity_mid"));
    m.outputs = {"gcorr.csv", "fidelity.csv"};
    m.notes.push_back("delta_n: " + std::to_string(delta_n));
    csv::write_series(config.out_dir / "gcorr.csv", result.g_series, "manifest.json");
    csv::write_series(config.out_dir / "fidelity.csv", fidelity_series, "manifest.json");
    m.wall_time_s = watch.seconds();
    m.save(config.out_dir / "manifest.json");
    result.manifest = m;
    return result;
}

void reproduce_figure(const std::string& name, ExperimentConfig config) {
    config.scenario = name;
    if (name == "fig1") {
        const auto orbits = phase_portrait(config.twin.K1, default_portrait_seeds(), 3000);
        RunManifest m = base_manifest(config);
        m.outputs = {"portrait.csv"};
        csv::write_portrait(config.out_dir / "portrait.csv", orbits, "manifest.json");
        m.save(config.out_dir / "manifest.json");
    } else if (name == "fig2" || name == "fig3") {
        run_fidelity_experiment(config);
    } else if (name == "fig4" || name == "fig8") {
        if (config.beta_list.empty())
            config.beta_list = {1e-5, 2e-5, 3e-5, 4e-5, 5e-5, 6e-5};
        sweep_beta(config);
    } else if (name == "fig5") {
        if (config.x0_list.empty()) config.x0_list = {0.14, 0.18, 0.22, 0.26, 0.30};
        sweep_x0(config);
    } else if (name == "fig6") {
        // Width pipeline on the K1 evolution.
        const FidelityExperimentResult res = run_fidelity_experiment(config);
        RunManifest m = res.manifest;
        const Spectrum wspec = periodogram(res.width_series, config.spectral);
        csv::write_spectrum(config.out_dir / "width_spectrum.csv", wspec, "manifest.json");
        m.outputs.push_back("width_spectrum.csv");
        try {
            const PeakReport wf = width_frequency(res.width_series, config.spectral);
            PeakRecord rec = to_record(wf);
            rec.band = "width";
            m.peaks.push_back(rec);
            m.notes.push_back("Omega_width: " +
                              csv::format_double(wf.angular_frequency()));
        } catch (const NumericError& e) {
            m.notes.push_back(std::string("width_frequency: ") + e.what());
        }
        m.save(config.out_dir / "manifest.json");
    } else if (name == "fig7") {
        if (config.beta_list.empty()) config.beta_list = {2e-5, 3e-5, 4e-5, 5e-5, 6e-5};
        sweep_beta(config);
    } else if (name == "fig9") {
        const std::vector<int> kicks = {990, 991, 992, 993, 994, 995};
        ExperimentConfig interacting = config;
        interacting.out_dir = config.out_dir / "beta_on";
        interacting.twin.n_kicks = 995;
        run_wigner_sequence(interacting, kicks);
        ExperimentConfig free = interacting;
        free.out_dir = config.out_dir / "beta_off";
        free.twin.beta = 0.0;
        run_wigner_sequence(free, kicks);
    } else {
        throw ConfigError("unknown figure scenario: " + name);
    }
}

} // namespace kickfid
