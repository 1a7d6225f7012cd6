#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "kickfid/csv.hpp"
#include "kickfid/experiment.hpp"

using namespace kickfid;
namespace fs = std::filesystem;

namespace {

// Small but physical: 1024-point grid, 2048 kicks.
ExperimentConfig small_config(const fs::path& dir) {
    ExperimentConfig config;
    config.twin.grid = {1024, 8.0};
    config.twin.n_kicks = 2048;
    config.out_dir = dir;
    return config;
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("kickfid_test_" + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("manifest round-trips losslessly") {
    RunManifest m;
    m.scenario = "roundtrip";
    m.config.beta = 6e-5;
    m.config.x0 = 0.18;
    m.config.coherent_omega = 1.0471975511965977;
    m.spectral.window = Window::hann;
    m.spectral.pad_factor = 8;
    m.omega1 = 1.0471975511965977;
    m.omega2 = 1.0529614951625174;
    m.delta_omega_value = m.omega1 - m.omega2;
    m.peaks.push_back({"high", "peak", 0.3341, 2.9931, 12.5});
    m.peaks.push_back({"mid", "no_peak", 0.0, 0.0, 0.0});
    m.leak_count1 = 3;
    m.leak_max1 = 2.5e-5;
    m.outputs = {"fidelity.csv"};
    m.notes = {"note one"};
    m.wall_time_s = 1.25;

    const nlohmann::json j = to_json(m);
    const RunManifest back = manifest_from_json(nlohmann::json::parse(j.dump()));
    CHECK(to_json(back) == j);
    CHECK(back.config == m.config);
    CHECK(back.peaks == m.peaks);
    CHECK(back.omega2 == m.omega2);
}

TEST_CASE("fidelity experiment writes a complete run") {
    TempDir dir("fidelity");
    const ExperimentConfig config = small_config(dir.path);
    const FidelityExperimentResult res = run_fidelity_experiment(config);

    CHECK(res.fidelity_series.size() == config.twin.n_kicks);
    for (double f : res.fidelity_series.values) {
        CHECK(f >= 0.0);
        CHECK(f <= 1.0 + 1e-9);
    }
    CHECK(res.periods.t1.has_peak());
    CHECK(res.periods.t1.report->period > 2.9);
    CHECK(res.periods.t1.report->period < 3.2);

    CHECK(fs::exists(dir.path / "fidelity.csv"));
    CHECK(fs::exists(dir.path / "width.csv"));
    CHECK(fs::exists(dir.path / "spectrum.csv"));
    CHECK(fs::exists(dir.path / "manifest.json"));

    const RunManifest loaded = RunManifest::load(dir.path / "manifest.json");
    CHECK(loaded.config == config.twin);
    CHECK(loaded.peaks.size() == 3);

    SUBCASE("series files round-trip through the reader") {
        const TimeSeries series = csv::read_series(dir.path / "fidelity.csv");
        CHECK(series.size() == res.fidelity_series.size());
        CHECK(series.start_kick == 1);
        CHECK(series.values[10] == res.fidelity_series.values[10]);
    }
}

TEST_CASE("runs are deterministic byte for byte") {
    TempDir a("det_a"), b("det_b");
    ExperimentConfig ca = small_config(a.path);
    ca.twin.n_kicks = 1024;
    ExperimentConfig cb = small_config(b.path);
    cb.twin.n_kicks = 1024;
    run_fidelity_experiment(ca);
    run_fidelity_experiment(cb);
    CHECK(slurp(a.path / "fidelity.csv") == slurp(b.path / "fidelity.csv"));
    CHECK(slurp(a.path / "spectrum.csv") == slurp(b.path / "spectrum.csv"));
    CHECK(slurp(a.path / "width.csv") == slurp(b.path / "width.csv"));
}

TEST_CASE("beta sweep") {
    TempDir dir("sweep_beta");
    SUBCASE("needs at least two points") {
        ExperimentConfig config = small_config(dir.path);
        config.beta_list = {6e-5};
        CHECK_THROWS_AS(sweep_beta(config), ConfigError);
    }
    SUBCASE("produces one row per beta with outputs") {
        ExperimentConfig config = small_config(dir.path);
        config.twin.n_kicks = 1024;
        config.beta_list = {0.0, 6e-5};
        const auto rows = sweep_beta(config);
        REQUIRE(rows.size() == 2);
        CHECK(rows[0].value == 0.0);
        CHECK(rows[1].value == 6e-5);
        for (const SweepRow& r : rows) CHECK(r.T1.has_value());
        CHECK(fs::exists(dir.path / "beta_sweep.csv"));
        CHECK(fs::exists(dir.path / "beta_0" / "fidelity.csv"));
        CHECK(fs::exists(dir.path / "beta_6e-05" / "fidelity.csv"));
        const std::string sweep = slurp(dir.path / "beta_sweep.csv");
        CHECK(sweep.find("beta,T1,T2,T3,amp_T2,Omega_width,T2_pred,reason") !=
              std::string::npos);
    }
}

TEST_CASE("x0 sweep keeps going when a point fails") {
    TempDir dir("sweep_x0");
    ExperimentConfig config = small_config(dir.path);
    config.twin.n_kicks = 512;
    config.x0_list = {0.18, 7.9}; // second point: support off the grid
    const auto rows = sweep_x0(config);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].reason.empty());
    CHECK(!rows[1].reason.empty());
    CHECK(!rows[1].T1.has_value());
    CHECK(fs::exists(dir.path / "x0_sweep.csv"));
}

TEST_CASE("wigner sequence") {
    TempDir dir("wigner_seq");
    ExperimentConfig config = small_config(dir.path);
    config.twin.n_kicks = 32;

    SUBCASE("kick outside the run is rejected") {
        CHECK_THROWS_AS(run_wigner_sequence(config, {10, 64}), ConfigError);
    }
    SUBCASE("emits one snapshot per kick") {
        const WignerSequenceResult res = run_wigner_sequence(config, {0, 16, 32});
        CHECK(res.covariance_dets.size() == 3);
        CHECK(fs::exists(dir.path / "wigner_0.csv"));
        CHECK(fs::exists(dir.path / "wigner_16.csv"));
        CHECK(fs::exists(dir.path / "wigner_32.csv"));
        // minimum-uncertainty start: det = (tau/2)^2
        CHECK(res.covariance_dets[0] ==
              doctest::Approx(config.twin.tau * config.twin.tau / 4.0).epsilon(1e-3));
    }
}

TEST_CASE("g correlation run") {
    TempDir dir("gcorr");
    ExperimentConfig config = small_config(dir.path);
    config.twin.n_kicks = 1024;

    SUBCASE("delta_n must be positive") {
        CHECK_THROWS_AS(run_g_correlation(config, 0), ConfigError);
    }
    SUBCASE("identical twins at the island period stay near unity") {
        ExperimentConfig same = config;
        same.twin.K2 = same.twin.K1;
        same.twin.beta = 0.0;
        same.twin.n_kicks = 256;
        const GCorrelationResult res = run_g_correlation(same, 6);
        REQUIRE(res.g_series.size() > 200);
        double min_g = 1.0;
        for (int i = 0; i < 200; ++i) min_g = std::min(min_g, res.g_series.values[i]);
        CHECK(min_g > 0.9);
        CHECK(fs::exists(dir.path / "gcorr.csv"));
    }
}

TEST_CASE("reproduce dispatch") {
    TempDir dir("repro");
    SUBCASE("unknown figure") {
        ExperimentConfig config = small_config(dir.path);
        CHECK_THROWS_AS(reproduce_figure("fig42", config), ConfigError);
    }
    SUBCASE("portrait figure") {
        ExperimentConfig config = small_config(dir.path);
        reproduce_figure("fig1", config);
        CHECK(fs::exists(dir.path / "portrait.csv"));
        const std::string head = slurp(dir.path / "portrait.csv").substr(0, 64);
        CHECK(head.find("orbit_id,step,x,p") != std::string::npos);
    }
}

TEST_CASE("every figure scenario is invocable and manifests its outputs") {
    TempDir dir("figures");
    for (const std::string fig :
         {"fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9"}) {
        ExperimentConfig config = small_config(dir.path / fig);
        config.twin.n_kicks = (fig == "fig9") ? 1000 : 512;
        reproduce_figure(fig, config);
        const fs::path manifest_path = (fig == "fig9")
                                           ? dir.path / fig / "beta_on" / "manifest.json"
                                           : dir.path / fig / "manifest.json";
        REQUIRE(fs::exists(manifest_path));
        const RunManifest m = RunManifest::load(manifest_path);
        CHECK(!m.outputs.empty());
        for (const std::string& out : m.outputs) {
            CHECK(fs::exists(manifest_path.parent_path() / out));
        }
    }
}

TEST_CASE("window choice moves the fast peak by less than two percent") {
    TempDir dir("window_check");
    ExperimentConfig config = small_config(dir.path);
    config.twin.n_kicks = 4096;
    const FidelityExperimentResult res = run_fidelity_experiment(config);
    const Spectrum rect = periodogram(res.fidelity_series, {Window::rectangular, 4, true});
    const Spectrum hann = periodogram(res.fidelity_series, {Window::hann, 4, true});
    const PeakReport pr = find_band_peak(rect, kHighBand);
    const PeakReport ph = find_band_peak(hann, kHighBand);
    CHECK(std::abs(pr.nu - ph.nu) / pr.nu < 0.02);
}
