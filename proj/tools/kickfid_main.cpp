// kickfid: kicked-wavepacket fidelity simulations and analysis.
//
// Subcommands mirror the library pipelines: portrait, evolve, fidelity,
// spectrum, wigner, gcorr, sweep-beta, sweep-x0, analytic, reproduce.
// Exit codes: 0 success, 2 configuration error, 3 numerical/regime error.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "kickfid/analytic.hpp"
#include "kickfid/classical.hpp"
#include "kickfid/csv.hpp"
#include "kickfid/experiment.hpp"
#include "kickfid/propagator.hpp"

namespace fs = std::filesystem;
using namespace kickfid;

namespace {

struct CommonOpts {
    TwinConfig twin;
    SpectrumOptions spectral;
    std::string window = "rect";
    std::string out_dir = ".";
};

void add_twin_options(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--K1", o.twin.K1, "stochasticity parameter of the first twin");
    cmd->add_option("--K2", o.twin.K2, "stochasticity parameter of the second twin");
    cmd->add_option("--beta", o.twin.beta, "interaction strength");
    cmd->add_option("--tau", o.twin.tau, "rescaled Planck constant");
    cmd->add_option("--x0", o.twin.x0, "initial wavepacket center (position)");
    cmd->add_option("--p0", o.twin.p0, "initial wavepacket center (momentum)");
    cmd->add_option("--kicks", o.twin.n_kicks, "number of kicks");
    cmd->add_option("--grid-n", o.twin.grid.n_points, "grid points (power of two)");
    cmd->add_option("--grid-xmax", o.twin.grid.x_max, "half-width of the symmetric domain");
    cmd->add_option("--coherent-omega", o.twin.coherent_omega,
                    "initial-state frequency (default: omega(K1))");
    cmd->add_option("--out", o.out_dir, "output directory");
}

void add_spectral_options(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--window", o.window, "spectral window: rect or hann")
        ->check(CLI::IsMember({"rect", "hann"}));
    cmd->add_option("--pad", o.spectral.pad_factor, "zero-padding factor");
}

ExperimentConfig make_config(const CommonOpts& o, const std::string& scenario) {
    ExperimentConfig config;
    config.scenario = scenario;
    config.twin = o.twin;
    config.spectral = o.spectral;
    config.spectral.window = o.window == "hann" ? Window::hann : Window::rectangular;
    config.out_dir = o.out_dir;
    return config;
}

void print_periods(const PeriodExtraction& periods) {
    auto show = [](const char* name, const BandOutcome& b) {
        if (b.has_peak())
            std::cout << name << ": T = " << b.report->period
                      << " kicks (nu = " << b.report->nu
                      << ", amplitude = " << b.report->amplitude << ")\n";
        else
            std::cout << name << ": "
                      << (b.status == BandOutcome::Status::no_peak ? "no peak"
                                                                   : "unresolved")
                      << "\n";
    };
    show("T1 (high band)", periods.t1);
    show("T2 (mid band)", periods.t2);
    show("T3 (low band)", periods.t3);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"kicked-wavepacket fidelity simulator"};
    app.require_subcommand(1);
    app.set_config("--config", "", "flat key-value config file; sections per subcommand");
    app.allow_config_extras(true);

    CommonOpts o;

    // portrait
    auto* portrait = app.add_subcommand("portrait", "classical phase portrait");
    double portrait_K = 1.0;
    int portrait_iters = 3000;
    std::string portrait_out = ".";
    portrait->add_option("--K", portrait_K, "stochasticity parameter");
    portrait->add_option("--iters", portrait_iters, "iterations per seed");
    portrait->add_option("--out", portrait_out, "output directory");

    // evolve
    auto* evolve_cmd = app.add_subcommand("evolve", "single evolution under K1");
    add_twin_options(evolve_cmd, o);

    // fidelity
    auto* fidelity_cmd =
        app.add_subcommand("fidelity", "twin evolution, fidelity and period extraction");
    add_twin_options(fidelity_cmd, o);
    add_spectral_options(fidelity_cmd, o);

    // spectrum
    auto* spectrum_cmd = app.add_subcommand("spectrum", "periodogram of a kick,value CSV");
    std::string spectrum_in;
    std::string spectrum_out_dir = ".";
    std::string spectrum_bands = "default";
    spectrum_cmd->add_option("--in", spectrum_in, "input series CSV")->required();
    spectrum_cmd->add_option("--out", spectrum_out_dir, "output directory");
    spectrum_cmd->add_option("--bands", spectrum_bands,
                             "'default' (high/mid/low) or custom lo:hi[,lo:hi...]");
    add_spectral_options(spectrum_cmd, o);

    // wigner
    auto* wigner_cmd = app.add_subcommand("wigner", "Wigner snapshots at chosen kicks");
    std::vector<int> at_kicks;
    add_twin_options(wigner_cmd, o);
    wigner_cmd->add_option("--at-kick", at_kicks, "kick indices, comma separated")
        ->delimiter(',')
        ->required();

    // gcorr
    auto* gcorr_cmd = app.add_subcommand("gcorr", "lagged Wigner-overlap correlation G(n)");
    int delta_n = 1;
    add_twin_options(gcorr_cmd, o);
    add_spectral_options(gcorr_cmd, o);
    gcorr_cmd->add_option("--delta-n", delta_n, "lag in kicks");

    // sweeps
    auto* sweep_beta_cmd = app.add_subcommand("sweep-beta", "period extraction vs beta");
    std::vector<double> betas;
    add_twin_options(sweep_beta_cmd, o);
    add_spectral_options(sweep_beta_cmd, o);
    sweep_beta_cmd->add_option("--betas", betas, "beta values")->delimiter(',')->required();

    auto* sweep_x0_cmd = app.add_subcommand("sweep-x0", "period extraction vs x0");
    std::vector<double> x0s;
    add_twin_options(sweep_x0_cmd, o);
    add_spectral_options(sweep_x0_cmd, o);
    sweep_x0_cmd->add_option("--x0s", x0s, "x0 values")->delimiter(',')->required();

    // analytic
    auto* analytic_cmd =
        app.add_subcommand("analytic", "closed-form oscillator model series");
    OscModelParams osc;
    double osc_Omega = 0.0, analytic_tmax = 2000.0, analytic_dt_lag = 1.0;
    std::string analytic_out = ".";
    analytic_cmd->add_option("--omega1", osc.omega1)->required();
    analytic_cmd->add_option("--omega2", osc.omega2)->required();
    analytic_cmd->add_option("--rho", osc.rho)->required();
    analytic_cmd->add_option("--gamma-x", osc.gamma_x);
    analytic_cmd->add_option("--gamma-p", osc.gamma_p);
    analytic_cmd->add_option("--Omega", osc_Omega, "width-oscillation frequency");
    analytic_cmd->add_option("--phi-x", osc.phi_x);
    analytic_cmd->add_option("--phi-p", osc.phi_p);
    analytic_cmd->add_option("--tau", osc.hbar_eff)->required();
    analytic_cmd->add_option("--t-max", analytic_tmax);
    analytic_cmd->add_option("--delta-t", analytic_dt_lag, "lag for the G column");
    analytic_cmd->add_option("--out", analytic_out, "output directory");

    // reproduce
    auto* reproduce_cmd = app.add_subcommand("reproduce", "named figure scenarios");
    std::string fig;
    reproduce_cmd
        ->add_option("--figure,figure", fig, "fig1 ... fig9")
        ->required();
    add_twin_options(reproduce_cmd, o);
    add_spectral_options(reproduce_cmd, o);

    try {
        app.parse(argc, argv);

        if (*portrait) {
            ExperimentConfig config;
            config.twin.K1 = portrait_K;
            config.out_dir = portrait_out;
            const auto orbits =
                phase_portrait(portrait_K, default_portrait_seeds(), portrait_iters);
            csv::write_portrait(fs::path(portrait_out) / "portrait.csv", orbits,
                                "manifest.json");
            RunManifest m;
            m.scenario = "portrait";
            m.config = config.twin;
            m.omega1 = tangent_eigen(portrait_K).omega;
            m.outputs = {"portrait.csv"};
            m.save(fs::path(portrait_out) / "manifest.json");
            std::cout << "portrait: " << orbits.size() << " orbits, omega(K) = "
                      << m.omega1 << "\n";
        } else if (*evolve_cmd) {
            const ExperimentConfig config = make_config(o, "evolve");
            const WaveFunction psi0 = config.twin.initial_state();
            const EvolveResult res = evolve(psi0, config.twin.params1());
            RunManifest m;
            m.scenario = "evolve";
            m.config = config.twin;
            m.omega1 = tangent_eigen(config.twin.K1).omega;
            m.leak_count1 = res.leaks.count;
            m.leak_max1 = res.leaks.max_amplitude;
            m.outputs = {"psi_final.csv"};
            csv::write_wavefunction(config.out_dir / "psi_final.csv", res.state,
                                    "manifest.json");
            m.save(config.out_dir / "manifest.json");
            std::cout << "evolved " << config.twin.n_kicks
                      << " kicks; final norm = " << res.state.norm()
                      << ", boundary = " << res.state.boundary_amplitude() << "\n";
        } else if (*fidelity_cmd) {
            const auto res = run_fidelity_experiment(make_config(o, "fidelity"));
            print_periods(res.periods);
        } else if (*spectrum_cmd) {
            const TimeSeries series = csv::read_series(spectrum_in);
            const ExperimentConfig config = make_config(o, "spectrum");
            const Spectrum spec = periodogram(series, config.spectral);
            csv::write_spectrum(fs::path(spectrum_out_dir) / "spectrum.csv", spec, "");
            if (spectrum_bands == "default") {
                const PeriodExtraction periods =
                    extract_periods(series, series.size(), config.spectral);
                print_periods(periods);
            } else {
                std::stringstream bands(spectrum_bands);
                std::string item;
                int index = 0;
                while (std::getline(bands, item, ',')) {
                    const auto colon = item.find(':');
                    if (colon == std::string::npos)
                        throw ConfigError("--bands entries must be lo:hi, got " + item);
                    Band band{std::stod(item.substr(0, colon)),
                              std::stod(item.substr(colon + 1)),
                              "band" + std::to_string(index++)};
                    try {
                        const PeakReport peak = find_band_peak(spec, band);
                        std::cout << band.label << " [" << band.lo << "," << band.hi
                                  << "]: nu = " << peak.nu << " (T = " << peak.period
                                  << ", amplitude = " << peak.amplitude << ")\n";
                    } catch (const NoPeakError&) {
                        std::cout << band.label << " [" << band.lo << "," << band.hi
                                  << "]: no peak\n";
                    }
                }
            }
        } else if (*wigner_cmd) {
            const auto res = run_wigner_sequence(make_config(o, "wigner"), at_kicks);
            for (size_t i = 0; i < res.kicks.size(); ++i)
                std::cout << "kick " << res.kicks[i]
                          << ": covariance det = " << res.covariance_dets[i] << "\n";
        } else if (*gcorr_cmd) {
            const auto res = run_g_correlation(make_config(o, "gcorr"), delta_n);
            if (res.g_mid_peak.has_peak())
                std::cout << "G mid peak: nu = " << res.g_mid_peak.report->nu
                          << " (T = " << res.g_mid_peak.report->period << ")\n";
            else
                std::cout << "G mid peak: none\n";
            if (res.fidelity_mid_peak.has_peak())
                std::cout << "fidelity mid peak: nu = "
                          << res.fidelity_mid_peak.report->nu
                          << " (T = " << res.fidelity_mid_peak.report->period << ")\n";
            else
                std::cout << "fidelity mid peak: none\n";
        } else if (*sweep_beta_cmd) {
            ExperimentConfig config = make_config(o, "sweep-beta");
            config.beta_list = betas;
            const auto rows = sweep_beta(config);
            std::cout << "sweep-beta: " << rows.size() << " points -> "
                      << (config.out_dir / "beta_sweep.csv") << "\n";
        } else if (*sweep_x0_cmd) {
            ExperimentConfig config = make_config(o, "sweep-x0");
            config.x0_list = x0s;
            const auto rows = sweep_x0(config);
            std::cout << "sweep-x0: " << rows.size() << " points -> "
                      << (config.out_dir / "x0_sweep.csv") << "\n";
        } else if (*analytic_cmd) {
            if (osc.sigma_x2 == 0.0) {
                const OscModelParams coh = OscModelParams::coherent(
                    osc.omega1, osc.omega2, osc.rho, osc.hbar_eff, osc.m);
                osc.sigma_x2 = coh.sigma_x2;
                osc.sigma_p2 = coh.sigma_p2;
            }
            osc.Omega1 = osc.Omega2 = osc_Omega;
            osc.validate();
            fs::create_directories(analytic_out);
            std::ofstream out(fs::path(analytic_out) / "analytic.csv",
                              std::ios::binary);
            if (!out) throw ConfigError("cannot write analytic.csv");
            out << "kick,F_exact,F_expanded,G\n";
            for (int t = 0; t <= static_cast<int>(analytic_tmax); ++t) {
                const double fe = fidelity_exact(t, osc);
                const double fx = correlation_prefactor_exact(t, osc) *
                                  std::exp(-0.5 * s_sum_expanded(t, osc));
                const double g = wigner_correlation_analytic(t, analytic_dt_lag, osc);
                out << t << "," << csv::format_double(fe) << ","
                    << csv::format_double(fx) << "," << csv::format_double(g) << "\n";
            }
            std::cout << "analytic series written to "
                      << (fs::path(analytic_out) / "analytic.csv") << "\n";
        } else if (*reproduce_cmd) {
            reproduce_figure(fig, make_config(o, fig));
            std::cout << "reproduced " << fig << " into " << o.out_dir << "\n";
        }
        return 0;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
