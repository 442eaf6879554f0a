#include "cqed/pipelines.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>

#include "cqed/backaction.hpp"
#include "cqed/cavity_field.hpp"
#include "cqed/dephasing.hpp"
#include "cqed/fft.hpp"
#include "cqed/io/csv.hpp"
#include "cqed/io/manifest.hpp"
#include "cqed/model.hpp"
#include "cqed/noise_sampling.hpp"
#include "cqed/signal_metrics.hpp"
#include "cqed/spin_bath.hpp"
#include "cqed/spin_echo_exact.hpp"
#include "cqed/subspace_oracle.hpp"
#include "cqed/transmission.hpp"

namespace cqed::io {

namespace {

using cplx = std::complex<double>;

struct Context {
    const ExperimentConfig& cfg;
    std::string dir;
    RunResult result;

    std::string path(const std::string& name) const { return dir + "/" + name; }

    void check(const std::string& name, bool ok, const std::string& detail) {
        result.checks.push_back({name, ok, detail});
    }
};

std::vector<double> linear_grid(double start, double stop, int points) {
    if (points < 2 || !(stop > start))
        throw std::runtime_error("grid needs points >= 2 and stop > start");
    std::vector<double> g(points);
    for (int i = 0; i < points; ++i)
        g[i] = start + (stop - start) * i / (points - 1);
    return g;
}

SpectralDensity load_spectrum(const ExperimentConfig& cfg) {
    SpectralDensity sd;
    sd.lines = cfg.spectrum.lines;
    if (!cfg.spectrum.table_path.empty()) {
        read_two_column(cfg.spectrum.table_path, sd.omega, sd.classical);
        if (!cfg.spectrum.quantum_table_path.empty()) {
            std::vector<double> w;
            read_two_column(cfg.spectrum.quantum_table_path, w, sd.quantum);
            if (w != sd.omega)
                throw ConfigError(
                    {{0, "quantum table grid must match the classical grid"}});
        }
    }
    sd.validate();
    return sd;
}

// Cavity-free echo envelope at t = n tau: exact single-spin evolution when
// a [spin] section is present, the spectral-density exponents when a
// [spectrum] section is present, bare Markovian dephasing otherwise.
std::function<cplx(double)> free_envelope_factory(const ExperimentConfig& cfg,
                                                  double tau) {
    bool has_spin = cfg.has_spin;
    bool has_spectrum = !cfg.spectrum.empty();
    auto spin = cfg.spin;
    double gamma_phi = cfg.system.gamma_phi;
    SpectralDensity sd;
    if (has_spectrum) sd = load_spectrum(cfg);
    return [=](double t) -> cplx {
        int n = static_cast<int>(std::lround(t / tau));
        cplx c{1.0, 0.0};
        if (has_spin) {
            c *= exact_envelope(PulseSequence::cpmg(n, tau), spin);
        } else if (gamma_phi > 0.0) {
            c *= std::exp(-gamma_phi * t);
        }
        if (has_spectrum) {
            auto seq = PulseSequence::cpmg(n, tau);
            double chi = chi_attenuation(seq, sd, t);
            double phi = quantum_phase_from_spectrum(seq, sd, t);
            c *= std::exp(cplx(-chi, -phi));
        }
        return c;
    };
}

void write_check_summary(Context& ctx) {
    std::ofstream out(ctx.path("check_summary.txt"));
    if (!out)
        throw std::runtime_error("cannot open " + ctx.path("check_summary.txt"));
    out << "experiment = " << to_string(ctx.cfg.kind) << "\n";
    out << "checks = " << ctx.result.checks.size() << "\n";
    for (const auto& c : ctx.result.checks)
        out << c.name << " = " << (c.passed ? "pass" : "fail") << " ("
            << c.detail << ")\n";
    out << "status = "
        << (ctx.result.all_checks_passed() ? "ok" : "check_failure") << "\n";
    ctx.result.outputs.push_back(ctx.path("check_summary.txt"));
}

void run_fid(Context& ctx) {
    const auto& cfg = ctx.cfg;
    auto grid = cfg.grids.time_points > 1
                    ? linear_grid(cfg.grids.time_start, cfg.grids.time_stop,
                                  cfg.grids.time_points)
                    : linear_grid(0.0, cfg.sequence.duration, 501);
    EnsembleParams ep = cfg.system.ensemble();

    CsvWriter csv(ctx.path("fid_envelope.csv"), {"t", "re", "im", "abs"});
    csv.metadata("t2star", ep.t2star);
    csv.metadata("gamma_phi", cfg.system.gamma_phi);
    for (double t : grid) {
        double x = t / ep.t2star;
        cplx c = std::exp(-x * x - cfg.system.gamma_phi * t);
        csv.row({t, c.real(), c.imag(), std::abs(c)});
    }
    csv.close();
    ctx.result.outputs.push_back(ctx.path("fid_envelope.csv"));

    // closed form against the ensemble quadrature on a coarse subsample
    double worst = 0.0;
    for (int i = 0; i < 5; ++i) {
        double t = grid.front() +
                   (grid.back() - grid.front()) * (i + 1) / 6.0;
        cplx avg = gaussian_average(
            [&](double eta) { return std::exp(cplx(0.0, -eta * t)); }, ep);
        double x = t / ep.t2star;
        worst = std::max(worst, std::abs(avg - std::exp(-x * x)));
    }
    ctx.check("fid_quadrature_matches", worst < 1e-9,
              "max abs deviation " + format_full(worst));
}

void run_cpmg(Context& ctx) {
    const auto& cfg = ctx.cfg;
    CavityParams cp = cfg.system.cavity();
    EnsembleParams ep = cfg.system.ensemble();
    int n = cfg.sequence.n_pulses;
    double tau = cfg.sequence.tau;

    auto env = full_envelope(n, tau, cp, ep,
                             free_envelope_factory(cfg, tau),
                             PurcellMode::exact, cp.delta);

    CsvWriter csv(ctx.path("cpmg_envelope.csv"),
                  {"n", "t", "gbar", "c_re", "c_im", "total_re", "total_im",
                   "total_abs"});
    csv.metadata("kappa", cp.kappa);
    csv.metadata("g", cp.g);
    csv.metadata("t2star", ep.t2star);
    csv.metadata("tau", tau);
    for (int k = 0; k <= n; ++k) {
        cplx total = env.weights[k] * env.values[k];
        csv.row({static_cast<double>(k), k * tau, env.weights[k].real(),
                 env.values[k].real(), env.values[k].imag(), total.real(),
                 total.imag(), std::abs(total)});
    }
    csv.close();
    ctx.result.outputs.push_back(ctx.path("cpmg_envelope.csv"));

    auto times = linear_grid(0.0, (n + 0.5) * tau,
                             std::max(cfg.grids.time_points, 2001));
    auto field = revival_train(env, cfg.signal.sigma_x0, cp, ep, times);
    CsvWriter fcsv(ctx.path("cpmg_field.csv"), {"t", "re", "im", "abs"});
    for (std::size_t i = 0; i < field.times.size(); ++i)
        fcsv.row({field.times[i], field.values[i].real(),
                  field.values[i].imag(), std::abs(field.values[i])});
    fcsv.close();
    ctx.result.outputs.push_back(ctx.path("cpmg_field.csv"));

    auto report = signal_strength(cp, ep, env, cfg.signal.sigma_x0);
    std::ofstream rpt(ctx.path("cpmg_signal.txt"));
    rpt << "n_eff = " << format_full(report.n_eff) << "\n";
    rpt << "s = " << format_full(report.s) << "\n";
    rpt << "s_raw = " << format_full(report.s_raw) << "\n";
    rpt << "s_max = " << format_full(report.bounds.max) << "\n";
    ctx.result.outputs.push_back(ctx.path("cpmg_signal.txt"));

    double max_abs = 0.0;
    for (int k = 1; k <= n; ++k)
        max_abs = std::max(max_abs, std::abs(env.values[k]));
    ctx.check("envelope_bounded", max_abs <= 1.0 + 1e-9,
              "max |C| = " + format_full(max_abs));
    ctx.check("unit_anchor",
              env.weights[0] == cplx{1.0, 0.0} &&
                  env.values[0] == cplx{1.0, 0.0},
              "C(0) and weight 0 pinned to 1");
}

void run_eseem(Context& ctx) {
    const auto& cfg = ctx.cfg;
    auto taus = linear_grid(cfg.grids.time_start, cfg.grids.time_stop,
                            cfg.grids.time_points);
    auto freqs = spin_frequencies(cfg.spin);

    CsvWriter csv(ctx.path("eseem_envelope.csv"), {"tau", "re", "im", "abs"});
    csv.metadata("omega_plus", freqs.omega_plus);
    csv.metadata("omega_minus", freqs.omega_minus);
    csv.metadata("visibility", freqs.visibility);
    std::vector<cplx> samples(taus.size());
    for (std::size_t i = 0; i < taus.size(); ++i) {
        cplx c = taus[i] == 0.0 ? cplx{1.0, 0.0}
                                : exact_hahn_envelope(taus[i], cfg.spin);
        samples[i] = c;
        csv.row({taus[i], c.real(), c.imag(), std::abs(c)});
    }
    csv.close();
    ctx.result.outputs.push_back(ctx.path("eseem_envelope.csv"));

    // spectrum of the modulation (mean removed so the DC line cannot mask
    // the precession peaks)
    cplx mean{0.0, 0.0};
    for (const auto& c : samples) mean += c;
    mean /= static_cast<double>(samples.size());
    std::vector<cplx> centered(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i)
        centered[i] = samples[i] - mean;
    double dt = taus[1] - taus[0];
    auto spec = one_sided_spectrum(centered, dt);
    CsvWriter scsv(ctx.path("eseem_spectrum.csv"), {"omega", "magnitude"});
    scsv.metadata("bin_width", spec.bin_width);
    for (std::size_t i = 0; i < spec.omega.size(); ++i)
        scsv.row({spec.omega[i], spec.magnitude[i]});
    scsv.close();
    ctx.result.outputs.push_back(ctx.path("eseem_spectrum.csv"));

    auto peaks = spectrum_peaks(spec);
    CsvWriter pcsv(ctx.path("eseem_peaks.csv"), {"omega", "magnitude"});
    for (auto k : peaks) pcsv.row({spec.omega[k], spec.magnitude[k]});
    pcsv.close();
    ctx.result.outputs.push_back(ctx.path("eseem_peaks.csv"));

    // every predicted precession line should land within one bin
    std::vector<double> predicted = {
        freqs.omega_minus, freqs.omega_plus - freqs.omega_minus,
        freqs.omega_plus, freqs.omega_plus + freqs.omega_minus};
    double worst = 0.0;
    for (double w : predicted) {
        double best = 1e300;
        for (auto k : peaks) best = std::min(best, std::abs(spec.omega[k] - w));
        worst = std::max(worst, best);
    }
    ctx.check("peaks_within_bin", worst <= spec.bin_width,
              "worst offset " + format_full(worst) + " vs bin " +
                  format_full(spec.bin_width));
}

void run_transmission(Context& ctx) {
    const auto& cfg = ctx.cfg;
    TransmissionParams tp;
    tp.cavity_freq = cfg.system.cavity_freq;
    tp.qubit_freq = cfg.system.qubit_splitting != 0.0
                        ? cfg.system.qubit_splitting
                        : cfg.system.cavity_freq - cfg.system.delta;
    tp.kappa = cfg.system.kappa;
    tp.kappa1 = cfg.system.kappa1;
    tp.kappa2 = cfg.system.kappa2;
    tp.g = cfg.system.g;
    SpinBathParams sb = cfg.spin;
    EnsembleParams ep = cfg.system.ensemble();

    auto scan = transmission_scan(tp, sb, ep, cfg.transmission.probe_points,
                                  cfg.transmission.tolerance);
    std::vector<double> mag(scan.omega.size());
    for (std::size_t i = 0; i < mag.size(); ++i)
        mag[i] = std::abs(scan.amplitude[i]);
    int features = count_spectral_features(mag);

    CsvWriter csv(ctx.path("transmission_scan.csv"),
                  {"omega", "abs", "re", "im"});
    csv.metadata("t2star", ep.t2star);
    csv.metadata("feature_count", static_cast<double>(features));
    for (std::size_t i = 0; i < scan.omega.size(); ++i)
        csv.row({scan.omega[i], mag[i], scan.amplitude[i].real(),
                 scan.amplitude[i].imag()});
    csv.close();
    ctx.result.outputs.push_back(ctx.path("transmission_scan.csv"));

    double bound = transmission_passivity_bound(tp) + 1e-9;
    double max_mag = *std::max_element(mag.begin(), mag.end());
    ctx.check("passive", max_mag <= bound,
              "max |A_T| = " + format_full(max_mag) + " vs bound " +
                  format_full(bound));
    ctx.check("resolved", features >= 1,
              "feature count " + std::to_string(features));
}

void run_signal(Context& ctx) {
    const auto& cfg = ctx.cfg;
    CavityParams cp = cfg.system.cavity();
    EnsembleParams ep = cfg.system.ensemble();
    double tau = cfg.sequence.tau;

    SignalReport report;
    if (cfg.signal.t_on >= 0.0) {
        report = pulsed_coupling_signal(cp, ep, tau, cfg.signal.t_on,
                                        cfg.signal.sigma_x0);
    } else {
        auto env = full_envelope(cfg.signal.n_echoes, tau, cp, ep,
                                 free_envelope_factory(cfg, tau),
                                 PurcellMode::exact, cp.delta);
        report = signal_strength(cp, ep, env, cfg.signal.sigma_x0);

        CsvWriter csv(ctx.path("signal_contributions.csv"),
                      {"n", "t", "gbar", "c_abs", "term"});
        for (int k = 1; k <= env.n_echoes; ++k) {
            double term = std::norm(env.weights[k] * env.values[k]);
            csv.row({static_cast<double>(k), k * tau,
                     env.weights[k].real(), std::abs(env.values[k]), term});
        }
        csv.close();
        ctx.result.outputs.push_back(ctx.path("signal_contributions.csv"));
    }

    std::ofstream rpt(ctx.path("signal_report.txt"));
    rpt << "protocol = "
        << (report.protocol == SignalProtocol::pulsed_coupling
                ? "pulsed_coupling"
                : "static_coupling")
        << "\n";
    rpt << "n_eff = " << format_full(report.n_eff) << "\n";
    rpt << "n_eff_infinite = " << (report.n_eff_infinite ? 1 : 0) << "\n";
    rpt << "s = " << format_full(report.s) << "\n";
    rpt << "s_raw = " << format_full(report.s_raw) << "\n";
    rpt << "regime_violation = " << (report.regime_violation ? 1 : 0) << "\n";
    rpt << "s_hahn = " << format_full(report.bounds.hahn) << "\n";
    rpt << "s_cpmg = " << format_full(report.bounds.cpmg) << "\n";
    rpt << "s_max = " << format_full(report.bounds.max) << "\n";
    if (report.protocol == SignalProtocol::pulsed_coupling)
        rpt << "t_on = " << format_full(report.t_on) << "\n";
    ctx.result.outputs.push_back(ctx.path("signal_report.txt"));

    ctx.check("signal_in_range", report.s >= 0.0 && report.s <= 1.0 + 1e-12,
              "s = " + format_full(report.s));
    ctx.check("below_port_bound", report.s <= report.bounds.max + 1e-9,
              "s_max = " + format_full(report.bounds.max));
}

void run_oracle_compare(Context& ctx) {
    const auto& cfg = ctx.cfg;
    CavityParams cp = cfg.system.cavity();
    EnsembleParams ep = cfg.system.ensemble();
    int n = cfg.sequence.n_pulses;
    double tau = cfg.sequence.tau;
    double t_final = cfg.oracle.t_final > 0.0
                         ? cfg.oracle.t_final
                         : n * tau + 40.0 / cp.kappa;
    double span = cfg.oracle.span > 0.0 ? cfg.oracle.span : 15.0 * cp.kappa;

    auto nodes = truncated_detuning_nodes(ep);
    std::vector<double> echo_times;
    for (int k = 1; k <= n; ++k) echo_times.push_back(k * tau);
    std::vector<double> trace_times;
    int per_tau = std::max(cfg.oracle.samples_per_tau, 2);
    for (int k = 1; k * tau / per_tau <= t_final; ++k)
        trace_times.push_back(k * tau / per_tau);

    auto traj = averaged_observables(nodes, cp, n, tau, t_final, trace_times);

    CsvWriter trace(ctx.path("oracle_trace.csv"),
                    {"t", "c_re", "c_im", "field_re", "field_im", "photon"});
    trace.metadata("kappa", cp.kappa);
    trace.metadata("g", cp.g);
    trace.metadata("t2star", ep.t2star);
    trace.metadata("tau", tau);
    for (std::size_t i = 0; i < traj.times.size(); ++i)
        trace.row({traj.times[i], traj.coherence[i].real(),
                   traj.coherence[i].imag(), traj.field[i].real(),
                   traj.field[i].imag(), traj.photon[i]});
    trace.close();
    ctx.result.outputs.push_back(ctx.path("oracle_trace.csv"));

    // per-echo comparison against the closed-form envelope
    auto free_env = free_envelope_factory(cfg, tau);
    CsvWriter cmp(ctx.path("oracle_compare.csv"),
                  {"n", "t", "c_oracle_re", "c_oracle_im", "c_formula_re",
                   "c_formula_im", "rel_dev"});
    double worst_dev = 0.0;
    for (int k = 1; k <= n; ++k) {
        double t = k * tau;
        std::size_t best = 0;
        double dist = 1e300;
        for (std::size_t i = 0; i < traj.times.size(); ++i) {
            double d = std::abs(traj.times[i] - t);
            if (d < dist) {
                dist = d;
                best = i;
            }
        }
        cplx c_oracle = traj.coherence[best];
        cplx c_formula =
            purcell_envelope_factor_exact(t, cp, ep).value * free_env(t);
        double dev = std::abs(c_oracle - c_formula) / std::abs(c_formula);
        worst_dev = std::max(worst_dev, dev);
        cmp.row({static_cast<double>(k), t, c_oracle.real(), c_oracle.imag(),
                 c_formula.real(), c_formula.imag(), dev});
    }
    cmp.close();
    ctx.result.outputs.push_back(ctx.path("oracle_compare.csv"));

    // passivity of the averaged field against the averaged photon number
    double worst_violation = 0.0;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        double lhs = std::norm(traj.field[i]);
        double rhs = traj.photon[i] * (1.0 - traj.photon[i]);
        worst_violation = std::max(worst_violation, lhs - rhs);
    }

    double s_oracle = 0.0;
    bool have_signal = false;
    if (cfg.oracle.line_mode == "markovian") {
        auto line = LineGrid::uniform(span, cfg.oracle.modes, cp);
        s_oracle = oracle_signal(nodes, cp, line, n, tau, t_final);
        have_signal = true;
    }

    auto env = full_envelope(n, tau, cp, ep, free_env, PurcellMode::exact,
                             cp.delta);
    auto report = signal_strength(cp, ep, env, 1.0);

    std::ofstream rpt(ctx.path("oracle_report.txt"));
    rpt << "max_envelope_rel_dev = " << format_full(worst_dev) << "\n";
    rpt << "max_passivity_violation = " << format_full(worst_violation)
        << "\n";
    if (have_signal) rpt << "s_oracle = " << format_full(s_oracle) << "\n";
    rpt << "s_formula = " << format_full(report.s) << "\n";
    ctx.result.outputs.push_back(ctx.path("oracle_report.txt"));

    ctx.check("envelope_dev", worst_dev <= 0.02,
              "max rel dev " + format_full(worst_dev));
    ctx.check("passivity", worst_violation <= 1e-12,
              "max violation " + format_full(worst_violation));
}

void run_reconstruct(Context& ctx) {
    const auto& cfg = ctx.cfg;
    CavityParams cp = cfg.system.cavity();
    EnsembleParams ep = cfg.system.ensemble();
    int n = cfg.reconstruct.n_echoes;
    double tau = cfg.sequence.tau;
    int j_count =
        cfg.reconstruct.detunings > 0 ? cfg.reconstruct.detunings : n + 1;
    if (j_count < n + 1)
        throw ConfigError(
            {{0, "reconstruct.detunings must be at least n_echoes + 1"}});

    auto env = full_envelope(n, tau, cp, ep, free_envelope_factory(cfg, tau),
                             PurcellMode::exact, cp.delta);

    double spacing = 2.0 * M_PI / (j_count * tau);
    std::vector<double> deltas(j_count);
    std::vector<cplx> peaks(j_count);
    for (int j = 0; j < j_count; ++j) {
        deltas[j] = cp.delta + j * spacing;
        CavityParams probe = cp;
        probe.delta = deltas[j];
        peaks[j] = field_spectrum_peak(env, cfg.signal.sigma_x0, probe, ep);
    }

    auto res = invert_dft(peaks, deltas, tau, env.frame_detuning, env.weights,
                          cfg.signal.sigma_x0, cp, ep,
                          cfg.reconstruct.threshold);

    CsvWriter csv(ctx.path("reconstruct_envelope.csv"),
                  {"n", "true_re", "true_im", "rec_re", "rec_im", "gbar",
                   "recovered", "rel_err"});
    csv.metadata("tau", tau);
    csv.metadata("detunings", static_cast<double>(j_count));
    double worst = 0.0;
    for (int k = 0; k <= n; ++k) {
        double err = 0.0;
        if (res.recovered[k]) {
            err = std::abs(res.envelope.values[k] - env.values[k]) /
                  std::max(1e-300, std::abs(env.values[k]));
            worst = std::max(worst, err);
        }
        csv.row({static_cast<double>(k), env.values[k].real(),
                 env.values[k].imag(), res.envelope.values[k].real(),
                 res.envelope.values[k].imag(), env.weights[k].real(),
                 res.recovered[k] ? 1.0 : 0.0, err});
    }
    csv.close();
    ctx.result.outputs.push_back(ctx.path("reconstruct_envelope.csv"));

    ctx.check("round_trip", worst <= 1e-6,
              "max rel err " + format_full(worst));
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg) {
    Context ctx{cfg, cfg.output_dir, {}};
    std::filesystem::create_directories(ctx.dir);

    // declared up front so a crash leaves a manifest naming what is missing
    static const std::map<ExperimentKind, std::vector<std::string>> declared =
        {
            {ExperimentKind::fid, {"fid_envelope.csv"}},
            {ExperimentKind::cpmg,
             {"cpmg_envelope.csv", "cpmg_field.csv", "cpmg_signal.txt"}},
            {ExperimentKind::eseem,
             {"eseem_envelope.csv", "eseem_spectrum.csv", "eseem_peaks.csv"}},
            {ExperimentKind::transmission, {"transmission_scan.csv"}},
            {ExperimentKind::signal,
             {"signal_report.txt", "signal_contributions.csv"}},
            {ExperimentKind::oracle_compare,
             {"oracle_trace.csv", "oracle_compare.csv", "oracle_report.txt"}},
            {ExperimentKind::reconstruct, {"reconstruct_envelope.csv"}},
        };
    write_manifest(ctx.path("manifest.json"), cfg, declared.at(cfg.kind));
    ctx.result.outputs.push_back(ctx.path("manifest.json"));

    switch (cfg.kind) {
        case ExperimentKind::fid: run_fid(ctx); break;
        case ExperimentKind::cpmg: run_cpmg(ctx); break;
        case ExperimentKind::eseem: run_eseem(ctx); break;
        case ExperimentKind::transmission: run_transmission(ctx); break;
        case ExperimentKind::signal: run_signal(ctx); break;
        case ExperimentKind::oracle_compare: run_oracle_compare(ctx); break;
        case ExperimentKind::reconstruct: run_reconstruct(ctx); break;
    }
    write_check_summary(ctx);
    return std::move(ctx.result);
}

}  // namespace cqed::io
