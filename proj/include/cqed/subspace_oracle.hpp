#pragma once
// Restricted one-excitation simulators used as brute-force ground truth.
//
// Both engines evolve the toggling-frame amplitudes [g0, e0, g1, e1] for a
// static qubit detuning under CPMG pi_x pulses. Between pulses the coupled
// pair evolves by an exact 2x2 (Markovian engine) or together with explicit
// transmission-line modes (discretized engine). Parity bookkeeping: during
// even-parity intervals the coupled pair is {e0, g1} with e1 free and g0 a
// pure phase; odd parity mirrors the roles.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "cqed/cheb_expm.hpp"
#include "cqed/model.hpp"
#include "cqed/quadrature.hpp"

namespace cqed {

using cplx = std::complex<double>;

enum AmpIndex : int { amp_g0 = 0, amp_e0 = 1, amp_g1 = 2, amp_e1 = 3 };

struct OracleObservables {
    cplx coherence;  // 2(conj(g0) e0 + conj(g1) e1), normalized toggled coherence
    cplx field;      // conj(g0) g1 + conj(e0) e1
    double photon;   // |g1|^2 + |e1|^2
};

// Uniform grid of transmission-line modes with the per-mode coupling fixed
// by the output-port rate and the mode spacing.
struct LineGrid {
    std::vector<double> nu;
    double lambda = 0.0;

    static LineGrid uniform(double span, int count, const CavityParams& cp) {
        if (count < 2 || span <= 0.0)
            throw std::invalid_argument("LineGrid: need count >= 2, span > 0");
        LineGrid grid;
        grid.nu.resize(count);
        double dnu = 2.0 * span / (count - 1);
        for (int k = 0; k < count; ++k) grid.nu[k] = -span + dnu * k;
        grid.lambda = std::sqrt(cp.kappa2 * dnu / (2.0 * M_PI));
        return grid;
    }

    double spacing() const { return nu.size() > 1 ? nu[1] - nu[0] : 0.0; }
    // Finite mode spacing makes emission revive; runs must stay shorter.
    double recurrence_time() const {
        double d = spacing();
        return d > 0.0 ? 2.0 * M_PI / d : 0.0;
    }
};

struct ScheduleEvent {
    double time;
    bool is_pulse;
};

// CPMG pulses at (n - 1/2) tau plus caller sample times, closed by a final
// sample at t_end. Pulses order before samples at equal times.
inline std::vector<ScheduleEvent> cpmg_schedule(
    int n_pulses, double tau, double t_end,
    const std::vector<double>& sample_times = {}) {
    std::vector<ScheduleEvent> ev;
    for (int n = 1; n <= n_pulses; ++n) {
        double t = (n - 0.5) * tau;
        if (t <= t_end) ev.push_back({t, true});
    }
    for (double t : sample_times)
        if (t <= t_end) ev.push_back({t, false});
    std::sort(ev.begin(), ev.end(), [](const auto& a, const auto& b) {
        if (a.time != b.time) return a.time < b.time;
        return a.is_pulse && !b.is_pulse;
    });
    if (ev.empty() || ev.back().time < t_end - 1e-12 || ev.back().is_pulse)
        ev.push_back({t_end, false});
    return ev;
}

// Drives an engine through a schedule; on_sample(time) fires at each sample
// event with the engine state current.
template <typename Engine, typename OnSample>
void run_schedule(Engine& eng, const std::vector<ScheduleEvent>& schedule,
                  OnSample&& on_sample) {
    int parity = 0;
    for (const auto& ev : schedule) {
        double h = ev.time - eng.time();
        if (h > 0.0) eng.step(h, parity);
        if (ev.is_pulse)
            ++parity;
        else
            on_sample(ev.time);
    }
}

// Gauss-Hermite detuning nodes with the far tail cut, matching the ensemble
// weight. Weights are not renormalized after the cut (the tail is beyond
// double precision anyway).
struct DetuningNodes {
    std::vector<double> etas;
    std::vector<double> weights;
};

inline DetuningNodes truncated_detuning_nodes(const EnsembleParams& ep,
                                              int order = 200,
                                              double xcut = 7.0) {
    const auto& rule = gauss_hermite(order);
    DetuningNodes out;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        if (std::abs(rule.nodes[i]) > xcut) continue;
        out.etas.push_back(hermite_node_to_detuning(rule.nodes[i], ep));
        out.weights.push_back(rule.weights[i]);
    }
    return out;
}

namespace detail {

struct PairPropagator {
    cplx u11, u12, u22, mean, rho;
};

// Exact e^{-iHh} for H = [[a, g], [g, b]] with complex b (photon loss).
inline PairPropagator pair_propagator(double eta, double h,
                                      const CavityParams& cp) {
    cplx a{0.5 * eta, 0.0};
    cplx b{-0.5 * eta + cp.delta, -0.5 * cp.kappa};
    cplx m = 0.5 * (a + b);
    cplx dd = 0.5 * (a - b);
    cplx rho = std::sqrt(dd * dd + cp.g * cp.g);
    cplx ph = std::exp(cplx{0.0, -1.0} * m * h);
    cplx c = std::cos(rho * h);
    cplx rh = rho * h;
    cplx sn = std::abs(rh) < 1e-8 ? h * (1.0 - rh * rh / 6.0)
                                  : std::sin(rh) / rho;
    const cplx i1{0.0, 1.0};
    return {ph * (c - i1 * sn * dd), ph * (-i1 * sn * cp.g),
            ph * (c + i1 * sn * dd), m, rho};
}

// int_0^h e^{izs} ds, stable for small |zh|.
inline cplx phase_window(cplx z, double h) {
    cplx zh = z * h;
    if (std::abs(zh) < 1e-6)
        return h * (1.0 + cplx{0.0, 0.5} * zh - zh * zh / 6.0);
    return (std::exp(cplx{0.0, 1.0} * zh) - 1.0) / (cplx{0.0, 1.0} * z);
}

}  // namespace detail

// Markovian-line engine: photon amplitudes decay at kappa/2 while emission
// into each line mode accumulates analytically per interval. Handles a whole
// vector of detuning nodes at once.
class MarkovLineEngine {
  public:
    MarkovLineEngine(std::vector<double> detunings, const CavityParams& cp)
        : MarkovLineEngine(std::move(detunings), cp, LineGrid{}) {}

    MarkovLineEngine(std::vector<double> detunings, const CavityParams& cp,
                     LineGrid line)
        : etas_(std::move(detunings)), cp_(cp), line_(std::move(line)) {
        const std::size_t m = etas_.size();
        if (m == 0)
            throw std::invalid_argument("MarkovLineEngine: no detuning nodes");
        amps_.assign(m, {});
        const double isq = 1.0 / std::sqrt(2.0);
        for (auto& s : amps_) {
            s[amp_g0] = s[amp_e0] = cplx{isq, 0.0};
            s[amp_g1] = s[amp_e1] = cplx{0.0, 0.0};
        }
        phase_g_.assign(m, 0.0);
        phase_e_.assign(m, 0.0);
        if (!line_.nu.empty()) {
            acc_g_.assign(m * line_.nu.size(), cplx{0.0, 0.0});
            acc_e_.assign(m * line_.nu.size(), cplx{0.0, 0.0});
        }
    }

    std::size_t nodes() const { return etas_.size(); }
    double time() const { return t_; }
    const std::vector<double>& detunings() const { return etas_; }
    const LineGrid& line() const { return line_; }

    void step(double h, int parity) {
        if (h <= 0.0) return;
        const bool even = parity % 2 == 0;
        const std::size_t nk = line_.nu.size();
        for (std::size_t i = 0; i < etas_.size(); ++i) {
            const double eta = etas_[i];
            const double s = even ? 1.0 : -1.0;
            const double e_g = -0.5 * eta * s;
            const double e_e = +0.5 * eta * s;
            auto pp = detail::pair_propagator(eta, h, cp_);

            const int i0 = even ? amp_e0 : amp_g0;
            const int i1 = even ? amp_g1 : amp_e1;
            const int ifree = even ? amp_e1 : amp_g1;
            const int iscal = even ? amp_g0 : amp_e0;
            const cplx a0 = amps_[i][i0];
            const cplx a1 = amps_[i][i1];
            const cplx af = amps_[i][ifree];

            if (nk > 0) {
                const cplx b{-0.5 * eta + cp_.delta, -0.5 * cp_.kappa};
                const cplx x = (b - pp.mean) * a1 + cp_.g * a0;
                const cplx dp = 0.5 * a1 + x / (2.0 * pp.rho);
                const cplx dm = 0.5 * a1 - x / (2.0 * pp.rho);
                const cplx mu_p = pp.mean + pp.rho;
                const cplx mu_m = pp.mean - pp.rho;
                const cplx mu_f{0.5 * eta + cp_.delta, -0.5 * cp_.kappa};
                // Which sector owns the active photon this interval.
                std::vector<cplx>& acc_active = even ? acc_g_ : acc_e_;
                std::vector<cplx>& acc_idle = even ? acc_e_ : acc_g_;
                const double ph_active = even ? phase_g_[i] : phase_e_[i];
                const double ph_idle = even ? phase_e_[i] : phase_g_[i];
                const double en_active = even ? e_g : e_e;
                const double en_idle = even ? e_e : e_g;
                const cplx mil{0.0, -line_.lambda};
                for (std::size_t k = 0; k < nk; ++k) {
                    const double nu = line_.nu[k];
                    const cplx pre_a =
                        std::polar(1.0, nu * t_ + ph_active);
                    const cplx grow =
                        dm * detail::phase_window(nu + en_active - mu_m, h) +
                        dp * detail::phase_window(nu + en_active - mu_p, h);
                    acc_active[i * nk + k] += mil * pre_a * grow;
                    const cplx pre_i = std::polar(1.0, nu * t_ + ph_idle);
                    const cplx idle =
                        af * detail::phase_window(nu + en_idle - mu_f, h);
                    acc_idle[i * nk + k] += mil * pre_i * idle;
                }
            }

            amps_[i][i0] = pp.u11 * a0 + pp.u12 * a1;
            amps_[i][i1] = pp.u12 * a0 + pp.u22 * a1;
            amps_[i][ifree] =
                af * std::exp(cplx{0.0, -1.0} *
                              cplx{0.5 * eta + cp_.delta, -0.5 * cp_.kappa} *
                              h);
            amps_[i][iscal] *= std::polar(1.0, 0.5 * eta * h);
            phase_g_[i] += e_g * h;
            phase_e_[i] += e_e * h;
        }
        t_ += h;
    }

    OracleObservables observables(std::size_t node) const {
        const auto& s = amps_[node];
        OracleObservables obs;
        obs.coherence = 2.0 * (std::conj(s[amp_g0]) * s[amp_e0] +
                               std::conj(s[amp_g1]) * s[amp_e1]);
        obs.field = std::conj(s[amp_g0]) * s[amp_g1] +
                    std::conj(s[amp_e0]) * s[amp_e1];
        obs.photon = std::norm(s[amp_g1]) + std::norm(s[amp_e1]);
        return obs;
    }

    double norm4(std::size_t node) const {
        const auto& s = amps_[node];
        return std::norm(s[0]) + std::norm(s[1]) + std::norm(s[2]) +
               std::norm(s[3]);
    }

    double line_norm(std::size_t node) const {
        double acc = 0.0;
        const std::size_t nk = line_.nu.size();
        for (std::size_t k = 0; k < nk; ++k)
            acc += std::norm(acc_g_[node * nk + k]) +
                   std::norm(acc_e_[node * nk + k]);
        return acc;
    }

    // Mode amplitudes alpha_{sigma k} at the current time.
    void line_amplitudes(std::size_t node, std::vector<cplx>& ag,
                         std::vector<cplx>& ae) const {
        const std::size_t nk = line_.nu.size();
        ag.resize(nk);
        ae.resize(nk);
        for (std::size_t k = 0; k < nk; ++k) {
            const cplx rot = std::polar(1.0, -line_.nu[k] * t_);
            ag[k] = std::polar(1.0, -phase_g_[node]) * rot *
                    acc_g_[node * nk + k];
            ae[k] = std::polar(1.0, -phase_e_[node]) * rot *
                    acc_e_[node * nk + k];
        }
    }

    // Per-mode overlap conj(g0) alpha_gk + conj(e0) alpha_ek entering the
    // emitted-signal estimate.
    std::vector<cplx> emission_overlap(std::size_t node) const {
        std::vector<cplx> ag, ae, out;
        line_amplitudes(node, ag, ae);
        out.resize(ag.size());
        const auto& s = amps_[node];
        for (std::size_t k = 0; k < ag.size(); ++k)
            out[k] = std::conj(s[amp_g0]) * ag[k] +
                     std::conj(s[amp_e0]) * ae[k];
        return out;
    }

  private:
    std::vector<double> etas_;
    CavityParams cp_;
    LineGrid line_;
    std::vector<std::array<cplx, 4>> amps_;
    std::vector<double> phase_g_, phase_e_;
    std::vector<cplx> acc_g_, acc_e_;
    double t_ = 0.0;
};

// Explicit-mode engine for one detuning node: cavity plus K line modes, no
// non-Hermitian loss (the line is the loss). Propagation by Chebyshev
// expansion, or dense eigendecomposition for small mode counts.
class DiscretizedLineEngine {
  public:
    DiscretizedLineEngine(double detuning, const CavityParams& cp,
                          LineGrid line, bool use_chebyshev = true)
        : eta_(detuning), cp_(cp), line_(std::move(line)) {
        const int k = static_cast<int>(line_.nu.size());
        if (k < 2)
            throw std::invalid_argument(
                "DiscretizedLineEngine: need an explicit line grid");
        psi_ = VecC::Zero(4 + 2 * k);
        psi_[amp_g0] = psi_[amp_e0] = cplx{1.0 / std::sqrt(2.0), 0.0};

        double sum_lam2 = line_.lambda * line_.lambda * k;
        double rho_c = std::sqrt(cp_.g * cp_.g + sum_lam2);
        double lo = std::min({line_.nu.front(), cp_.delta, eta_}) - rho_c;
        double hi = std::max({line_.nu.back(), cp_.delta, eta_}) + rho_c;

        if (use_chebyshev) {
            coupled_ = std::make_unique<ChebyshevPropagator>(
                [this](const VecC& x, VecC& y) { coupled_matvec(x, y); }, lo,
                hi);
            free_ = std::make_unique<ChebyshevPropagator>(
                [this](const VecC& x, VecC& y) { free_matvec(x, y); }, lo, hi);
        } else {
            build_dense(k);
        }
    }

    double time() const { return t_; }
    double norm() const { return psi_.squaredNorm(); }
    std::size_t mode_count() const { return line_.nu.size(); }
    const LineGrid& line() const { return line_; }

    void step(double h, int parity) {
        if (h <= 0.0) return;
        const bool even = parity % 2 == 0;
        const int k = static_cast<int>(line_.nu.size());
        // Coupled block: [atom, photon, modes] of the active sector.
        const int atom = even ? amp_e0 : amp_g0;
        const int photon = even ? amp_g1 : amp_e1;
        const int mode0 = even ? 4 : 4 + k;
        // Free block: [photon, modes] of the idle sector.
        const int fphoton = even ? amp_e1 : amp_g1;
        const int fmode0 = even ? 4 + k : 4;
        const int scalar = even ? amp_g0 : amp_e0;

        VecC vc(2 + k), vf(1 + k);
        vc[0] = psi_[atom];
        vc[1] = psi_[photon];
        for (int j = 0; j < k; ++j) vc[2 + j] = psi_[mode0 + j];
        vf[0] = psi_[fphoton];
        for (int j = 0; j < k; ++j) vf[1 + j] = psi_[fmode0 + j];

        if (coupled_) {
            coupled_->apply(h, vc);
            free_->apply(h, vf);
        } else {
            dense_apply(evec_c_, eval_c_, h, vc);
            dense_apply(evec_f_, eval_f_, h, vf);
        }
        const cplx up = std::polar(1.0, 0.5 * eta_ * h);
        psi_[atom] = up * vc[0];
        psi_[photon] = up * vc[1];
        for (int j = 0; j < k; ++j) psi_[mode0 + j] = up * vc[2 + j];
        const cplx dn = std::polar(1.0, -0.5 * eta_ * h);
        psi_[fphoton] = dn * vf[0];
        for (int j = 0; j < k; ++j) psi_[fmode0 + j] = dn * vf[1 + j];
        psi_[scalar] *= up;
        t_ += h;
    }

    OracleObservables observables() const {
        OracleObservables obs;
        obs.coherence = 2.0 * (std::conj(psi_[amp_g0]) * psi_[amp_e0] +
                               std::conj(psi_[amp_g1]) * psi_[amp_e1]);
        obs.field = std::conj(psi_[amp_g0]) * psi_[amp_g1] +
                    std::conj(psi_[amp_e0]) * psi_[amp_e1];
        obs.photon = std::norm(psi_[amp_g1]) + std::norm(psi_[amp_e1]);
        return obs;
    }

    // Coherence carried by the emitted part of the wavefunction.
    cplx line_coherence() const {
        const int k = static_cast<int>(line_.nu.size());
        cplx acc{0.0, 0.0};
        for (int j = 0; j < k; ++j)
            acc += std::conj(psi_[4 + j]) * psi_[4 + k + j];
        return 2.0 * acc;
    }

    std::vector<cplx> emission_overlap() const {
        const int k = static_cast<int>(line_.nu.size());
        std::vector<cplx> out(k);
        for (int j = 0; j < k; ++j)
            out[j] = std::conj(psi_[amp_g0]) * psi_[4 + j] +
                     std::conj(psi_[amp_e0]) * psi_[4 + k + j];
        return out;
    }

  private:
    void coupled_matvec(const VecC& x, VecC& y) const {
        const int k = static_cast<int>(line_.nu.size());
        y.resize(2 + k);
        y[0] = eta_ * x[0] + cp_.g * x[1];
        cplx hub = cp_.g * x[0] + cp_.delta * x[1];
        for (int j = 0; j < k; ++j) {
            hub += line_.lambda * x[2 + j];
            y[2 + j] = line_.lambda * x[1] + line_.nu[j] * x[2 + j];
        }
        y[1] = hub;
    }

    void free_matvec(const VecC& x, VecC& y) const {
        const int k = static_cast<int>(line_.nu.size());
        y.resize(1 + k);
        cplx hub = cp_.delta * x[0];
        for (int j = 0; j < k; ++j) {
            hub += line_.lambda * x[1 + j];
            y[1 + j] = line_.lambda * x[0] + line_.nu[j] * x[1 + j];
        }
        y[0] = hub;
    }

    static void dense_apply(const Eigen::MatrixXd& evec,
                            const Eigen::VectorXd& eval, double h, VecC& v) {
        Eigen::MatrixXcd u = evec.cast<cplx>();
        VecC w = u.transpose() * v;
        for (Eigen::Index i = 0; i < w.size(); ++i)
            w[i] *= std::polar(1.0, -eval[i] * h);
        v = u * w;
    }

    void build_dense(int k) {
        Eigen::MatrixXd bc = Eigen::MatrixXd::Zero(2 + k, 2 + k);
        bc(0, 0) = eta_;
        bc(0, 1) = bc(1, 0) = cp_.g;
        bc(1, 1) = cp_.delta;
        for (int j = 0; j < k; ++j) {
            bc(1, 2 + j) = bc(2 + j, 1) = line_.lambda;
            bc(2 + j, 2 + j) = line_.nu[j];
        }
        Eigen::MatrixXd bf = bc.bottomRightCorner(1 + k, 1 + k);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_c(bc);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_f(bf);
        eval_c_ = es_c.eigenvalues();
        evec_c_ = es_c.eigenvectors();
        eval_f_ = es_f.eigenvalues();
        evec_f_ = es_f.eigenvectors();
    }

    double eta_;
    CavityParams cp_;
    LineGrid line_;
    VecC psi_;
    double t_ = 0.0;
    std::unique_ptr<ChebyshevPropagator> coupled_, free_;
    Eigen::VectorXd eval_c_, eval_f_;
    Eigen::MatrixXd evec_c_, evec_f_;
};

struct AveragedTrajectory {
    std::vector<double> times;
    std::vector<cplx> coherence;
    std::vector<cplx> field;
    std::vector<double> photon;
};

// Ensemble-averaged observables along a CPMG run (Markovian engine, no line
// bookkeeping needed).
inline AveragedTrajectory averaged_observables(
    const DetuningNodes& nodes, const CavityParams& cp, int n_pulses,
    double tau, double t_end, const std::vector<double>& sample_times) {
    MarkovLineEngine eng(nodes.etas, cp);
    AveragedTrajectory out;
    auto schedule = cpmg_schedule(n_pulses, tau, t_end, sample_times);
    run_schedule(eng, schedule, [&](double t) {
        cplx c{0.0, 0.0}, a{0.0, 0.0};
        double n = 0.0;
        for (std::size_t i = 0; i < eng.nodes(); ++i) {
            auto obs = eng.observables(i);
            c += nodes.weights[i] * obs.coherence;
            a += nodes.weights[i] * obs.field;
            n += nodes.weights[i] * obs.photon;
        }
        out.times.push_back(t);
        out.coherence.push_back(c);
        out.field.push_back(a);
        out.photon.push_back(n);
    });
    return out;
}

// Emitted-signal estimate S = 2 sqrt(sum_k |<rbar_k>|^2) from the Markovian
// engine's per-mode emission overlaps, ensemble-averaged.
inline double oracle_signal(const DetuningNodes& nodes, const CavityParams& cp,
                            const LineGrid& line, int n_pulses, double tau,
                            double t_final) {
    if (line.recurrence_time() > 0.0 && t_final > line.recurrence_time())
        throw std::invalid_argument(
            "oracle_signal: run exceeds the line recurrence time");
    MarkovLineEngine eng(nodes.etas, cp, line);
    auto schedule = cpmg_schedule(n_pulses, tau, t_final);
    run_schedule(eng, schedule, [](double) {});
    std::vector<cplx> rbar(line.nu.size(), cplx{0.0, 0.0});
    for (std::size_t i = 0; i < eng.nodes(); ++i) {
        auto rk = eng.emission_overlap(i);
        for (std::size_t k = 0; k < rk.size(); ++k)
            rbar[k] += nodes.weights[i] * rk[k];
    }
    double acc = 0.0;
    for (const auto& r : rbar) acc += std::norm(r);
    return 2.0 * std::sqrt(acc);
}

}  // namespace cqed
