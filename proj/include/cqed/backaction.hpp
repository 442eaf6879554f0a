#pragma once
// Ensemble-averaged cavity backaction: Purcell envelope factors, revival
// shapes G_n(t) around each echo, their window weights, and the composed echo
// envelope. Everything here averages over the static Gaussian detuning
// distribution; per-detuning rates live in model.hpp.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "cqed/model.hpp"
#include "cqed/quadrature.hpp"

namespace cqed {

using cplx = std::complex<double>;

namespace detail {

// Panel edges for the burned hole in node units: the Lorentzian rate sits at
// eta = delta with half-width kappa/2, i.e. node centre delta T2*/2 and node
// scale kappa T2*/4.
inline std::vector<double> hole_breakpoints(const CavityParams& cp,
                                            const EnsembleParams& ep,
                                            double* span_out) {
    double centre = 0.5 * cp.delta * ep.t2star;
    double width = std::max(0.25 * cp.kappa * ep.t2star, 1e-12);
    std::vector<double> cuts;
    for (double m : {-16.0, -8.0, -4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0, 8.0,
                     16.0})
        cuts.push_back(centre + m * width);
    *span_out = 9.0 + std::min(std::abs(centre) + 16.0 * width, 18.0);
    return cuts;
}

}  // namespace detail

// <<exp(-Gamma_P(eta) T / 2)>> over the static detuning ensemble. Splitting
// off the identity leaves a burned-hole correction of bare width kappa whose
// edges sharpen with T; order-doubling Hermite rules resolve that hole too
// slowly (order ~25k for 1e-6 at kappa T2* = 0.1), so the correction goes on
// adaptive panels anchored to the hole scales.
inline AverageResult<double> purcell_envelope_factor_exact(
    double evolution_time, const CavityParams& cp, const EnsembleParams& ep,
    double tol = 1e-9) {
    double span = 0.0;
    auto cuts = detail::hole_breakpoints(cp, ep, &span);
    auto hole = [&](double x) {
        double eta = hermite_node_to_detuning(x, ep);
        return std::exp(-x * x) *
               std::expm1(-0.5 * purcell_rate(eta, cp) * evolution_time);
    };
    AverageResult<double> res;
    res.value = 1.0 + panel_integrate(hole, -span, span, cuts, 1e-3 * tol) /
                          std::sqrt(M_PI);
    res.error_estimate = 1e-3 * tol;
    res.converged = true;
    return res;
}

// Same average at a pinned Gauss-Hermite order, for convergence studies.
inline double purcell_envelope_factor_fixed(double evolution_time,
                                            const CavityParams& cp,
                                            const EnsembleParams& ep,
                                            int order) {
    const auto& rule = gauss_hermite(order);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        double eta = hermite_node_to_detuning(rule.nodes[i], ep);
        acc += rule.weights[i] *
               std::exp(-0.5 * purcell_rate(eta, cp) * evolution_time);
    }
    return acc;
}

// Stretched-exponential asymptote exp(-sqrt(gamma_p T)).
inline double purcell_envelope_factor_asymptotic(double evolution_time,
                                                 const CavityParams& cp,
                                                 const EnsembleParams& ep) {
    return std::exp(
        -std::sqrt(purcell_rate_scale(cp, ep) * evolution_time));
}

// Prefactor separating the exact average from the bare stretched exponential
// in the late-time saddle-point expansion.
inline double stretch_prefactor(const CavityParams& cp,
                                const EnsembleParams& ep) {
    double u = 0.25 * cp.kappa * ep.t2star;
    return std::exp(u * u);
}

// Late-time window weight asymptote 2 exp(-2 sqrt(gamma_p T)).
inline double gbar_asymptotic(double evolution_time, const CavityParams& cp,
                              const EnsembleParams& ep) {
    return 2.0 *
           std::exp(-2.0 * std::sqrt(purcell_rate_scale(cp, ep) *
                                     evolution_time));
}

// Predicted first zero of the revival profile from the late-time cosine
// modulation: the cosine argument sqrt(2) (gamma_p T)^{1/4} t / T2* reaches
// pi/2.
inline double revival_zero_prediction(double evolution_time,
                                      const CavityParams& cp,
                                      const EnsembleParams& ep) {
    double gt = purcell_rate_scale(cp, ep) * evolution_time;
    return 0.5 * M_PI * ep.t2star /
           (std::sqrt(2.0) * std::pow(gt, 0.25));
}

// Modulation wavenumber of the same asymptote, used to seed the profile fit.
inline double revival_modulation_frequency(double evolution_time,
                                           const CavityParams& cp,
                                           const EnsembleParams& ep) {
    double gt = purcell_rate_scale(cp, ep) * evolution_time;
    return std::sqrt(2.0) * std::pow(gt, 0.25) / ep.t2star;
}

struct RevivalGrid {
    // Half-width of the detuning integration range. <= 0 picks a range from
    // the Gaussian support and the depth of the burned Lorentzian hole.
    double eta_span = 0.0;
    int eta_points = 16001;
    // Time window in units of T2* around the echo center, and its sampling.
    double window = 5.0;
    int time_points = 501;
};

inline double resolve_eta_span(double evolution_time, const CavityParams& cp,
                               const EnsembleParams& ep,
                               const RevivalGrid& grid) {
    if (grid.eta_span > 0.0) return grid.eta_span;
    // Beyond the Gaussian support the weight kills the integrand; beyond the
    // rate tail the Lorentzian factor is within 1e-8 of 1 and cancels against
    // the analytic Gaussian term.
    double gauss_cut = 10.0 / ep.t2star;
    double rate_cut =
        std::abs(cp.delta) +
        cp.g * std::sqrt(cp.kappa * std::max(evolution_time, 0.0) / 2e-8);
    return std::max(20.0 * cp.kappa, std::min(gauss_cut, rate_cut));
}

struct RevivalShape {
    int n = 0;
    double tau = 0.0;
    std::vector<double> times;  // offsets from the echo center
    std::vector<cplx> values;   // G_n at those offsets
    cplx weight{1.0, 0.0};      // window average against (sqrt(pi) T2*)^-1
};

// G_n(t) = e^{sqrt(gamma_p n tau)} <<e^{-Gamma_P(eta) n tau / 2} e^{-i eta t}>>.
// Split into the bare Gaussian (analytic) plus a correction whose integrand
// is localized where the Purcell factor differs from 1; the correction goes
// on a uniform trapezoid grid dense enough for both the hole edges and the
// e^{-i eta t} oscillation across the window.
inline RevivalShape revival_shape(int n, double tau, const CavityParams& cp,
                                  const EnsembleParams& ep,
                                  const RevivalGrid& grid = {}) {
    if (n < 0 || tau <= 0.0) throw std::invalid_argument("revival_shape: need n >= 0, tau > 0");
    RevivalShape shape;
    shape.n = n;
    shape.tau = tau;
    double big_t = static_cast<double>(n) * tau;
    double pref = std::exp(std::sqrt(purcell_rate_scale(cp, ep) * big_t));

    int m = std::max(grid.time_points, 3) | 1;
    double half_window = grid.window * ep.t2star;
    shape.times.resize(m);
    shape.values.assign(m, cplx{0.0, 0.0});
    for (int i = 0; i < m; ++i)
        shape.times[i] = -half_window + 2.0 * half_window * i / (m - 1);

    double span = resolve_eta_span(big_t, cp, ep, grid);
    int ne = std::max(grid.eta_points, 3) | 1;
    double de = 2.0 * span / (ne - 1);
    std::vector<double> corr(ne);
    std::vector<double> etas(ne);
    for (int j = 0; j < ne; ++j) {
        double eta = -span + de * j;
        etas[j] = eta;
        double w = inhomogeneous_weight(eta, ep);
        corr[j] = w * std::expm1(-0.5 * purcell_rate(eta, cp) * big_t);
    }
    for (int i = 0; i < m; ++i) {
        double t = shape.times[i];
        // e^{-i eta_j t} by phase recurrence along the uniform eta grid
        cplx phase = std::polar(1.0, -etas[0] * t);
        const cplx step = std::polar(1.0, -de * t);
        cplx acc{0.0, 0.0};
        for (int j = 0; j < ne; ++j) {
            double tw = (j == 0 || j == ne - 1) ? 0.5 : 1.0;
            acc += tw * corr[j] * phase;
            phase *= step;
        }
        acc *= de;
        double gauss = std::exp(-(t / ep.t2star) * (t / ep.t2star));
        shape.values[i] = pref * (acc + gauss);
    }

    // Composite Simpson over the stored grid for the window weight.
    cplx s = shape.values.front() + shape.values.back();
    for (int i = 1; i < m - 1; ++i)
        s += (i % 2 ? 4.0 : 2.0) * shape.values[i];
    double h = shape.times[1] - shape.times[0];
    shape.weight = s * (h / 3.0) / (std::sqrt(M_PI) * ep.t2star);
    return shape;
}

// Window weight alone, independent route to the same number as
// RevivalShape::weight. The flat part of the Purcell factor meets the
// closed-form window integral of e^{-i eta t} in an erf; the burned-hole
// correction shares the panel layout of purcell_envelope_factor_exact.
inline AverageResult<double> gbar_average(int n, double tau,
                                          const CavityParams& cp,
                                          const EnsembleParams& ep,
                                          double window = 5.0,
                                          double tol = 1e-9) {
    double big_t = static_cast<double>(n) * tau;
    double pref = std::exp(std::sqrt(purcell_rate_scale(cp, ep) * big_t));
    double half_window = window * ep.t2star;
    double span = 0.0;
    auto cuts = detail::hole_breakpoints(cp, ep, &span);
    auto hole = [&](double x) {
        double eta = hermite_node_to_detuning(x, ep);
        // Window integral of e^{-i eta t} in closed form (real by symmetry).
        double win = std::abs(eta * half_window) < 1e-8
                         ? 2.0 * half_window
                         : 2.0 * std::sin(eta * half_window) / eta;
        return std::exp(-x * x) *
               std::expm1(-0.5 * purcell_rate(eta, cp) * big_t) * win;
    };
    double hole_avg = panel_integrate(hole, -span, span, cuts,
                                      1e-3 * tol * ep.t2star) /
                      std::sqrt(M_PI);
    AverageResult<double> res;
    res.value =
        pref * (std::erf(window) + hole_avg / (std::sqrt(M_PI) * ep.t2star));
    res.error_estimate = tol;
    res.converged = true;
    return res;
}

struct EchoEnvelope {
    int n_echoes = 0;
    double tau = 0.0;
    std::vector<cplx> values;    // C(n tau), index 0..N
    std::vector<cplx> weights;   // window weights, same indexing
    double frame_detuning = 0.0; // rotating-frame detuning of the drive comb
    double delta_mod = 0.0;      // frame_detuning folded into [0, 2 pi / tau)
};

inline double fold_frame_detuning(double frame_detuning, double tau) {
    double period = 2.0 * M_PI / tau;
    double r = std::fmod(frame_detuning, period);
    if (r < 0.0) r += period;
    return r;
}

enum class PurcellMode { exact, asymptotic };

// C(n tau) = [ensemble Purcell factor] x [cavity-free envelope], with the
// window weights attached for downstream field synthesis.
inline EchoEnvelope full_envelope(
    int n_echoes, double tau, const CavityParams& cp, const EnsembleParams& ep,
    const std::function<cplx(double)>& cavity_free_envelope,
    PurcellMode mode = PurcellMode::exact, double frame_detuning = 0.0) {
    if (n_echoes < 0 || tau <= 0.0)
        throw std::invalid_argument("full_envelope: need n_echoes >= 0, tau > 0");
    EchoEnvelope env;
    env.n_echoes = n_echoes;
    env.tau = tau;
    env.frame_detuning = frame_detuning;
    env.delta_mod = fold_frame_detuning(frame_detuning, tau);
    env.values.resize(n_echoes + 1);
    env.weights.resize(n_echoes + 1);
    env.values[0] = cplx{1.0, 0.0};
    env.weights[0] = cplx{1.0, 0.0};
    for (int n = 1; n <= n_echoes; ++n) {
        double big_t = static_cast<double>(n) * tau;
        double factor =
            mode == PurcellMode::exact
                ? purcell_envelope_factor_exact(big_t, cp, ep).value
                : purcell_envelope_factor_asymptotic(big_t, cp, ep);
        cplx c0 = cavity_free_envelope ? cavity_free_envelope(big_t)
                                       : cplx{1.0, 0.0};
        env.values[n] = factor * c0;
        env.weights[n] = gbar_average(n, tau, cp, ep).value;
    }
    return env;
}

struct RevivalFit {
    double amplitude = 0.0;
    double width = 0.0;
    double wavenumber = 0.0;
    double phase = 0.0;
    double rms_residual = 0.0;
    bool converged = false;
};

// Least-squares fit of Re G_n(t) to A exp(-(t/w)^2) cos(b t + phi) by
// Levenberg-Marquardt with a numeric Jacobian. Seeds come from the late-time
// asymptote so the fit lands in the right basin.
inline RevivalFit fit_revival_profile(const RevivalShape& shape,
                                      const CavityParams& cp,
                                      const EnsembleParams& ep) {
    const auto& ts = shape.times;
    const int npts = static_cast<int>(ts.size());
    Eigen::VectorXd y(npts);
    for (int i = 0; i < npts; ++i) y[i] = shape.values[i].real();

    Eigen::Vector4d p;
    p << shape.values[npts / 2].real(), 2.0 * ep.t2star,
        revival_modulation_frequency(shape.n * shape.tau, cp, ep), 0.0;

    auto residual = [&](const Eigen::Vector4d& q, Eigen::VectorXd& r) {
        for (int i = 0; i < npts; ++i) {
            double t = ts[i];
            double model = q[0] * std::exp(-(t / q[1]) * (t / q[1])) *
                           std::cos(q[2] * t + q[3]);
            r[i] = model - y[i];
        }
    };

    Eigen::VectorXd r(npts), r_trial(npts);
    Eigen::MatrixXd jac(npts, 4);
    residual(p, r);
    double sse = r.squaredNorm();
    double lambda = 1e-3;
    RevivalFit fit;
    for (int iter = 0; iter < 200; ++iter) {
        for (int k = 0; k < 4; ++k) {
            double step = std::max(1e-8, 1e-6 * std::abs(p[k]));
            Eigen::Vector4d pp = p, pm = p;
            pp[k] += step;
            pm[k] -= step;
            Eigen::VectorXd rp(npts), rm(npts);
            residual(pp, rp);
            residual(pm, rm);
            jac.col(k) = (rp - rm) / (2.0 * step);
        }
        Eigen::Matrix4d h = jac.transpose() * jac;
        Eigen::Vector4d g = jac.transpose() * r;
        bool stepped = false;
        for (int attempt = 0; attempt < 20; ++attempt) {
            Eigen::Matrix4d hd = h;
            hd.diagonal() += lambda * h.diagonal();
            Eigen::Vector4d delta = hd.ldlt().solve(-g);
            Eigen::Vector4d trial = p + delta;
            residual(trial, r_trial);
            double sse_trial = r_trial.squaredNorm();
            if (sse_trial < sse) {
                double rel = delta.norm() / std::max(1e-12, p.norm());
                p = trial;
                r = r_trial;
                sse = sse_trial;
                lambda = std::max(lambda * 0.3, 1e-12);
                stepped = true;
                if (rel < 1e-12) fit.converged = true;
                break;
            }
            lambda *= 10.0;
        }
        if (!stepped || fit.converged) {
            fit.converged = fit.converged || !stepped;
            break;
        }
    }
    fit.amplitude = p[0];
    fit.width = std::abs(p[1]);
    fit.wavenumber = std::abs(p[2]);
    fit.phase = p[3];
    fit.rms_residual = std::sqrt(sse / npts);
    return fit;
}

// First positive-t zero crossing of Re G_n(t), by sign change plus linear
// interpolation. NaN when the profile never crosses inside the window.
inline double first_zero_crossing(const RevivalShape& shape) {
    const auto& ts = shape.times;
    for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
        if (ts[i] < 0.0) continue;
        double a = shape.values[i].real();
        double b = shape.values[i + 1].real();
        if (a == 0.0) return ts[i];
        if ((a > 0.0) != (b > 0.0))
            return ts[i] + (ts[i + 1] - ts[i]) * a / (a - b);
    }
    return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace cqed
