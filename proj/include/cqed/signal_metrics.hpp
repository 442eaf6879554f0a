#pragma once
// Extractable signal per measurement cycle: effective echo number, the
// closed-form signal strength with its bounds, and the pulsed-coupling
// protocol variant.

#include <cmath>
#include <limits>
#include <stdexcept>

#include "cqed/backaction.hpp"
#include "cqed/model.hpp"

namespace cqed {

enum class SignalProtocol { static_coupling, pulsed_coupling };

struct SignalBounds {
    double hahn = 0.0;
    double cpmg = 0.0;
    double max = 0.0;
};

struct SignalReport {
    double n_eff = 0.25;
    bool n_eff_infinite = false;
    double s = 0.0;       // clipped into [0, 1]
    double s_raw = 0.0;   // formula value before clipping
    bool regime_violation = false;
    SignalBounds bounds;
    SignalProtocol protocol = SignalProtocol::static_coupling;
    double t_on = 0.0;
};

// N_eff = 1/4 + sum |Gbar_n C(n tau)|^2, truncated once terms stop mattering.
inline double effective_echo_number(const EchoEnvelope& env,
                                    double truncation = 1e-12) {
    double acc = 0.25;
    for (int n = 1; n <= env.n_echoes; ++n) {
        double term = std::norm(env.weights[n] * env.values[n]);
        acc += term;
        if (term < truncation * acc) break;
    }
    return acc;
}

inline SignalBounds signal_bounds(const CavityParams& cp,
                                  const EnsembleParams& ep, double tau) {
    SignalBounds b;
    double port = cp.kappa2 / cp.kappa;
    b.hahn = 0.5 * std::sqrt(5.0 * M_PI) * cp.g * ep.t2star * std::sqrt(port);
    b.cpmg = (2.0 * std::sqrt(M_PI) / 3.0) *
             std::sqrt(port / (cp.kappa * tau));
    b.max = std::sqrt(port);
    return b;
}

namespace detail {

inline SignalReport make_report(double n_eff, bool infinite,
                                const CavityParams& cp,
                                const EnsembleParams& ep, double tau,
                                double sigma_x0, double cap) {
    SignalReport rep;
    rep.n_eff = n_eff;
    rep.n_eff_infinite = infinite;
    rep.bounds = signal_bounds(cp, ep, tau);
    double gt = cp.g * ep.t2star;
    double port = cp.kappa2 / cp.kappa;
    rep.s_raw = infinite ? std::numeric_limits<double>::infinity()
                         : std::sqrt(sigma_x0 * sigma_x0 * M_PI * gt * gt *
                                     port * n_eff);
    rep.s = std::min(rep.s_raw, cap);
    rep.regime_violation = rep.s_raw > cap;
    return rep;
}

}  // namespace detail

// S = [|<sigma_x>_0|^2 pi (g T2*)^2 (kappa2/kappa) N_eff]^{1/2}; values past
// 1 flag a regime violation and only the report field clips.
inline SignalReport signal_strength(const CavityParams& cp,
                                    const EnsembleParams& ep,
                                    const EchoEnvelope& env, double sigma_x0) {
    auto rep = detail::make_report(effective_echo_number(env), false, cp, ep,
                                   env.tau, sigma_x0, 1.0);
    rep.protocol = SignalProtocol::static_coupling;
    return rep;
}

// Pulsed coupling: each echo keeps a factor 1 - (g t_on)^2 of its squared
// envelope contribution, so N_eff sums a geometric series and the signal
// saturates at the port bound.
inline SignalReport pulsed_coupling_signal(const CavityParams& cp,
                                           const EnsembleParams& ep,
                                           double tau, double t_on,
                                           double sigma_x0 = 1.0) {
    double x = cp.g * t_on;
    if (x >= 1.0)
        throw std::invalid_argument(
            "pulsed_coupling_signal: need g * t_on < 1");
    double ratio = 1.0 - x * x;
    bool infinite = t_on == 0.0;
    double n_eff = infinite
                       ? std::numeric_limits<double>::infinity()
                       : 0.25 + ratio / (1.0 - ratio);
    double cap = std::sqrt(cp.kappa2 / cp.kappa);
    auto rep = detail::make_report(infinite ? 0.0 : n_eff, infinite, cp, ep,
                                   tau, sigma_x0, cap);
    if (infinite) rep.n_eff = std::numeric_limits<double>::infinity();
    rep.protocol = SignalProtocol::pulsed_coupling;
    rep.t_on = t_on;
    return rep;
}

}  // namespace cqed
