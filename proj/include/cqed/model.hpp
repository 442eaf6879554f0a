// Cavity response, Purcell decay, dispersive shifts, and the inhomogeneous
// detuning distribution.
#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace cqed {

// System parameters, all in angular-frequency units of the caller's choice.
struct CavityParams {
    double kappa = 1.0;    // total cavity linewidth
    double g = 0.1;        // qubit-cavity coupling
    double delta = 0.0;    // mean qubit-cavity detuning
    double kappa1 = 0.0;   // input port rate
    double kappa2 = 1.0;   // output port rate (kappa includes both + internal)
};

struct EnsembleParams {
    double t2star = 0.1;   // inhomogeneous dephasing time, Gaussian FID
};

// chi_c(t) = e^{-i delta t - kappa t / 2} for t >= 0 (response of the empty
// cavity in the drive rotating frame).
inline std::complex<double> cavity_response_time(double t,
                                                 const CavityParams& cp) {
    if (t < 0.0) return 0.0;
    return std::exp(std::complex<double>(-0.5 * cp.kappa * t, -cp.delta * t));
}

// chi_c(w) = 1 / (i (delta - w) + kappa/2).
inline std::complex<double> cavity_response_freq(double omega,
                                                 const CavityParams& cp) {
    return 1.0 / std::complex<double>(0.5 * cp.kappa, cp.delta - omega);
}

// Purcell rate at noise-shifted detuning eta:
//   Gamma_P(eta) = g^2 kappa / ((eta - delta)^2 + kappa^2/4).
inline double purcell_rate(double eta, const CavityParams& cp) {
    double d = eta - cp.delta;
    return cp.g * cp.g * cp.kappa / (d * d + 0.25 * cp.kappa * cp.kappa);
}

// Dispersive (Lamb-type) shift at eta:
//   dw(eta) = g^2 (eta - delta) / ((eta - delta)^2 + kappa^2/4).
inline double dispersive_shift(double eta, const CavityParams& cp) {
    double d = eta - cp.delta;
    return cp.g * cp.g * d / (d * d + 0.25 * cp.kappa * cp.kappa);
}

// Stretched-exponential rate scale gamma_p = (g T2*)^2 kappa / 2.
inline double purcell_rate_scale(const CavityParams& cp,
                                 const EnsembleParams& ep) {
    double gt = cp.g * ep.t2star;
    return 0.5 * gt * gt * cp.kappa;
}

// Normalised detuning weight w(eta) = (T2*/sqrt(4 pi)) e^{-eta^2 T2*^2/4}:
// Gaussian with variance 2/T2*^2, giving the free-induction envelope
// <<e^{-i eta t}>> = e^{-(t/T2*)^2}.
inline double inhomogeneous_weight(double eta, const EnsembleParams& ep) {
    double x = eta * ep.t2star;
    return ep.t2star / std::sqrt(4.0 * M_PI) * std::exp(-0.25 * x * x);
}

// Map a Gauss-Hermite node x (weight e^{-x^2}) to a detuning sample:
// eta = 2 x / T2*.
inline double hermite_node_to_detuning(double x, const EnsembleParams& ep) {
    return 2.0 * x / ep.t2star;
}

inline std::vector<std::string> validity_warnings(const CavityParams& cp,
                                                  double tau);

// Full experiment-level parameter set. Detuning is stored explicitly;
// qubit_splitting and cavity_freq are carried for lab-frame bookkeeping
// and must agree with delta when both are set.
struct SystemParams {
    double qubit_splitting = 0.0;  // Delta
    double cavity_freq = 0.0;      // omega_c
    double delta = 0.0;            // omega_c - Delta
    double g = 0.0;
    double kappa = 0.0;
    double kappa1 = 0.0;
    double kappa2 = 0.0;
    double kappa_ext = 0.0;
    double gamma_phi = 0.0;
    double t2star = 0.0;

    CavityParams cavity() const {
        return {kappa, g, delta, kappa1, kappa2};
    }
    EnsembleParams ensemble() const { return {t2star}; }
};

struct RegimeFlags {
    bool high_q = false;         // kappa << |Delta|
    bool narrow_cavity = false;  // kappa T2* < 1
    bool slow_pulsing = false;   // kappa tau >= 10
    std::vector<std::string> warnings;
};

// Hard validation (throws) plus regime flags; tau <= 0 skips the
// pulse-spacing checks.
inline RegimeFlags validate_system(const SystemParams& sp, double tau = 0.0) {
    if (sp.kappa < 0.0 || sp.kappa1 < 0.0 || sp.kappa2 < 0.0 ||
        sp.kappa_ext < 0.0 || sp.gamma_phi < 0.0)
        throw std::invalid_argument("rates must be >= 0");
    if (!(sp.t2star > 0.0))
        throw std::invalid_argument("t2star must be > 0");
    double sum = sp.kappa1 + sp.kappa2 + sp.kappa_ext;
    if (std::abs(sum - sp.kappa) > 1e-12 * std::max(1.0, sp.kappa))
        throw std::invalid_argument(
            "port rates must partition kappa (kappa1 + kappa2 + kappa_ext "
            "= kappa)");
    if (sp.cavity_freq != 0.0 && sp.qubit_splitting != 0.0 &&
        std::abs((sp.cavity_freq - sp.qubit_splitting) - sp.delta) >
            1e-9 * std::max(1.0, std::abs(sp.delta)))
        throw std::invalid_argument(
            "delta must equal cavity_freq - qubit_splitting");

    RegimeFlags flags;
    flags.high_q = sp.qubit_splitting != 0.0 &&
                   sp.kappa * 10.0 < std::abs(sp.qubit_splitting);
    flags.narrow_cavity = sp.kappa * sp.t2star < 1.0;
    flags.slow_pulsing = tau > 0.0 && sp.kappa * tau >= 10.0;
    if (tau > 0.0 && sp.kappa * tau < 10.0)
        flags.warnings.push_back(
            "kappa*tau < 10: closed-form envelopes degrade");
    auto notes = validity_warnings(sp.cavity(), tau);
    flags.warnings.insert(flags.warnings.end(), notes.begin(), notes.end());
    return flags;
}

// Validity notes for the restricted-subspace treatment; empty when the
// parameters sit inside the trusted regime (g < kappa, kappa tau >> 1).
inline std::vector<std::string> validity_warnings(const CavityParams& cp,
                                                  double tau) {
    std::vector<std::string> notes;
    if (cp.g >= cp.kappa)
        notes.push_back("coupling g >= kappa: single-excitation truncation "
                        "untrusted");
    if (cp.kappa * tau < 3.0)
        notes.push_back("kappa*tau < 3: echo wavepackets overlap strongly");
    if (cp.kappa2 > cp.kappa || cp.kappa1 > cp.kappa ||
        cp.kappa1 + cp.kappa2 > cp.kappa)
        notes.push_back("port rates exceed total linewidth");
    return notes;
}

}  // namespace cqed
