// Piecewise-analytic sequence filter functions for classical and quantum
// noise, plus the moments they are built from.
#pragma once

#include <complex>

#include "cqed/pulse_sequence.hpp"

namespace cqed {

using cplx = std::complex<double>;

// (e^{i z h} - 1) / (i z), stable for small |z h|.
inline cplx phase_increment(cplx z, double h) {
    cplx zh = z * h;
    if (std::abs(zh) < 1e-6) {
        // series through third order keeps 1e-10 relative accuracy
        return h * (1.0 + cplx(0.0, 0.5) * zh - zh * zh / 6.0 -
                    cplx(0.0, 1.0 / 24.0) * zh * zh * zh);
    }
    return (std::exp(cplx(0.0, 1.0) * zh) - 1.0) / (cplx(0.0, 1.0) * z);
}

// M(w) = integral_0^T e^{i w t} s(t) dt.
inline cplx phase_moment(double omega, const PulseSequence& seq) {
    cplx total = 0.0;
    for (const auto& iv : seq.intervals()) {
        cplx seg = std::exp(cplx(0.0, omega * iv.t0)) *
                   phase_increment(cplx(omega, 0.0), iv.t1 - iv.t0);
        total += iv.sign * seg;
    }
    return total;
}

// integral_0^T s(t) dt (the DC moment; zero at echo times).
inline double dc_moment(const PulseSequence& seq) {
    double m = 0.0;
    for (const auto& iv : seq.intervals()) m += iv.sign * (iv.t1 - iv.t0);
    return m;
}

// integral_0^T cos(w t) s(t) dt and integral_0^T sin(w t) s(t) dt.
inline double cos_moment(double omega, const PulseSequence& seq) {
    return phase_moment(omega, seq).real();
}
inline double sin_moment(double omega, const PulseSequence& seq) {
    return phase_moment(omega, seq).imag();
}

// Classical filter F_c(w) = (w^2/2) |M(w)|^2.
inline double classical_filter(double omega, const PulseSequence& seq) {
    cplx m = phase_moment(omega, seq);
    return 0.5 * omega * omega * std::norm(m);
}

// F_c(w)/w^2 = |M(w)|^2 / 2, finite at w = 0 (used directly when pairing
// with spectra that carry a DC component).
inline double classical_filter_normalized(double omega,
                                          const PulseSequence& seq) {
    return 0.5 * std::norm(phase_moment(omega, seq));
}

// Quantum filter F_q(w) = w integral_0^T sin(w t) s(t) dt.
inline double quantum_filter(double omega, const PulseSequence& seq) {
    return omega * sin_moment(omega, seq);
}

// F_q(w)/w^2, finite at w = 0.
inline double quantum_filter_normalized(double omega,
                                        const PulseSequence& seq) {
    if (omega == 0.0) return 0.0;  // sin moment vanishes linearly
    return sin_moment(omega, seq) / omega;
}

// Attenuation chi for a spectrum made of discrete lines:
// S_c(w) = sum_i 2 pi c_i delta(w - w_i) (pass each line once; a line at
// -w pairs with +w by evenness, so callers list w >= 0 with the weight of
// both).  chi = sum_i c_i |M(w_i)|^2 / 2.
struct SpectralLine {
    double omega;
    double weight;
};

inline double attenuation_from_lines(const std::vector<SpectralLine>& lines,
                                     const PulseSequence& seq) {
    double chi = 0.0;
    for (const auto& ln : lines)
        chi += ln.weight * classical_filter_normalized(ln.omega, seq);
    return chi;
}

// Quantum phase for an antisymmetric principal-value spectrum
// S_q(w) = 2 b Omega / (Omega^2 - w^2):
//   Phi_q = PV integral dw/2pi (F_q(w)/w^2) S_q(w)
//         = (b/Omega) (m0 - M_cos(Omega)).
// The closed form is an identity for any piecewise-constant s(t); the
// brute-force PV route is exercised in the tests.
inline double quantum_phase(double b, double Omega, const PulseSequence& seq) {
    return b / Omega * (dc_moment(seq) - cos_moment(Omega, seq));
}

}  // namespace cqed
