// Single nuclear-spin bath: conditional branch frequencies, echo envelope
// modulation (ESEEM), spectral density of the effective dephasing field, and
// the quantum-noise echo phase.
#pragma once

#include <cmath>
#include <complex>

#include "cqed/filter_functions.hpp"
#include "cqed/pulse_sequence.hpp"

namespace cqed {

// Hyperfine coupling A and nuclear Zeeman components gamma*B, all angular.
// p is the nuclear polarization of the initial bath state (diagonal in the
// qubit-ground branch eigenbasis, populations (1 pm p)/2). gamma_phi is an
// extra Markovian dephasing rate multiplying every envelope by e^{-g_phi t}.
struct SpinBathParams {
    double hyperfine = 0.0;    // A
    double zeeman_x = 0.0;     // gamma B_x
    double zeeman_z = 0.0;     // gamma B_z
    double polarization = 0.0; // p in [-1, 1]
    double gamma_phi = 0.0;
};

// Conditional branch frequencies and mixing angles:
//   omega_pm = sqrt((gamma B_x)^2 + (gamma B_z pm A/2)^2) / 2
//   phi_pm   = atan2(2 gamma B_x, 2 gamma B_z pm A)
struct SpinFrequencies {
    double omega_plus;
    double omega_minus;
    double phi_plus;
    double phi_minus;
    double delta_phi;
    double visibility;  // sin^2(delta_phi)
};

inline SpinFrequencies spin_frequencies(const SpinBathParams& sb) {
    SpinFrequencies f;
    double A = sb.hyperfine, bx = sb.zeeman_x, bz = sb.zeeman_z;
    f.omega_plus = 0.5 * std::hypot(bx, bz + 0.5 * A);
    f.omega_minus = 0.5 * std::hypot(bx, bz - 0.5 * A);
    f.phi_plus = std::atan2(2.0 * bx, 2.0 * bz + A);
    f.phi_minus = std::atan2(2.0 * bx, 2.0 * bz - A);
    f.delta_phi = f.phi_plus - f.phi_minus;
    double s = std::sin(f.delta_phi);
    f.visibility = s * s;
    return f;
}

// Hahn echo envelope closed form (infinite-temperature bath):
//   C(tau) = e^{-gamma_phi tau} [1 - 2 sin^2(dphi) sin^2(w+ tau/2)
//                                               sin^2(w- tau/2)].
inline double eseem_envelope(double tau, const SpinBathParams& sb) {
    SpinFrequencies f = spin_frequencies(sb);
    double sp = std::sin(0.5 * f.omega_plus * tau);
    double sm = std::sin(0.5 * f.omega_minus * tau);
    double mod = 1.0 - 2.0 * f.visibility * sp * sp * sm * sm;
    return std::exp(-sb.gamma_phi * tau) * mod;
}

// Effective dephasing-field correlator around the qubit-ground branch:
//   <h(t) h(0)> = (A^2/4)(n_z^2 + n_x^2 cos(Omega t))
//                 - i p (A^2 n_x^2 / 4) sin(Omega t)
// with Omega = 2 omega_- and n the unit vector of
// (gamma B_x, 0, gamma B_z - A/2).
struct SpinSpectralDensity {
    double Omega;      // precession frequency of the ground branch
    double nx2;        // n_x^2
    double nz2;        // n_z^2
    double dc_weight;      // (A^2/4) n_z^2          (line at w = 0)
    double line_weight;    // (A^2/4) n_x^2 / 2 each (lines at w = pm Omega)
    double quantum_amp;    // b = -p A^2 n_x^2 / 4   (odd PV spectrum)
};

inline SpinSpectralDensity spin_spectral_density(const SpinBathParams& sb) {
    SpinSpectralDensity s;
    double A = sb.hyperfine;
    double vx = sb.zeeman_x, vz = sb.zeeman_z - 0.5 * A;
    double Omega = std::hypot(vx, vz);
    s.Omega = Omega;
    s.nx2 = Omega > 0.0 ? (vx * vx) / (Omega * Omega) : 0.0;
    s.nz2 = Omega > 0.0 ? (vz * vz) / (Omega * Omega) : 1.0;
    s.dc_weight = 0.25 * A * A * s.nz2;
    s.line_weight = 0.125 * A * A * s.nx2;
    s.quantum_amp = -0.25 * sb.polarization * A * A * s.nx2;
    return s;
}

// Gaussian attenuation exponent chi(seq) from the classical part of the
// spin spectral density (DC line + pair at pm Omega).
inline double spin_attenuation(const PulseSequence& seq,
                               const SpinBathParams& sb) {
    SpinSpectralDensity s = spin_spectral_density(sb);
    double chi = s.dc_weight * classical_filter_normalized(0.0, seq);
    chi += 2.0 * s.line_weight * classical_filter_normalized(s.Omega, seq);
    return chi;
}

// Quantum-noise phase Phi_q(seq) (echo envelope acquires e^{-i Phi_q}).
inline double spin_quantum_phase(const PulseSequence& seq,
                                 const SpinBathParams& sb) {
    SpinSpectralDensity s = spin_spectral_density(sb);
    if (s.Omega == 0.0) return 0.0;
    return quantum_phase(s.quantum_amp, s.Omega, seq);
}

// Leading-order (Magnus-2 / Gaussian) echo envelope from the spectral
// density, for comparison against the exact branch evolution:
//   C ~ e^{-gamma_phi T} e^{-chi} e^{-i Phi_q}.
inline std::complex<double> gaussian_envelope(const PulseSequence& seq,
                                              const SpinBathParams& sb) {
    double chi = spin_attenuation(seq, sb);
    double phi = spin_quantum_phase(seq, sb);
    return std::exp(std::complex<double>(-sb.gamma_phi * seq.duration - chi,
                                         -phi));
}

}  // namespace cqed
