// Exact conditional-evolution echo envelope for the single-spin bath,
// via closed-form SU(2) rotations (no eigensolves).
#pragma once

#include <cmath>
#include <complex>

#include "cqed/pulse_sequence.hpp"
#include "cqed/spin_bath.hpp"

namespace cqed {

namespace detail {

// 2x2 complex matrix as q0 + i q . sigma is unwieldy for non-unitary
// products, so keep a tiny explicit matrix type.
struct Mat2 {
    cplx a, b, c, d;  // [[a, b], [c, d]]

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

    Mat2 operator*(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d,
                c * o.a + d * o.c, c * o.b + d * o.d};
    }

    Mat2 adjoint() const {
        return {std::conj(a), std::conj(c), std::conj(b), std::conj(d)};
    }
};

// exp(-i (v . sigma/2) t) = cos(|v|t/2) I - i sin(|v|t/2) vhat . sigma
inline Mat2 su2_rotation(double vx, double vz, double t) {
    double v = std::hypot(vx, vz);
    double half = 0.5 * v * t;
    double co = std::cos(half);
    double si = v > 0.0 ? std::sin(half) / v : 0.5 * t;
    cplx isx(0.0, si * vx), isz(0.0, si * vz);
    return {co - isz, -isx, -isx, co + isz};
}

}  // namespace detail

// Exact echo envelope Tr{U_-^dag U_+ rho} e^{-gamma_phi T} for an arbitrary
// pi-pulse sequence. U_pm follow the bath branch Hamiltonians
// H_pm = pm(A/2) I_z + gamma B . I, swapping at every pulse; rho is diagonal
// in the eigenbasis of the minus branch with populations (1 pm p)/2,
// the lower level carrying (1 + p)/2.
inline std::complex<double> exact_envelope(const PulseSequence& seq,
                                           const SpinBathParams& sb) {
    double A = sb.hyperfine, bx = sb.zeeman_x, bz = sb.zeeman_z;
    detail::Mat2 Up = detail::Mat2::identity();
    detail::Mat2 Um = detail::Mat2::identity();
    for (const auto& iv : seq.intervals()) {
        double h = iv.t1 - iv.t0;
        // branch that started +: Hamiltonian vector (bx, bz + s A/2)
        double zp = bz + iv.sign * 0.5 * A;
        double zm = bz - iv.sign * 0.5 * A;
        Up = detail::su2_rotation(bx, zp, h) * Up;
        Um = detail::su2_rotation(bx, zm, h) * Um;
    }
    // rho = (I - p vhat . sigma)/2 with v = (bx, 0, bz - A/2)
    double vx = bx, vz = bz - 0.5 * A;
    double v = std::hypot(vx, vz);
    double px = v > 0.0 ? sb.polarization * vx / v : 0.0;
    double pz = v > 0.0 ? sb.polarization * vz / v : sb.polarization;
    detail::Mat2 rho{0.5 * (1.0 - pz), cplx(-0.5 * px, 0.0),
                     cplx(-0.5 * px, 0.0), 0.5 * (1.0 + pz)};
    detail::Mat2 prod = Um.adjoint() * Up * rho;
    cplx tr = prod.a + prod.d;
    return std::exp(-sb.gamma_phi * seq.duration) * tr;
}

// Hahn special case (single pulse at tau/2).
inline std::complex<double> exact_hahn_envelope(double tau,
                                                const SpinBathParams& sb) {
    return exact_envelope(PulseSequence::cpmg(1, tau), sb);
}

}  // namespace cqed
