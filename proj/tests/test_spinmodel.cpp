#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "cqed/spin_bath.hpp"
#include "cqed/spin_echo_exact.hpp"
#include "cqed/transmission.hpp"
#include "support/frozen.hpp"
#include "support/reference.hpp"

using cqed::PulseSequence;
using cqed::SpinBathParams;
using cplx = std::complex<double>;

namespace {

// equal transverse and longitudinal nuclear Zeeman, A/2pi = -0.25 MHz
SpinBathParams figure_bath() {
    SpinBathParams sb;
    sb.hyperfine = -2.0 * M_PI * 0.25;
    sb.zeeman_x = 0.5 * sb.hyperfine;
    sb.zeeman_z = 0.5 * sb.hyperfine;
    return sb;
}

}  // namespace

TEST_CASE("branch frequencies at the benchmark bath") {
    auto sb = figure_bath();
    auto f = cqed::spin_frequencies(sb);
    double absA = std::abs(sb.hyperfine);
    CHECK(f.omega_minus == doctest::Approx(absA / 4.0).epsilon(1e-14));
    CHECK(f.omega_plus ==
          doctest::Approx(std::sqrt(5.0) * absA / 4.0).epsilon(1e-14));
    CHECK(f.visibility ==
          doctest::Approx(frozen::kSpinSinSqDphi).epsilon(1e-12));
}

TEST_CASE("closed-form eseem equals the exact hahn envelope when unpolarized") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int trial = 0; trial < 25; ++trial) {
        SpinBathParams sb;
        sb.hyperfine = 2.0 * unif(rng);
        sb.zeeman_x = 1.5 * unif(rng);
        sb.zeeman_z = 1.5 * unif(rng);
        sb.gamma_phi = 0.05 * (1.0 + unif(rng));
        double tau = 0.3 + 2.0 * std::abs(unif(rng));
        cplx exact = cqed::exact_hahn_envelope(tau, sb);
        double closed = cqed::eseem_envelope(tau, sb);
        CAPTURE(trial);
        CHECK(std::abs(exact.real() - closed) < 1e-10);
        CHECK(std::abs(exact.imag()) < 1e-10);
    }
}

TEST_CASE("su2 echo chain matches the dense eigensolve reference") {
    struct Setup {
        double A, bx, bz, p;
    };
    std::vector<Setup> setups = {
        {-1.5708, -0.7854, -0.7854, 0.0},
        {0.9, 0.4, -1.1, 0.7},
        {-0.6, 1.2, 0.3, -0.7},
    };
    for (const auto& s : setups) {
        SpinBathParams sb;
        sb.hyperfine = s.A;
        sb.zeeman_x = s.bx;
        sb.zeeman_z = s.bz;
        sb.polarization = s.p;
        for (int n = 1; n <= 6; ++n) {
            double tau = 1.3;
            cplx mine = cqed::exact_envelope(PulseSequence::cpmg(n, tau), sb);
            cplx ref = testref::exact_cpmg_envelope(n, tau, s.A, s.bx, s.bz,
                                                    s.p);
            CAPTURE(n);
            CAPTURE(s.A);
            CHECK(std::abs(mine - ref) < 1e-12);
        }
    }
}

TEST_CASE("hahn phase benchmark values are reproduced") {
    SpinBathParams sb;
    sb.hyperfine = -0.5e6;
    sb.zeeman_x = 1.3e6;
    sb.zeeman_z = 0.9e6;
    sb.polarization = 1.0;
    auto seq = PulseSequence::cpmg(1, frozen::kPhaseTau);

    cplx exact = cqed::exact_envelope(seq, sb);
    CHECK(std::abs(std::arg(exact) - frozen::kPhaseArgC) < 1e-12);
    CHECK(std::abs(cqed::spin_quantum_phase(seq, sb) + frozen::kPhaseClosed) <
          1e-12);

    auto unpolarized = sb;
    unpolarized.polarization = 0.0;
    CHECK(std::abs(cqed::exact_envelope(seq, unpolarized).imag()) < 1e-12);
}

TEST_CASE("phase residual shrinks at fifth order in the spacing") {
    SpinBathParams sb;
    sb.hyperfine = -0.5e6;
    sb.zeeman_x = 1.3e6;
    sb.zeeman_z = 0.9e6;
    sb.polarization = 1.0;
    auto residual = [&](double tau) {
        auto seq = PulseSequence::cpmg(1, tau);
        return std::abs(std::arg(cqed::exact_envelope(seq, sb)) +
                        cqed::spin_quantum_phase(seq, sb));
    };
    double coarse = residual(2.0 * frozen::kPhaseTau);
    double fine = residual(frozen::kPhaseTau);
    double order = std::log2(coarse / fine);
    CHECK(order == doctest::Approx(frozen::kPhaseOrder).epsilon(0.05));
}

TEST_CASE("spin spectral density partitions the total second moment") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> unif(-1.5, 1.5);
    for (int trial = 0; trial < 10; ++trial) {
        SpinBathParams sb;
        sb.hyperfine = unif(rng);
        sb.zeeman_x = unif(rng);
        sb.zeeman_z = unif(rng);
        sb.polarization = 0.5 * unif(rng);
        auto s = cqed::spin_spectral_density(sb);
        auto f = cqed::spin_frequencies(sb);
        double a2 = 0.25 * sb.hyperfine * sb.hyperfine;
        CHECK(s.Omega == doctest::Approx(2.0 * f.omega_minus));
        CHECK(s.nx2 + s.nz2 == doctest::Approx(1.0));
        CHECK(s.dc_weight + 2.0 * s.line_weight ==
              doctest::Approx(a2).epsilon(1e-12));
        CHECK(s.quantum_amp == doctest::Approx(-sb.polarization * a2 * s.nx2)
                                   .epsilon(1e-12));
    }
}

TEST_CASE("hahn attenuation exponent has its closed form") {
    SpinBathParams sb;
    sb.hyperfine = 0.8;
    sb.zeeman_x = 0.5;
    sb.zeeman_z = -0.3;
    auto s = cqed::spin_spectral_density(sb);
    for (double tau : {0.7, 2.1, 5.3}) {
        double si = std::sin(0.25 * s.Omega * tau);
        double closed = 2.0 * sb.hyperfine * sb.hyperfine * s.nx2 * si * si *
                        si * si / (s.Omega * s.Omega);
        CHECK(cqed::spin_attenuation(PulseSequence::cpmg(1, tau), sb) ==
              doctest::Approx(closed).epsilon(1e-12));
    }
}

TEST_CASE("weak-coupling visibility approximation holds at the 10% level") {
    SpinBathParams sb;
    sb.hyperfine = 0.05;
    sb.zeeman_x = 0.1;
    sb.zeeman_z = 1.0;
    double vis = cqed::spin_frequencies(sb).visibility;
    double approx = sb.hyperfine * sb.zeeman_x /
                    (sb.zeeman_z * sb.zeeman_z);
    approx *= approx;
    CHECK(std::abs(vis / approx - 1.0) < 0.10);
}

TEST_CASE("susceptibility pole strengths are a unit partition") {
    SpinBathParams sb = figure_bath();
    sb.polarization = 0.3;
    auto poles = cqed::detail::susceptibility_poles(sb);
    double total = 0.0;
    for (int m = 0; m < 2; ++m)
        for (int n = 0; n < 2; ++n) {
            CHECK(poles.strength[m][n] >= 0.0);
            total += poles.strength[m][n];
        }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
}

namespace {

cqed::TransmissionParams figure_cavity() {
    cqed::TransmissionParams tp;
    tp.cavity_freq = 2.0 * M_PI * 400.0;
    tp.qubit_freq = tp.cavity_freq;
    tp.kappa = 2.0 * M_PI;
    tp.kappa1 = 0.5 * tp.kappa;
    tp.kappa2 = 0.5 * tp.kappa;
    tp.g = 0.2 * tp.kappa;
    return tp;
}

}  // namespace

TEST_CASE("transmission saturates the passivity bound when decoupled") {
    auto tp = figure_cavity();
    auto sb = figure_bath();
    sb.gamma_phi = 0.01;
    CHECK(cqed::transmission_passivity_bound(tp) == doctest::Approx(1.0));
    // a far-detuned spin class cannot block the cavity
    cplx far = cqed::transmission_amplitude(tp.cavity_freq, 1e6, tp, sb);
    CHECK(std::abs(far) == doctest::Approx(1.0).epsilon(1e-6));
    // on resonance the qubit response must only ever reduce |A_T|
    for (double w : {tp.cavity_freq - 2.0, tp.cavity_freq, tp.cavity_freq + 1.0})
        for (double eta : {-3.0, 0.0, 0.4, 2.2})
            CHECK(std::abs(cqed::transmission_amplitude(w, eta, tp, sb)) <=
                  1.0 + 1e-12);
}

TEST_CASE("band-center transmission matches the frozen ensemble averages") {
    auto tp = figure_cavity();
    auto sb = figure_bath();
    sb.gamma_phi = 0.01;
    cqed::EnsembleParams ep;

    ep.t2star = 0.1;
    CHECK(std::abs(std::abs(cqed::averaged_transmission(tp.cavity_freq, tp,
                                                        sb, ep)) -
                   frozen::kATcenter_T2s01) < 2e-5);
    ep.t2star = 1.0;
    CHECK(std::abs(std::abs(cqed::averaged_transmission(tp.cavity_freq, tp,
                                                        sb, ep)) -
                   frozen::kATcenter_T2s1) < 2e-5);
    ep.t2star = 10.0;
    CHECK(std::abs(std::abs(cqed::averaged_transmission(tp.cavity_freq, tp,
                                                        sb, ep)) -
                   frozen::kATcenter_T2s10) < 2e-5);
}

TEST_CASE("feature count grows as the inhomogeneous line narrows") {
    auto tp = figure_cavity();
    auto sb = figure_bath();
    sb.gamma_phi = 0.01;
    cqed::EnsembleParams ep;
    auto count = [&](double t2star) {
        ep.t2star = t2star;
        auto scan = cqed::transmission_scan(tp, sb, ep, 801);
        std::vector<double> mag(scan.amplitude.size());
        for (std::size_t i = 0; i < mag.size(); ++i)
            mag[i] = std::abs(scan.amplitude[i]);
        double bound = cqed::transmission_passivity_bound(tp);
        for (double m : mag) CHECK(m <= bound + 1e-9);
        return cqed::count_spectral_features(mag);
    };
    CHECK(count(0.1) == frozen::kFeatures_T2s01);
    CHECK(count(1.0) == frozen::kFeatures_T2s1);
    CHECK(count(10.0) == frozen::kFeatures_T2s10);
}
